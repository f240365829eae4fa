// Copyright 2026 The MEDL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "medl/volume.hpp"

namespace medl {

// On-disk layout of a .mev file. Every multi-byte field is little-endian and
// the header is packed (38 bytes):
//
//   offset  size  field
//        0     4  magic "MEVL"
//        4     4  format_version (u32, currently 1)
//        8     1  kind (u8: 0 evidence, 1 labels, 2 scalar field)
//        9     4  K (u32; class count, 1 for scalar fields)
//       13    12  dims H, W, L (3 x u32)
//       25    12  spacing (3 x f32, mm)
//       37     1  payload dtype (u8: 0 f32, 1 u16)
//       38     -  payload
//
// Evidence payloads hold K * H * W * L f32 values channels-major (channel,
// then C row order over H, W, L). Label payloads hold H * W * L u16 values,
// scalar fields H * W * L f32 values.
inline constexpr std::array<char, 4> kVolumeMagic = {'M', 'E', 'V', 'L'};
inline constexpr std::uint32_t kVolumeFormatVersion = 1;
inline constexpr std::size_t kVolumeHeaderSize = 38;

enum class VolumeKind : std::uint8_t { kEvidence = 0, kLabels = 1, kScalarField = 2 };
enum class PayloadType : std::uint8_t { kF32 = 0, kU16 = 1 };

struct VolumeHeader {
  std::uint32_t format_version = kVolumeFormatVersion;
  VolumeKind kind = VolumeKind::kScalarField;
  std::uint32_t num_classes = 1;
  Dims dims{};
  Spacing spacing{};
  PayloadType dtype = PayloadType::kF32;

  std::size_t payload_values() const noexcept {
    return kind == VolumeKind::kEvidence ? dims.voxels() * num_classes : dims.voxels();
  }
  std::size_t payload_bytes() const noexcept {
    return payload_values() * (dtype == PayloadType::kU16 ? 2 : 4);
  }
};

using Volume = std::variant<EvidenceMap, LabelMap, ScalarField>;

VolumeHeader header_of(const Volume& volume);

// Parses and validates a header. Throws kCorruptHeader on bad magic, version
// or enum values, kKindMismatch on an invalid kind/dtype/K combination and
// kSizeMismatch when fewer than kVolumeHeaderSize bytes are available.
VolumeHeader decode_header(std::span<const std::byte> bytes);

std::vector<std::byte> encode_volume(const Volume& volume);
// Throws kSizeMismatch unless the payload length matches the header exactly.
Volume decode_volume(std::span<const std::byte> bytes);

// File wrappers; I/O problems raise kIoFailure.
Volume read_volume(const std::filesystem::path& path);
void write_volume(const Volume& volume, const std::filesystem::path& path);

// Typed readers throw kKindMismatch when the file holds another kind.
// apply_softplus maps raw network outputs x to log(1 + e^x) before returning.
EvidenceMap read_evidence(const std::filesystem::path& path, bool apply_softplus = false);
LabelMap read_labels(const std::filesystem::path& path);
ScalarField read_scalar_field(const std::filesystem::path& path);

double softplus(double x) noexcept;

// One "i,j,k,value" line per voxel in C row order, value printed with 9
// significant digits. NaN or infinite values raise kSerialization before the
// file is touched.
void export_csv(const ScalarField& field, const std::filesystem::path& path);

}  // namespace medl
