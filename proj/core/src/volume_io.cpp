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

#include "medl/volume_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "medl/error.hpp"

namespace medl {
namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::byte>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void u16(std::uint16_t v) {
    for (int s = 0; s < 16; s += 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

 private:
  std::vector<std::byte>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(in_[pos_++]); }
  std::uint16_t u16() {
    std::uint16_t v = 0;
    for (int s = 0; s < 16; s += 8) v |= static_cast<std::uint16_t>(u8()) << s;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int s = 0; s < 32; s += 8) v |= static_cast<std::uint32_t>(u8()) << s;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

void encode_header(const VolumeHeader& h, ByteWriter& w) {
  for (char c : kVolumeMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(h.format_version);
  w.u8(static_cast<std::uint8_t>(h.kind));
  w.u32(h.num_classes);
  w.u32(h.dims.h);
  w.u32(h.dims.w);
  w.u32(h.dims.l);
  w.f32(h.spacing.x);
  w.f32(h.spacing.y);
  w.f32(h.spacing.z);
  w.u8(static_cast<std::uint8_t>(h.dtype));
}

const char* kind_name(VolumeKind k) {
  switch (k) {
    case VolumeKind::kEvidence: return "evidence";
    case VolumeKind::kLabels: return "labels";
    case VolumeKind::kScalarField: return "scalar field";
  }
  return "?";
}

template <typename T>
T expect_kind(Volume v, const std::filesystem::path& path) {
  if (auto* typed = std::get_if<T>(&v)) return std::move(*typed);
  fail(ErrorCode::kKindMismatch,
       path.string() + ": holds " + kind_name(header_of(v).kind) + " data");
}

}  // namespace

VolumeHeader header_of(const Volume& volume) {
  VolumeHeader h;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        h.dims = v.dims();
        h.spacing = v.spacing();
        if constexpr (std::is_same_v<T, EvidenceMap>) {
          h.kind = VolumeKind::kEvidence;
          h.num_classes = static_cast<std::uint32_t>(v.num_classes());
          h.dtype = PayloadType::kF32;
        } else if constexpr (std::is_same_v<T, LabelMap>) {
          h.kind = VolumeKind::kLabels;
          h.num_classes = static_cast<std::uint32_t>(v.num_classes());
          h.dtype = PayloadType::kU16;
        } else {
          h.kind = VolumeKind::kScalarField;
          h.num_classes = 1;
          h.dtype = PayloadType::kF32;
        }
      },
      volume);
  return h;
}

VolumeHeader decode_header(std::span<const std::byte> bytes) {
  if (bytes.size() < kVolumeHeaderSize) {
    fail(ErrorCode::kSizeMismatch, "file is shorter than the " +
                                       std::to_string(kVolumeHeaderSize) + "-byte header");
  }
  ByteReader r(bytes);
  for (char c : kVolumeMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) fail(ErrorCode::kCorruptHeader, "bad magic");
  }
  VolumeHeader h;
  h.format_version = r.u32();
  if (h.format_version != kVolumeFormatVersion) {
    fail(ErrorCode::kCorruptHeader,
         "unsupported format version " + std::to_string(h.format_version));
  }
  const std::uint8_t kind = r.u8();
  if (kind > 2) fail(ErrorCode::kCorruptHeader, "unknown volume kind " + std::to_string(kind));
  h.kind = static_cast<VolumeKind>(kind);
  h.num_classes = r.u32();
  h.dims = Dims{r.u32(), r.u32(), r.u32()};
  h.spacing = Spacing{r.f32(), r.f32(), r.f32()};
  const std::uint8_t dtype = r.u8();
  if (dtype > 1) fail(ErrorCode::kCorruptHeader, "unknown payload dtype " + std::to_string(dtype));
  h.dtype = static_cast<PayloadType>(dtype);

  const PayloadType expected = h.kind == VolumeKind::kLabels ? PayloadType::kU16 : PayloadType::kF32;
  if (h.dtype != expected) {
    fail(ErrorCode::kKindMismatch, std::string(kind_name(h.kind)) + " volume with wrong dtype");
  }
  if (h.kind == VolumeKind::kEvidence && h.num_classes < 2) {
    fail(ErrorCode::kKindMismatch, "evidence volume needs K >= 2");
  }
  if (h.kind == VolumeKind::kScalarField && h.num_classes != 1) {
    fail(ErrorCode::kKindMismatch, "scalar field must have K = 1");
  }
  return h;
}

std::vector<std::byte> encode_volume(const Volume& volume) {
  const VolumeHeader h = header_of(volume);
  std::vector<std::byte> out;
  out.reserve(kVolumeHeaderSize + h.payload_bytes());
  ByteWriter w(out);
  encode_header(h, w);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EvidenceMap>) {
          for (float x : v.data()) w.f32(x);
        } else if constexpr (std::is_same_v<T, LabelMap>) {
          for (std::uint16_t x : v.labels()) w.u16(x);
        } else {
          for (float x : v.values()) w.f32(x);
        }
      },
      volume);
  return out;
}

Volume decode_volume(std::span<const std::byte> bytes) {
  const VolumeHeader h = decode_header(bytes);
  // Multiply the extents out with an explicit bound so hostile headers cannot wrap.
  const std::size_t limit = std::numeric_limits<std::size_t>::max() / 8;
  std::size_t values = 1;
  for (std::uint32_t extent : {h.dims.h, h.dims.w, h.dims.l, h.num_classes}) {
    if (extent != 0 && values > limit / extent) {
      fail(ErrorCode::kSizeMismatch, "header dimensions exceed the payload");
    }
    values *= extent;
  }
  const std::size_t expected = kVolumeHeaderSize + h.payload_bytes();
  if (bytes.size() != expected) {
    fail(ErrorCode::kSizeMismatch, "payload is " + std::to_string(bytes.size() - kVolumeHeaderSize) +
                                       " bytes, header implies " +
                                       std::to_string(h.payload_bytes()));
  }
  ByteReader r(bytes.subspan(kVolumeHeaderSize));
  const std::size_t n = h.payload_values();
  switch (h.kind) {
    case VolumeKind::kEvidence: {
      std::vector<float> data(n);
      for (float& x : data) x = r.f32();
      return EvidenceMap(h.dims, h.num_classes, h.spacing, std::move(data));
    }
    case VolumeKind::kLabels: {
      std::vector<std::uint16_t> labels(n);
      for (auto& x : labels) x = r.u16();
      return LabelMap(h.dims, h.num_classes, h.spacing, std::move(labels));
    }
    case VolumeKind::kScalarField: {
      std::vector<float> values(n);
      for (float& x : values) x = r.f32();
      return ScalarField(h.dims, h.spacing, std::move(values));
    }
  }
  fail(ErrorCode::kCorruptHeader, "unknown volume kind");
}

Volume read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIoFailure, "read failed: " + path.string());
  return decode_volume(std::as_bytes(std::span(raw)));
}

void write_volume(const Volume& volume, const std::filesystem::path& path) {
  const std::vector<std::byte> bytes = encode_volume(volume);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoFailure, "write failed: " + path.string());
}

double softplus(double x) noexcept {
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

EvidenceMap read_evidence(const std::filesystem::path& path, bool apply_softplus) {
  EvidenceMap e = expect_kind<EvidenceMap>(read_volume(path), path);
  if (apply_softplus) {
    for (float& x : e.data()) x = static_cast<float>(softplus(x));
  }
  return e;
}

LabelMap read_labels(const std::filesystem::path& path) {
  return expect_kind<LabelMap>(read_volume(path), path);
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
  return expect_kind<ScalarField>(read_volume(path), path);
}

void export_csv(const ScalarField& field, const std::filesystem::path& path) {
  if (path.empty()) fail(ErrorCode::kIoFailure, "empty CSV output path");
  for (float x : field.values()) {
    if (!std::isfinite(x)) fail(ErrorCode::kSerialization, "cannot serialize non-finite value");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  const Dims& d = field.dims();
  char line[96];
  for (std::size_t i = 0; i < d.h; ++i) {
    for (std::size_t j = 0; j < d.w; ++j) {
      for (std::size_t k = 0; k < d.l; ++k) {
        const int n = std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.9g\n", i, j, k,
                                    static_cast<double>(field[d.index(i, j, k)]));
        out.write(line, n);
      }
    }
  }
  if (!out) fail(ErrorCode::kIoFailure, "write failed: " + path.string());
}

}  // namespace medl
