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

#include "medl/special_functions.hpp"

#include <cmath>
#include <string>

#include "medl/error.hpp"

namespace medl {
namespace {

constexpr double kAsymptoticStart = 10.0;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    fail(ErrorCode::kDomain,
         std::string(name) + " requires finite x > 0, got " + std::to_string(x));
  }
}

}  // namespace

double trigamma(double x) {
  require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < kAsymptoticStart) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // 1/x + 1/(2x^2) + sum_k B_2k / x^(2k+1)
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r2 * r *
      (1.0 / 6.0 +
       r2 * (-1.0 / 30.0 +
             r2 * (1.0 / 42.0 +
                   r2 * (-1.0 / 30.0 +
                         r2 * (5.0 / 66.0 +
                               r2 * (-691.0 / 2730.0 + r2 * (7.0 / 6.0)))))));
  return acc + r + 0.5 * r2 + series;
}

double tetragamma(double x) {
  require_positive(x, "tetragamma");
  double acc = 0.0;
  while (x < kAsymptoticStart) {
    acc -= 2.0 / (x * x * x);
    x += 1.0;
  }
  // -(1/x^2 + 1/x^3 + sum_k (2k+1) B_2k / x^(2k+2))
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r2 * r2 *
      (1.0 / 2.0 +
       r2 * (-1.0 / 6.0 +
             r2 * (1.0 / 6.0 +
                   r2 * (-3.0 / 10.0 +
                         r2 * (5.0 / 6.0 +
                               r2 * (-691.0 / 210.0 + r2 * (35.0 / 2.0)))))));
  return acc - (r2 + r2 * r + series);
}

}  // namespace medl
