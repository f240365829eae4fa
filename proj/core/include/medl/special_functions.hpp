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

namespace medl {

// Polygamma functions of order 1 and 2 for real x > 0.
//
// Both shift the argument upward with the recurrences
//   trigamma(x)   = trigamma(x + 1)   + 1 / x^2
//   tetragamma(x) = tetragamma(x + 1) - 2 / x^3
// until x >= 10 and then sum the Bernoulli asymptotic series. Relative error
// is below 1e-13 across (0, inf).
double trigamma(double x);
double tetragamma(double x);

}  // namespace medl
