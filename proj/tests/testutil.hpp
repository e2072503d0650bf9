// Copyright 2026 The siegert Authors.
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

// Shared helpers for the unit tests: seeded generators and tolerances.

#include <complex>
#include <random>

#include "siegert/channels.hpp"

namespace testutil {

using siegert::cplx;

inline std::mt19937_64& rng(unsigned long seed = 0) {
  static thread_local std::mt19937_64 g(20261017);
  if (seed) g.seed(seed);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline cplx uniform_c(double re_lo, double re_hi, double im_lo, double im_hi) {
  const double re = uniform(re_lo, re_hi);
  return {re, uniform(im_lo, im_hi)};
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testutil
