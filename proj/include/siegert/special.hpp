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

#include <complex>
#include <span>
#include <vector>

namespace siegert {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286061;

// H0^(1)(z) = J0(z) + i Y0(z), for Re z >= 0 (z != 0) or z on the positive
// imaginary axis. Real z uses the standard library Bessel functions; complex z
// uses the ascending series for |z| <= 2 and the Laplace-type integral
//   H0(z) = sqrt(2/(pi z)) e^{i(z - pi/4)} (2/sqrt(pi)) int_0^inf e^{-s^2} (1 + i s^2/(2z))^{-1/2} ds
// beyond.
cplx hankel_h1_0(cplx z);

// Faddeeva function w(z) = exp(-z^2) erfc(-i z) for Im z >= 0 (rational
// approximation in the Cayley variable); reflection is applied for Im z < 0.
cplx faddeeva_w(cplx z);

// exp(c) * erfc(u), evaluated without forming the large/small factors apart.
cplx exp_erfc(cplx c, cplx u);

// E_1(x), ..., E_n(x) for x >= 0, written into out[0..n-1] (E_1(0) = +inf).
// Upward recurrence; meant for the moderate x used by lattice sums.
void expint_sequence(double x, std::span<double> out);

// E_1(x) + ln x, regular at x = 0.
double expint_e1_plus_log(double x);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int n);

}  // namespace siegert
