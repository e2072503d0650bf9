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

// Quasi-periodic kernel of the Lippmann-Schwinger operator,
//   H(kappa; x, z) = (i kappa / 2) sum_m exp(i(x k_m + |z| beta_m)) / beta_m,
//   k_m = kx + 2 pi m,  beta_m = branch_sqrt(kappa - k_m^2),
// equivalently (i kappa / 4) sum_m exp(i m kx) H0(k |r - m e_x|).

#include <array>
#include <vector>

#include "siegert/channels.hpp"

namespace siegert {

struct KernelEval {
  cplx value;
  int terms_used = 0;
  double est_error = 0.0;
};

// Plane-wave series with symmetric truncation until the geometric tail bound
// drops below `tol` (absolute).
KernelEval green_spectral(const SpectralPoint& p, double x, double z, double tol,
                          int max_terms = 100000);

// Image sum over |m| <= M of the free-space kernel. For real kappa the sum is
// only conditionally convergent; pass accelerate = true to apply Wynn's
// epsilon algorithm to the symmetric partial sums.
cplx green_direct(const SpectralPoint& p, double x, double z, int M, bool accelerate = false);

// (dH/dx, dH/dz), term-wise differentiated spectral series; z != 0.
std::array<cplx, 2> green_gradient(const SpectralPoint& p, double x, double z, double tol);

// Logarithmic part of H at the source: S(rho) = -(kappa / 2 pi) ln rho.
inline cplx green_log_part(cplx kappa, double rho) {
  return -kappa * std::log(rho) / kTwoPi;
}

// Fast evaluator for a fixed spectral point. Uses an Ewald split for |z| < 0.5
// and the plane-wave series otherwise. Arguments are separations with
// |x| < 1 (the nearest singular image is m = 0).
class Kernel {
 public:
  explicit Kernel(const SpectralPoint& p);

  const SpectralPoint& point() const { return p_; }

  // H(kappa; x, z); (x, z) must not be a lattice point.
  cplx value(double x, double z) const;

  // H - S(rho) with rho = sqrt(x^2 + z^2); finite at rho = 0.
  cplx regular(double x, double z) const;

  // {H(x, z), H(-x, z)} for the price of one evaluation.
  std::array<cplx, 2> value_pair(double x, double z) const;

 private:
  void ewald(double x, double z, bool subtract_log, cplx* pos, cplx* neg) const;
  void spectral(double x, double z, cplx* pos, cplx* neg) const;

  SpectralPoint p_;
  double eta_ = 0.0;                 // Ewald splitting parameter
  int n_spec_ = 0;                   // spectral terms |n| <= n_spec_
  std::vector<double> km_;           // k_n for n = -n_spec_..n_spec_
  std::vector<cplx> beta_;           // beta_n
  std::vector<cplx> gamma_;          // -i beta_n
  std::vector<cplx> jcoef_;          // (kappa / (4 eta^2))^j / j!
  int n_plane_ = 0;                  // plane-wave terms for |z| >= 0.5
};

}  // namespace siegert
