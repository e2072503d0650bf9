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

// Time dependence of a Siegert state excited by a Gaussian wave packet.

#include <complex>
#include <vector>

#include "siegert/channels.hpp"

namespace siegert {

struct WavePacket {
  double k_c = 1.0;    // center wavenumber
  double sigma = 0.1;  // width
  double c = 1.0;      // wave speed

  // exp(-(k - k_c)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)), also for complex k.
  cplx amplitude(cplx k) const;
};

void validate(const WavePacket& w);

struct DecayConstants {
  double k_tilde = 0.0;
  double tau = 0.0;  // +inf for Gamma = 0
};

// kappa_n = k_n^2 - i Gamma_n. Throws NegativeRealPart when k_n^2 <= 0.
DecayConstants decay_constants(cplx kappa_n, double c = 1.0);

// a_tilde sqrt(Gamma) int_0^inf A(k) exp(-i c k t) / (k^2 - kappa_n) dk by
// adaptive Gauss-Kronrod over [max(0, k_c - 8 sigma), k_c + 8 sigma]. Throws
// QuadratureBudget when the panel budget is exhausted.
std::vector<cplx> omega_direct(cplx kappa_n, cplx a_tilde, const WavePacket& w,
                               const std::vector<double>& times, double rel_tol = 1e-10);

// Residue term a_tilde * (-pi i) sqrt(Gamma) / sqrt(kappa_n) A(sqrt(kappa_n))
// exp(-i c t sqrt(kappa_n)). Throws PoleNotEnclosed when k_n^2 <= 0.
std::vector<cplx> omega_residue(cplx kappa_n, cplx a_tilde, const WavePacket& w,
                                const std::vector<double>& times);

struct ObservationWindow {
  double t_max = 0.0;     // k_c / (c sigma^2)
  bool sigma_ok = false;  // half-life ln(2) tau fits inside the window
};

ObservationWindow observation_window(cplx kappa_n, const WavePacket& w);

// Half-life from a least-squares fit of log|envelope| over [t_lo, t_hi].
double extract_half_life(const std::vector<double>& times, const std::vector<double>& envelope,
                         double t_lo, double t_hi);

}  // namespace siegert
