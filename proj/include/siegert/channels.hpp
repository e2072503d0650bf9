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

// Branch-cut convention, diffraction thresholds and open/closed channel sets.
//
// Square roots use the cut of the logarithm along the negative imaginary axis,
// arg w in (-pi/2, 3pi/2). With this choice every closed channel has
// Im sqrt(kappa - kx_m^2) > 0, and the kernel extends analytically to the
// plane cut along the vertical half-lines {kx_m^2 - i s, s >= 0}.

#include <complex>
#include <vector>

namespace siegert {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct SpectralPoint {
  cplx kappa;
  double kx = 0.0;
};

// sqrt(w) with arg w in (-pi/2, 3pi/2). Throws CutPoint for w = -i s, s > 0.
cplx branch_sqrt(cplx w);

// (kx + 2 pi m)
inline double bloch_wavenumber(double kx, int m) { return kx + kTwoPi * m; }

struct Threshold {
  int m;
  double value;  // (kx + 2 pi m)^2
};

std::vector<Threshold> diffraction_thresholds(double kx, int max_order);

// [kx] in (-pi, pi]: the argument of exp(i kx).
double reduced_kx(double kx);

struct Interval {
  double lo;
  double hi;
  bool empty() const { return !(lo < hi); }
};

struct ThresholdLadder {
  double kx = 0.0;
  // kappa*_0, kappa*_-1, kappa*_1, kappa*_-2, ... with their ladder labels.
  std::vector<Threshold> thresholds;
  // I_0 = (-inf, kappa*_0), I_1, I_2, ...
  std::vector<Interval> intervals;

  // Index l of the interval containing real kappa, or -1 when kappa sits on a
  // threshold or beyond the ladder.
  int interval_of(double kappa) const;
};

ThresholdLadder threshold_ladder(double kx, int count);

struct ChannelSets {
  std::vector<int> open;
  std::vector<int> closed;
};

ChannelSets classify_channels(const SpectralPoint& p, int max_order);

// True iff kappa is in the upper half-plane or horizontally farther than
// `margin` from every cut with |m| <= max_order.
bool in_cut_plane(const SpectralPoint& p, int max_order, double margin);

// Truncation order M such that every excluded channel decays at least by
// exp(-35) across `min_distance` (capped at `cap`).
int default_truncation(const SpectralPoint& p, double min_distance, int cap = 400);

// Throws BranchPoint if kappa is within `tol` of a threshold with |m| <= max_order.
void require_off_threshold(const SpectralPoint& p, int max_order, double tol = 1e-12);

}  // namespace siegert
