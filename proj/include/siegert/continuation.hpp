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

// Pole branches h -> kappa_n(h) under a coupling parameter, bound states in
// the continuum on them, and the near-BIC amplitude laws.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "siegert/scattering.hpp"

namespace siegert {

struct BranchSample {
  double h = 0.0;
  SiegertPole pole;
};

struct ContinuationOptions {
  double step0 = 0.01;
  double min_step = 1e-6;
  // Corrector result is accepted when it lies within this distance of the
  // linear predictor, relative to max(|last increment|, 1e-3 |kappa|).
  double predictor_tol = 0.5;
  RefineOptions refine;
};

struct ContinuationBranch {
  std::vector<BranchSample> samples;  // ordered along the path
  int halvings = 0;
  double smallest_step = 0.0;
};

// Quadrature for `h` with the same order as `like` (nodes move with h for
// coupled arrays).
std::shared_ptr<const QuadratureDomain> quadrature_at(const StructureSpec& s, double h, int order);

// Continues `start` to h_target. Samples are taken at most step0 apart; on a
// corrector failure the step is halved down to min_step (BranchLost), and a
// corrector that hits a branch cut raises LeftCutPlane.
ContinuationBranch continue_pole(const StructureSpec& s, const SiegertPole& start, double h_target,
                                 const ContinuationOptions& opt = {});

struct BicRecord {
  double h_b = 0.0;
  double kappa_b = 0.0;
  double gamma_b = 0.0;
  SiegertPole state;  // bic_normalized
  int interval_index = 0;
  std::map<int, std::pair<cplx, cplx>> limit_amplitudes;
};

// Golden-section minimization of Gamma(h) around the smallest sampled
// width. Returns nothing when the minimum exceeds tol or the state lies below
// the continuum; throws NoMinimum if the smallest width is at a branch end.
std::optional<BicRecord> detect_bic(const StructureSpec& s, const ContinuationBranch& branch,
                                    double tol = 1e-6, const RefineOptions& ropt = {});

// Rescales a pole near a BIC: box norm plus closed-channel tails equal to 1,
// phase such that the nodal overlap with `reference` is real positive.
SiegertPole normalize_near_bic(const SiegertPole& pole, const SiegertPole& reference);

// m -> (S+, S-) limits at h_b: open channels S / sqrt(Gamma), closed
// channels S itself, by quadratic extrapolation in (h - h_b) over samples on
// one side of h_b with Gamma in [gamma_lo, gamma_hi]. Fills
// bic.limit_amplitudes and returns them.
std::map<int, std::pair<cplx, cplx>> limit_amplitudes(const ContinuationBranch& branch,
                                                      BicRecord& bic, int m_max = 2,
                                                      double gamma_lo = 1e-6,
                                                      double gamma_hi = 1e-2);

struct ScalingRow {
  double h = 0.0;
  double gamma = 0.0;
  cplx a_n;
  cplx a_tilde;  // a_n / sqrt(Gamma)
};

// Residue amplitudes along the branch with near-BIC normalization against
// the BIC state.
std::vector<ScalingRow> amplitude_scaling(const ContinuationBranch& branch, const BicRecord& bic);

struct AmplificationRow {
  double h = 0.0;
  double gamma = 0.0;
  double k_drive = 0.0;
  double near_norm = 0.0;  // ||E_w||_{L2(D)} over the inclusions
  double far_norm = 0.0;   // L2 norm over one period at the far line
};

// Drives each branch sample at k^2 = (Re sqrt(kappa_n(h)))^2 + detune * Gamma_n;
// the far line sits `far_offset` above the top of the support box.
std::vector<AmplificationRow> amplification_curve(const StructureSpec& s,
                                                  const ContinuationBranch& branch,
                                                  double detune = 0.0,
                                                  double far_offset = 2.0);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace siegert
