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

// Siegert poles: scanning, refinement, far-field amplitudes, flux width and
// bound-state normalization.

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "siegert/ls_operator.hpp"
#include "siegert/modal.hpp"

namespace siegert {

struct Region {
  double re_lo, re_hi, im_lo, im_hi;
};

struct Candidate {
  cplx kappa;
  double indicator;  // smallest singular value of I - A
};

// Local minima of sigma_min(I - A(kappa)) over an nx x ny grid, kept when
// below `promote`, sorted by indicator.
std::vector<Candidate> scan_poles(const StructureSpec& s, double h, double kx,
                                  const Region& region, int nx, int ny,
                                  std::shared_ptr<const QuadratureDomain> q,
                                  double promote = 0.25);

enum class NormalizationTag { MaxAbsOne, BicNormalized };

struct SiegertPole {
  cplx kappa;
  double kx = 0.0;
  double h = 0.0;
  std::shared_ptr<const QuadratureDomain> quad;
  CVec state;             // E_n on the nodes
  CVec left;              // left eigenvector w of A(kappa_n) (unit norm)
  CVec left_functional;   // phi_n: residue of (I - A)^{-1} is <phi_n, .> E_n
  cplx lambda0;
  cplx d_lambda_d_kappa;
  double gap = 0.0;
  double residual = 0.0;  // ||A E - E|| / ||E||
  int iterations = 0;
  NormalizationTag tag = NormalizationTag::MaxAbsOne;

  double gamma() const { return -kappa.imag(); }
  NodalField field() const { return {{kappa, kx}, quad, state, false}; }
};

struct RefineOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double cut_margin = 1e-8;
  double disk_delta = 1e-3;  // uniqueness disk around lambda = 1
  bool derivative = true;
};

SiegertPole refine_pole(const StructureSpec& s, double h, double kx, cplx guess,
                        std::shared_ptr<const QuadratureDomain> q,
                        const RefineOptions& opt = {});

// Rescales state, left functional consistently: E -> alpha E, phi -> phi / conj(alpha).
void rescale(SiegertPole& pole, cplx alpha);

// m -> (S^+_m, S^-_m) for m in [m_lo, m_hi].
std::map<int, std::pair<cplx, cplx>> far_field_amplitudes(const SiegertPole& pole, int m_lo,
                                                          int m_hi);

cplx eval_siegert_field(const SiegertPole& pole, double x, double z);

struct FluxBox {
  double z1;
  double z2;
};

FluxBox default_flux_box(const SiegertPole& pole, double margin = 0.1);

double width_from_flux(const SiegertPole& pole, const FluxBox& box);

// int_S |E|^2 eps over the strip: box integral plus closed-channel tails.
double strip_norm_sq(const SiegertPole& pole);

SiegertPole normalize_bic(const SiegertPole& pole, double gamma_tol = 1e-6);

// Residue of (I - A(kappa))^{-1} at the pole by trapezoidal contour quadrature
// in kappa (independent of the eigenvector formula).
CMat residue_by_contour(const StructureSpec& s, const SiegertPole& pole, double radius,
                        int n_points = 16);

}  // namespace siegert
