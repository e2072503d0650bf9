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

// Fields generated by nodal sources (Siegert states or scattering solutions):
// plane-wave amplitudes and L2 norms over horizontal strips. Away from the
// inclusions the field is a sum of up/down-going Bloch modes, so the strip
// integrals there are done mode by mode in closed form; only z-bands that
// intersect an inclusion are integrated numerically through the interpolant.

#include <memory>

#include "siegert/ls_operator.hpp"

namespace siegert {

struct NodalField {
  SpectralPoint p;
  std::shared_ptr<const QuadratureDomain> q;
  CVec E;                 // total field on the nodes
  bool incident = false;  // add exp(i(kx x + kz z)), kz = branch_sqrt(kappa - kx^2)
};

// S^{+/-}_m = (i kappa / (2 beta_m)) sum_j c_j E_j exp(-i x_j k_m -/+ i z_j beta_m)
cplx far_amplitude(const NodalField& f, int m, int sign);

// Amplitude at level z_ref of mode m radiated by all nodes: up = true gives
// the coefficient of exp(i(x k_m + (z - z_ref) beta_m)) above every node,
// up = false that of exp(i(x k_m - (z - z_ref) beta_m)) below every node.
// Stable for closed channels (no exp(|z| Im beta) growth).
cplx level_amplitude(const NodalField& f, int m, double z_ref, bool up);

// Number of orders |m| <= M needed for closed-channel factors
// exp(-Im beta_m d) to fall below 1e-18 over distance d.
int modes_for_distance(const SpectralPoint& p, double d);

// Field value anywhere (Bloch-reduced interpolant; includes the incident wave).
cplx field_value(const NodalField& f, double x, double z);

// Field value from the mode sum above (z > top node) or below (z < bottom node).
cplx field_value_modal(const NodalField& f, double x, double z, int max_order = 2000);

struct NormOptions {
  bool eps_weighted = true;  // add sum_j c_j |E_j|^2 (nodes inside [z1, z2])
  bool closed_tails = false; // add closed-channel tails beyond z1 and z2 to infinity
  int x_points = 16;
  int z_points = 8;          // Gauss points per z panel inside inclusion bands
  double z_panel = 0.2;
};

// int_{[0,1] x [z1, z2]} |E|^2 (eps) dA; z1 must lie below and z2 above every
// node.
double field_norm_sq(const NodalField& f, double z1, double z2, const NormOptions& opt = {});

// int_{[0,1] x [z1, z2]} f g (eps) dA without conjugation, for source fields
// f at (kappa, kx) and g at (kappa, -kx) on the same quadrature.
cplx field_bilinear(const NodalField& f, const NodalField& g, double z1, double z2,
                    const NormOptions& opt = {});

}  // namespace siegert
