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

// Plane-wave scattering: driven solves, reflection/transmission spectra,
// Lorentzian fits and pole amplitudes.
//
// Incidence is exp(i(kx x + kz z)) with kz > 0, travelling towards +z.
// r_m are the scattered amplitudes below the structure, t_m those above
// (excluding the incident wave), both referenced to z = 0.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "siegert/siegert_solver.hpp"

namespace siegert {

struct ScatteringSolution {
  SpectralPoint p;
  double h = 0.0;
  std::shared_ptr<const QuadratureDomain> quad;
  CVec total;                 // total field on the nodes
  std::map<int, cplx> r, t;   // open channels only
  double flux_deficit = 0.0;

  double reflectance() const;    // |r_0|^2
  double transmittance() const;  // |t_0 + 1|^2
  NodalField field() const { return {p, quad, total, true}; }
};

// exp(i(kx x + kz z)) on the nodes, kz = branch_sqrt(kappa - kx^2).
CVec incident_on_nodes(const QuadratureDomain& q, const SpectralPoint& p);

ScatteringSolution solve_plane_wave(const StructureSpec& s, double h, double k, double kx,
                                    std::shared_ptr<const QuadratureDomain> q);

struct SpectrumRow {
  double k = 0.0;
  double kappa = 0.0;
  double T = 0.0;
  double R = 0.0;
  double flux_deficit = 0.0;
  bool ok = false;
  std::string error;  // set when the solve failed
};

// One solve per k (parallel, rows in input order). Points closer than
// `threshold_gap` to a diffraction threshold are reported as failed.
std::vector<SpectrumRow> spectrum(const StructureSpec& s, double h, const std::vector<double>& ks,
                                  double kx, std::shared_ptr<const QuadratureDomain> q,
                                  double threshold_gap = 1e-4);

struct LorentzianFit {
  double kappa_res = 0.0;   // center k_n^2
  double gamma = 0.0;       // half width Gamma_n
  double amplitude = 0.0;   // peak height above background (signed)
  double b0 = 0.0, b1 = 0.0;
  double rel_rms = 0.0;     // rms residual / data range
};

// Least-squares fit of y = A G^2 / ((x - x0)^2 + G^2) + b0 + b1 (x - xc) over
// the samples with lo <= x <= hi. Throws PoorFit when rel_rms > max_rel_rms.
LorentzianFit fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y, double lo,
                             double hi, double max_rel_rms = 2e-2);

enum class AmplitudeRoute { ResidueFormula, BoundaryFormula };

struct AmplitudeRecord {
  cplx a_n;
  AmplitudeRoute route;
};

// a_n = <phi_n, E_i(kappa_n)> (requires the left functional).
AmplitudeRecord residue_amplitude(const SiegertPole& pole);

// The same pole seen at -kx (exists for real eps by reciprocity); at kx = 0
// this is the pole itself.
SiegertPole adjoint_pole(const StructureSpec& s, const SiegertPole& pole);

// Boundary route: Green's identity between the driven field and the adjoint
// state F through the box D' gives
//   a_n = 2 i beta_0 F^-_0 / (int_{D'} E_n F eps
//         + sum_m i / (2 beta_m) (U_m U^F_{-m} + D_m D^F_{-m})),
// with U, D the level amplitudes of E_n and F at z2 and z1.
AmplitudeRecord boundary_amplitude(const SiegertPole& pole, const SiegertPole& adjoint,
                                   const FluxBox& box);

// E_a = E_w - E_i - sum_n a_n / (kappa - kappa_n) E_n on the nodes.
CVec background_field(const ScatteringSolution& sol, const std::vector<SiegertPole>& poles);

}  // namespace siegert
