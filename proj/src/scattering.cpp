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

#include "siegert/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siegert/error.hpp"

namespace siegert {
namespace {

constexpr cplx kI(0.0, 1.0);

int open_order(const SpectralPoint& p) {
  return int(std::ceil((std::sqrt(std::max(0.0, p.kappa.real())) + std::abs(p.kx)) / kTwoPi)) + 1;
}

// Linear part of the Lorentzian model for fixed (x0, G).
struct LinearFit {
  Eigen::Vector3d c;
  Eigen::VectorXd resid;
};

LinearFit solve_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double xc, double x0,
                       double G) {
  Eigen::MatrixXd Phi(x.size(), 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x(i) - x0;
    Phi(i, 0) = G * G / (d * d + G * G);
    Phi(i, 1) = 1.0;
    Phi(i, 2) = x(i) - xc;
  }
  LinearFit f;
  f.c = Phi.colPivHouseholderQr().solve(y);
  f.resid = y - Phi * f.c;
  return f;
}

}  // namespace

double ScatteringSolution::reflectance() const {
  auto it = r.find(0);
  return it == r.end() ? 0.0 : std::norm(it->second);
}

double ScatteringSolution::transmittance() const {
  auto it = t.find(0);
  return it == t.end() ? 1.0 : std::norm(it->second + 1.0);
}

CVec incident_on_nodes(const QuadratureDomain& q, const SpectralPoint& p) {
  const cplx kz = branch_sqrt(p.kappa - p.kx * p.kx);
  CVec v(Eigen::Index(q.nodes.size()));
  for (std::size_t j = 0; j < q.nodes.size(); ++j)
    v(Eigen::Index(j)) = std::exp(kI * (p.kx * q.nodes[j].x + kz * q.nodes[j].z));
  return v;
}

ScatteringSolution solve_plane_wave(const StructureSpec& s, double h, double k, double kx,
                                    std::shared_ptr<const QuadratureDomain> q) {
  if (!(k > 0.0) || !(k * k > kx * kx))
    throw Error(ErrorCode::InvalidArgument, "incidence must be propagating (k > |kx|)");
  ScatteringSolution sol;
  sol.p = {cplx(k * k, 0.0), kx};
  sol.h = h;
  sol.quad = q;
  const int M = open_order(sol.p);
  require_off_threshold(sol.p, M);
  const auto op = assemble(s, h, sol.p, q);
  sol.total = resolvent_solve(op, incident_on_nodes(*q, sol.p));

  const auto f = sol.field();
  const double kz = std::sqrt(k * k - kx * kx);
  double flux = 0.0;
  for (int m = -M; m <= M; ++m) {
    const double km = bloch_wavenumber(kx, m);
    if (km * km >= k * k) continue;
    const double beta = std::sqrt(k * k - km * km);
    const cplx rm = far_amplitude(f, m, -1);
    const cplx tm = far_amplitude(f, m, +1);
    sol.r[m] = rm;
    sol.t[m] = tm;
    flux += beta / kz * (std::norm(rm) + std::norm(tm + (m == 0 ? 1.0 : 0.0)));
  }
  sol.flux_deficit = std::abs(1.0 - flux);
  return sol;
}

std::vector<SpectrumRow> spectrum(const StructureSpec& s, double h, const std::vector<double>& ks,
                                  double kx, std::shared_ptr<const QuadratureDomain> q,
                                  double threshold_gap) {
  std::vector<SpectrumRow> rows(ks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(ks.size()); ++i) {
    SpectrumRow& row = rows[std::size_t(i)];
    row.k = ks[std::size_t(i)];
    row.kappa = row.k * row.k;
    try {
      const SpectralPoint p{cplx(row.kappa, 0.0), kx};
      for (const auto& t : diffraction_thresholds(kx, open_order(p) + 1))
        if (std::abs(row.kappa - t.value) < threshold_gap)
          throw Error(ErrorCode::BranchPoint, "too close to threshold m=" + std::to_string(t.m));
      const auto sol = solve_plane_wave(s, h, row.k, kx, q);
      row.T = sol.transmittance();
      row.R = sol.reflectance();
      row.flux_deficit = sol.flux_deficit;
      row.ok = true;
    } catch (const Error& e) {
      row.error = std::string(error_name(e.code())) + ": " + e.what();
    }
  }
  return rows;
}

LorentzianFit fit_lorentzian(const std::vector<double>& xs, const std::vector<double>& ys,
                             double lo, double hi, double max_rel_rms) {
  std::vector<double> xv, yv;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    if (xs[i] >= lo && xs[i] <= hi && std::isfinite(ys[i])) {
      xv.push_back(xs[i]);
      yv.push_back(ys[i]);
    }
  const Eigen::Index n = Eigen::Index(xv.size());
  if (n < 6) throw Error(ErrorCode::PoorFit, "too few samples in the fit window");
  const Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xv.data(), n);
  const Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(yv.data(), n);
  const double xc = 0.5 * (x.minCoeff() + x.maxCoeff());
  const double span = x.maxCoeff() - x.minCoeff();
  const double range = std::max(y.maxCoeff() - y.minCoeff(), 1e-300);

  // Initial guess from the largest deviation from the chord between the ends.
  const double slope = (y(n - 1) - y(0)) / (x(n - 1) - x(0));
  Eigen::VectorXd dev(n);
  for (Eigen::Index i = 0; i < n; ++i) dev(i) = y(i) - (y(0) + slope * (x(i) - x(0)));
  Eigen::Index ipk = 0;
  dev.cwiseAbs().maxCoeff(&ipk);
  const double half = 0.5 * std::abs(dev(ipk));
  Eigen::Index il = ipk, ir = ipk;
  while (il > 0 && std::abs(dev(il)) > half) --il;
  while (ir < n - 1 && std::abs(dev(ir)) > half) ++ir;
  const double step = span / double(n - 1);
  double th[2] = {x(ipk), std::log(std::max(0.5 * (x(ir) - x(il)), 0.5 * step))};

  auto cost = [&](const double* t) {
    return solve_linear(x, y, xc, t[0], std::exp(t[1])).resid.squaredNorm();
  };
  // Levenberg-Marquardt on (x0, log G); linear parameters eliminated.
  double lambda = 1e-3;
  double c0 = cost(th);
  for (int it = 0; it < 200; ++it) {
    const auto base = solve_linear(x, y, xc, th[0], std::exp(th[1]));
    Eigen::MatrixXd J(n, 2);
    for (int k = 0; k < 2; ++k) {
      double tp[2] = {th[0], th[1]};
      const double d = (k == 0 ? 1e-7 * std::max(span, 1e-12) : 1e-7);
      tp[k] += d;
      J.col(k) = (solve_linear(x, y, xc, tp[0], std::exp(tp[1])).resid - base.resid) / d;
    }
    const Eigen::Matrix2d JTJ = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * base.resid;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Eigen::Matrix2d Aug = JTJ;
      Aug.diagonal() *= 1.0 + lambda;
      const Eigen::Vector2d dth = Aug.ldlt().solve(-g);
      double tn[2] = {th[0] + dth(0), th[1] + dth(1)};
      const double cn = cost(tn);
      if (std::isfinite(cn) && cn < c0) {
        const double rel = std::abs(dth(0)) / std::max(span, 1e-300) + std::abs(dth(1));
        th[0] = tn[0];
        th[1] = tn[1];
        c0 = cn;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (rel < 1e-13) it = 1 << 20;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  const auto fin = solve_linear(x, y, xc, th[0], std::exp(th[1]));
  LorentzianFit out;
  out.kappa_res = th[0];
  out.gamma = std::exp(th[1]);
  out.amplitude = fin.c(0);
  out.b0 = fin.c(1);
  out.b1 = fin.c(2);
  out.rel_rms = std::sqrt(fin.resid.squaredNorm() / double(n)) / range;
  if (!(out.rel_rms <= max_rel_rms))
    throw Error(ErrorCode::PoorFit,
                "Lorentzian fit residual " + std::to_string(out.rel_rms) + " exceeds threshold");
  return out;
}

AmplitudeRecord residue_amplitude(const SiegertPole& pole) {
  if (pole.left_functional.size() != pole.state.size())
    throw Error(ErrorCode::InvalidArgument, "pole has no left functional");
  const CVec Ei = incident_on_nodes(*pole.quad, {pole.kappa, pole.kx});
  cplx a = 0.0;
  for (Eigen::Index j = 0; j < Ei.size(); ++j)
    a += pole.quad->nodes[std::size_t(j)].w * std::conj(pole.left_functional(j)) * Ei(j);
  return {a, AmplitudeRoute::ResidueFormula};
}

SiegertPole adjoint_pole(const StructureSpec& s, const SiegertPole& pole) {
  if (pole.kx == 0.0) return pole;
  RefineOptions opt;
  opt.derivative = false;
  return refine_pole(s, pole.h, -pole.kx, pole.kappa, pole.quad, opt);
}

AmplitudeRecord boundary_amplitude(const SiegertPole& pole, const SiegertPole& adjoint,
                                   const FluxBox& box) {
  const auto f = pole.field();
  auto g = adjoint.field();
  g.p.kappa = f.p.kappa;  // equal up to the refinement tolerance
  double zmin = HUGE_VAL, zmax = -HUGE_VAL;
  for (const auto& n : pole.quad->nodes) {
    zmin = std::min(zmin, n.z);
    zmax = std::max(zmax, n.z);
  }
  const int M = modes_for_distance(f.p, std::min(box.z2 - zmax, zmin - box.z1));
  cplx den = field_bilinear(f, g, box.z1, box.z2);
  for (int m = -M; m <= M; ++m) {
    const double km = bloch_wavenumber(f.p.kx, m);
    const cplx beta = branch_sqrt(f.p.kappa - km * km);
    den += kI / (2.0 * beta) *
           (level_amplitude(f, m, box.z2, true) * level_amplitude(g, -m, box.z2, true) +
            level_amplitude(f, m, box.z1, false) * level_amplitude(g, -m, box.z1, false));
  }
  const cplx beta0 = branch_sqrt(f.p.kappa - f.p.kx * f.p.kx);
  const cplx num = 2.0 * kI * beta0 * far_amplitude(g, 0, -1);
  return {num / den, AmplitudeRoute::BoundaryFormula};
}

CVec background_field(const ScatteringSolution& sol, const std::vector<SiegertPole>& poles) {
  CVec Ea = sol.total - incident_on_nodes(*sol.quad, sol.p);
  for (const auto& pole : poles) {
    if (pole.state.size() != Ea.size())
      throw Error(ErrorCode::DimensionMismatch, "pole and solution use different quadratures");
    const cplx a = residue_amplitude(pole).a_n;
    Ea -= a / (sol.p.kappa - pole.kappa) * pole.state;
  }
  return Ea;
}

}  // namespace siegert
