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

#include "siegert/siegert_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siegert/error.hpp"

namespace siegert {
namespace {

constexpr cplx kI(0.0, 1.0);

int cut_order(const SpectralPoint& p) {
  return int(std::ceil((std::sqrt(std::abs(p.kappa.real())) + std::abs(p.kx)) / kTwoPi)) + 2;
}

bool allowed(const SpectralPoint& p, double margin) {
  return in_cut_plane(p, cut_order(p), margin);
}

// Eigenpair of A closest to 1 from a dense eigendecomposition, with left
// vector obtained by a short two-sided iteration.
EigenPairNearOne closest_to_one(const OperatorMatrix& op) {
  Eigen::ComplexEigenSolver<CMat> es(op.A, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigensolver failed");
  Eigen::Index best = 0;
  double dbest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double d = std::abs(es.eigenvalues()(i) - 1.0);
    if (d < dbest) {
      dbest = d;
      best = i;
    }
  }
  CVec v = es.eigenvectors().col(best).normalized();
  return track_eigenpair(op, es.eigenvalues()(best), v, v, 3);
}

}  // namespace

std::vector<Candidate> scan_poles(const StructureSpec& s, double h, double kx,
                                  const Region& region, int nx, int ny,
                                  std::shared_ptr<const QuadratureDomain> q, double promote) {
  if (nx < 3 || ny < 3) throw Error(ErrorCode::InvalidArgument, "scan grid needs nx, ny >= 3");
  if (!(region.re_lo < region.re_hi) || !(region.im_lo < region.im_hi))
    throw Error(ErrorCode::InvalidArgument, "empty scan region");
  if (q->size() == 0) return {};  // vacuum: I - A = I has no poles
  const double dx = (region.re_hi - region.re_lo) / nx;
  const double dy = (region.im_hi - region.im_lo) / ny;
  auto point = [&](int i, int j) {
    return cplx(region.re_lo + (i + 0.5) * dx, region.im_lo + (j + 0.5) * dy);
  };
  std::vector<double> sig(std::size_t(nx) * ny, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < nx * ny; ++idx) {
    const SpectralPoint p{point(idx % nx, idx / nx), kx};
    if (!allowed(p, 1e-6)) continue;
    const auto op = assemble(s, h, p, q);
    sig[idx] = smallest_singular_value(CMat::Identity(op.size(), op.size()) - op.A);
  }
  std::vector<Candidate> out;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = sig[std::size_t(j) * nx + i];
      if (!(v < promote)) continue;
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= nx || b >= ny) continue;
          if (sig[std::size_t(b) * nx + a] < v) {
            minimum = false;
            break;
          }
        }
      if (minimum) out.push_back({point(i, j), v});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.indicator < b.indicator; });
  return out;
}

SiegertPole refine_pole(const StructureSpec& s, double h, double kx, cplx guess,
                        std::shared_ptr<const QuadratureDomain> q, const RefineOptions& opt) {
  SpectralPoint p{guess, kx};
  if (!allowed(p, opt.cut_margin))
    throw Error(ErrorCode::CutCollision, "initial guess lies on a branch cut");
  auto op = assemble(s, h, p, q);
  auto e = closest_to_one(op);

  // Secant iteration on f(kappa) = lambda0(kappa) - 1, following the
  // eigenpair continuously.
  cplx k0 = guess, f0 = e.lambda0 - 1.0;
  cplx k1 = guess + 1e-4 * std::max(1.0, std::abs(guess));
  int iter = 0;
  bool converged = std::abs(f0) <= opt.tol;
  cplx k_cur = k0;
  while (!converged) {
    if (++iter > opt.max_iter)
      throw Error(ErrorCode::NoConvergence, "pole refinement did not converge");
    cplx step = k1 - k0;
    int halvings = 0;
    while (!allowed({k1, kx}, opt.cut_margin)) {
      if (++halvings > 40) throw Error(ErrorCode::CutCollision, "refinement stuck at a branch cut");
      step *= 0.5;
      k1 = k0 + step;
    }
    p.kappa = k1;
    op = assemble(s, h, p, q);
    e = track_eigenpair(op, e.lambda0, e.right, e.left, 3);
    const cplx f1 = e.lambda0 - 1.0;
    k_cur = k1;
    if (std::abs(f1) <= opt.tol) {
      converged = true;
      break;
    }
    const cplx df = f1 - f0;
    cplx next = (std::abs(df) > 0.0) ? k1 - f1 * (k1 - k0) / df : k1 + (k1 - k0);
    k0 = k1;
    f0 = f1;
    k1 = next;
  }
  p.kappa = k_cur;
  if (iter == 0) op = assemble(s, h, p, q);

  // Uniqueness check inside the disk around 1 and spectral gap.
  const auto check = eigen_near_one(op, opt.disk_delta);

  SiegertPole pole;
  pole.kappa = k_cur;
  pole.kx = kx;
  pole.h = h;
  pole.quad = q;
  pole.lambda0 = e.lambda0;
  pole.gap = check.gap;
  pole.iterations = iter;
  pole.left = e.left;

  // Normalize: largest nodal magnitude equals one (real positive).
  CVec v = e.right;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v /= v(imax);
  pole.state = v;
  pole.residual = (op.A * v - v).norm() / v.norm();

  if (opt.derivative) {
    EigenPairNearOne ev = e;
    ev.right = v;
    pole.d_lambda_d_kappa = d_lambda_d_kappa(s, op, ev);
    if (std::abs(pole.d_lambda_d_kappa) < 1e-8)
      throw Error(ErrorCode::MultipleInDisk, "d lambda / d kappa vanishes at the pole");
    const cplx denom = pole.d_lambda_d_kappa * e.left.dot(v);
    pole.left_functional.resize(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      const auto& n = q->nodes[std::size_t(j)];
      pole.left_functional(j) = -e.left(j) / (n.w * std::conj(denom));
    }
  }
  if (pole.kappa.imag() > 1e-10)
    throw Error(ErrorCode::NoConvergence, "refinement converged to a non-physical pole");
  return pole;
}

void rescale(SiegertPole& pole, cplx alpha) {
  pole.state *= alpha;
  if (pole.left_functional.size() > 0) pole.left_functional /= std::conj(alpha);
}

std::map<int, std::pair<cplx, cplx>> far_field_amplitudes(const SiegertPole& pole, int m_lo,
                                                          int m_hi) {
  std::map<int, std::pair<cplx, cplx>> out;
  const auto f = pole.field();
  for (int m = m_lo; m <= m_hi; ++m) out[m] = {far_amplitude(f, m, +1), far_amplitude(f, m, -1)};
  return out;
}

cplx eval_siegert_field(const SiegertPole& pole, double x, double z) {
  const auto f = pole.field();
  const auto& box = pole.quad->box;
  if (z > box.z_hi || z < box.z_lo) return field_value_modal(f, x, z);
  return field_value(f, x, z);
}

FluxBox default_flux_box(const SiegertPole& pole, double margin) {
  return {pole.quad->box.z_lo - margin, pole.quad->box.z_hi + margin};
}

double width_from_flux(const SiegertPole& pole, const FluxBox& box) {
  const auto f = pole.field();
  double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
  for (const auto& n : pole.quad->nodes) {
    zmin = std::min(zmin, n.z);
    zmax = std::max(zmax, n.z);
  }
  if (!(box.z1 < zmin && box.z2 > zmax))
    throw Error(ErrorCode::InvalidArgument, "flux box must enclose the inclusions");
  // Closed channels have small nonzero Re beta_m off the real axis and are
  // kept; their contribution vanishes as the box grows.
  double num = 0.0;
  const int M = modes_for_distance(f.p, std::min(box.z2 - zmax, zmin - box.z1));
  for (int m = -M; m <= M; ++m) {
    const double km = bloch_wavenumber(f.p.kx, m);
    const cplx beta = branch_sqrt(f.p.kappa - km * km);
    num += beta.real() * (std::norm(level_amplitude(f, m, box.z2, true)) +
                          std::norm(level_amplitude(f, m, box.z1, false)));
  }
  const double den = field_norm_sq(f, box.z1, box.z2);
  return num / den;
}

double strip_norm_sq(const SiegertPole& pole) {
  NormOptions o;
  o.closed_tails = true;
  return field_norm_sq(pole.field(), pole.quad->box.z_lo, pole.quad->box.z_hi, o);
}

SiegertPole normalize_bic(const SiegertPole& pole, double gamma_tol) {
  if (pole.gamma() > gamma_tol)
    throw Error(ErrorCode::NotNearBic, "pole width exceeds the bound-state tolerance");
  SiegertPole out = pole;
  rescale(out, 1.0 / std::sqrt(strip_norm_sq(pole)));
  out.tag = NormalizationTag::BicNormalized;
  return out;
}

CMat residue_by_contour(const StructureSpec& s, const SiegertPole& pole, double radius,
                        int n_points) {
  const Eigen::Index n = pole.state.size();
  CMat R = CMat::Zero(n, n);
  for (int k = 0; k < n_points; ++k) {
    const cplx u = std::exp(kI * (kTwoPi * (k + 0.5) / n_points));
    const SpectralPoint p{pole.kappa + radius * u, pole.kx};
    if (!allowed(p, 1e-10))
      throw Error(ErrorCode::CutPoint, "residue contour crosses a branch cut");
    const auto op = assemble(s, pole.h, p, pole.quad);
    const CMat B = CMat::Identity(n, n) - op.A;
    R += (radius * u / double(n_points)) * B.partialPivLu().inverse();
  }
  return R;
}

}  // namespace siegert
