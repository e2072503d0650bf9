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

#include "siegert/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siegert/error.hpp"

namespace siegert {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

cplx quadratic_interp(const std::vector<BranchSample>& smp, std::size_t i, double h) {
  // Lagrange interpolation through samples i-1, i, i+1 (clamped).
  const std::size_t a = i == 0 ? 0 : i - 1;
  const std::size_t c = std::min(a + 2, smp.size() - 1);
  if (c - a < 2) return smp[i].pole.kappa;
  const double x0 = smp[a].h, x1 = smp[a + 1].h, x2 = smp[c].h;
  const cplx y0 = smp[a].pole.kappa, y1 = smp[a + 1].pole.kappa, y2 = smp[c].pole.kappa;
  return y0 * ((h - x1) * (h - x2) / ((x0 - x1) * (x0 - x2))) +
         y1 * ((h - x0) * (h - x2) / ((x1 - x0) * (x1 - x2))) +
         y2 * ((h - x0) * (h - x1) / ((x2 - x0) * (x2 - x1)));
}

bool is_open(const SpectralPoint& p, int m) {
  const double km = bloch_wavenumber(p.kx, m);
  return p.kappa.real() >= km * km;
}

}  // namespace

std::shared_ptr<const QuadratureDomain> quadrature_at(const StructureSpec& s, double h, int order) {
  return std::make_shared<const QuadratureDomain>(build_quadrature(s, h, order));
}

ContinuationBranch continue_pole(const StructureSpec& s, const SiegertPole& start, double h_target,
                                 const ContinuationOptions& opt) {
  if (!s.in_range(h_target)) throw Error(ErrorCode::OutOfRange, "h_target outside the coupling range");
  if (!(opt.step0 > 0.0) || !(opt.min_step > 0.0))
    throw Error(ErrorCode::InvalidArgument, "continuation steps must be positive");
  ContinuationBranch branch;
  branch.samples.push_back({start.h, start});
  branch.smallest_step = opt.step0;
  const int order = start.quad->order;
  const double dir = h_target >= start.h ? 1.0 : -1.0;
  double step = opt.step0;
  double h = start.h;
  while (dir * (h_target - h) > 1e-14) {
    const double hs = std::min(step, std::abs(h_target - h));
    const double h_new = std::abs(h_target - h) - hs < 1e-14 ? h_target : h + dir * hs;
    const auto& smp = branch.samples;
    const cplx last = smp.back().pole.kappa;
    cplx pred = last;
    if (smp.size() >= 2) {
      const auto& prev = smp[smp.size() - 2];
      pred = last + (last - prev.pole.kappa) * ((h_new - smp.back().h) / (smp.back().h - prev.h));
    }
    const double allowed =
        opt.predictor_tol * std::max(std::abs(pred - last), 1e-3 * std::abs(last));
    bool ok = false;
    ErrorCode failure = ErrorCode::NoConvergence;
    try {
      SiegertPole pole = refine_pole(s, h_new, start.kx, pred, quadrature_at(s, h_new, order),
                                     opt.refine);
      if (std::abs(pole.kappa - pred) <= allowed) {
        branch.samples.push_back({h_new, std::move(pole)});
        h = h_new;
        ok = true;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CutCollision)
        failure = ErrorCode::CutCollision;
      else if (e.code() != ErrorCode::NoConvergence && e.code() != ErrorCode::MultipleInDisk &&
               e.code() != ErrorCode::NoneInDisk)
        throw;
    }
    if (ok) {
      step = std::min(opt.step0, step * 1.5);
      continue;
    }
    step *= 0.5;
    ++branch.halvings;
    branch.smallest_step = std::min(branch.smallest_step, step);
    if (step < opt.min_step) {
      if (failure == ErrorCode::CutCollision)
        throw Error(ErrorCode::LeftCutPlane, "branch reached a branch cut at h = " + std::to_string(h));
      throw Error(ErrorCode::BranchLost, "corrector failed at minimal step near h = " + std::to_string(h));
    }
  }
  return branch;
}

std::optional<BicRecord> detect_bic(const StructureSpec& s, const ContinuationBranch& branch,
                                    double tol, const RefineOptions& ropt) {
  const auto& smp = branch.samples;
  if (smp.size() < 3) throw Error(ErrorCode::NoMinimum, "branch too short to bracket a minimum");
  std::size_t imin = 0;
  for (std::size_t i = 1; i < smp.size(); ++i)
    if (smp[i].pole.gamma() < smp[imin].pole.gamma()) imin = i;

  SiegertPole best = smp[imin].pole;
  if (imin == 0 || imin + 1 == smp.size()) {
    if (best.gamma() > tol)
      throw Error(ErrorCode::NoMinimum, "smallest width sits at a branch end");
  } else {
    // Golden-section search on Gamma(h) inside the sampled bracket.
    const int order = best.quad->order;
    const double kx = best.kx;
    auto probe = [&](double h) {
      return refine_pole(s, h, kx, quadratic_interp(smp, imin, h), quadrature_at(s, h, order), ropt);
    };
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = smp[imin - 1].h, b = smp[imin + 1].h;
    double c = b - g * (b - a), d = a + g * (b - a);
    SiegertPole pc = probe(c), pd = probe(d);
    const double width = std::abs(b - a);
    for (int it = 0; it < 80 && std::abs(b - a) > 1e-12 * std::max(1.0, width); ++it) {
      if (pc.gamma() < pd.gamma()) {
        b = d;
        d = c;
        pd = std::move(pc);
        c = b - g * (b - a);
        pc = probe(c);
      } else {
        a = c;
        c = d;
        pc = std::move(pd);
        d = a + g * (b - a);
        pd = probe(d);
      }
      if (std::min(pc.gamma(), pd.gamma()) < 1e-3 * tol) break;
    }
    const SiegertPole& cand = pc.gamma() < pd.gamma() ? pc : pd;
    if (cand.gamma() < best.gamma()) best = cand;
  }
  if (best.gamma() > tol) return std::nullopt;
  const SpectralPoint p{best.kappa, best.kx};
  const int count = 2 * (int(std::ceil((std::sqrt(std::max(0.0, p.kappa.real())) +
                                        std::abs(p.kx)) / kTwoPi)) + 2) + 1;
  const int l = threshold_ladder(best.kx, count).interval_of(best.kappa.real());
  if (l < 1) return std::nullopt;
  BicRecord rec;
  rec.h_b = best.h;
  rec.kappa_b = best.kappa.real();
  rec.gamma_b = best.gamma();
  rec.interval_index = l;
  rec.state = normalize_bic(best, tol);
  return rec;
}

SiegertPole normalize_near_bic(const SiegertPole& pole, const SiegertPole& reference) {
  if (pole.state.size() != reference.state.size())
    throw Error(ErrorCode::DimensionMismatch, "reference state has a different node count");
  SiegertPole out = pole;
  const double n = strip_norm_sq(pole);
  cplx overlap = 0.0;
  for (Eigen::Index j = 0; j < pole.state.size(); ++j)
    overlap += pole.quad->nodes[std::size_t(j)].w * std::conj(reference.state(j)) * pole.state(j);
  const cplx phase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : cplx(1.0);
  rescale(out, phase / std::sqrt(n));
  out.tag = NormalizationTag::BicNormalized;
  return out;
}

std::map<int, std::pair<cplx, cplx>> limit_amplitudes(const ContinuationBranch& branch,
                                                      BicRecord& bic, int m_max, double gamma_lo,
                                                      double gamma_hi) {
  std::vector<const BranchSample*> below, above;
  for (const auto& smp : branch.samples) {
    const double g = smp.pole.gamma();
    if (g < gamma_lo || g > gamma_hi) continue;
    (smp.h < bic.h_b ? below : above).push_back(&smp);
  }
  const auto& side = below.size() >= above.size() ? below : above;
  if (side.size() < 5)
    throw Error(ErrorCode::InsufficientSamples,
                "need at least 5 samples with Gamma in range on one side of h_b");
  const SpectralPoint pb{cplx(bic.kappa_b, 0.0), bic.state.kx};
  const Eigen::Index n = Eigen::Index(side.size());
  CMat V(n, 3);
  const int nm = 2 * m_max + 1;
  CMat Y(n, 2 * nm);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& smp = *side[std::size_t(i)];
    const double t = smp.h - bic.h_b;
    V(i, 0) = 1.0;
    V(i, 1) = t;
    V(i, 2) = t * t;
    const SiegertPole p = normalize_near_bic(smp.pole, bic.state);
    const auto f = p.field();
    const double sg = std::sqrt(p.gamma());
    for (int m = -m_max; m <= m_max; ++m) {
      const double scale = is_open(pb, m) ? 1.0 / sg : 1.0;
      Y(i, 2 * (m + m_max)) = far_amplitude(f, m, +1) * scale;
      Y(i, 2 * (m + m_max) + 1) = far_amplitude(f, m, -1) * scale;
    }
  }
  const CMat C = V.colPivHouseholderQr().solve(Y);
  std::map<int, std::pair<cplx, cplx>> out;
  for (int m = -m_max; m <= m_max; ++m)
    out[m] = {C(0, 2 * (m + m_max)), C(0, 2 * (m + m_max) + 1)};
  bic.limit_amplitudes = out;
  return out;
}

std::vector<ScalingRow> amplitude_scaling(const ContinuationBranch& branch, const BicRecord& bic) {
  std::vector<ScalingRow> rows(branch.samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(rows.size()); ++i) {
    const auto& smp = branch.samples[std::size_t(i)];
    const SiegertPole p = normalize_near_bic(smp.pole, bic.state);
    ScalingRow& r = rows[std::size_t(i)];
    r.h = smp.h;
    r.gamma = p.gamma();
    r.a_n = residue_amplitude(p).a_n;
    r.a_tilde = r.gamma > 0.0 ? r.a_n / std::sqrt(r.gamma) : cplx(kNaN, kNaN);
  }
  return rows;
}

std::vector<AmplificationRow> amplification_curve(const StructureSpec& s,
                                                  const ContinuationBranch& branch, double detune,
                                                  double far_offset) {
  std::vector<AmplificationRow> rows(branch.samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(rows.size()); ++i) {
    const auto& smp = branch.samples[std::size_t(i)];
    const auto& pole = smp.pole;
    AmplificationRow& r = rows[std::size_t(i)];
    r.h = smp.h;
    r.gamma = pole.gamma();
    const double kr = std::sqrt(pole.kappa).real();
    r.k_drive = std::sqrt(kr * kr + detune * r.gamma);
    const auto sol = solve_plane_wave(s, smp.h, r.k_drive, pole.kx, pole.quad);
    r.near_norm = weighted_norm(*pole.quad, sol.total);
    // Far line: Parseval over the mode amplitudes above the structure.
    const double z = pole.quad->box.z_hi + far_offset;
    NodalField f = sol.field();
    const int M = modes_for_distance(f.p, far_offset);
    const double kz = std::sqrt(r.k_drive * r.k_drive - pole.kx * pole.kx);
    double acc = 0.0;
    for (int m = -M; m <= M; ++m) {
      cplx a = level_amplitude(f, m, z, true);
      if (m == 0) a += std::polar(1.0, kz * z);
      acc += std::norm(a);
    }
    r.far_norm = std::sqrt(acc);
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kNaN;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace siegert
