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

#include "siegert/green.hpp"

#include <algorithm>
#include <cmath>

#include "siegert/error.hpp"
#include "siegert/special.hpp"

namespace siegert {
namespace {

constexpr cplx kI(0.0, 1.0);

cplx checked_beta(cplx kappa, double km) {
  const cplx w = kappa - km * km;
  if (w == cplx(0.0, 0.0)) throw Error(ErrorCode::BranchPoint, "kappa on a diffraction threshold");
  return branch_sqrt(w);
}

// exp(i(x k_m + |z| beta_m)) / beta_m
cplx plane_term(cplx kappa, double kx, int m, double x, double az, cplx* beta_out = nullptr) {
  const double km = bloch_wavenumber(kx, m);
  const cplx beta = checked_beta(kappa, km);
  if (beta_out) *beta_out = beta;
  return std::exp(kI * (x * km + az * beta)) / beta;
}

struct PlaneSum {
  cplx value;
  cplx dx;
  cplx dz;
  int terms;
  double est;
};

PlaneSum plane_series(const SpectralPoint& p, double x, double z, double tol, int max_terms,
                      bool gradient) {
  if (z == 0.0)
    throw Error(ErrorCode::SlowConvergence,
                "spectral series at z = 0 is only conditionally convergent");
  const double az = std::abs(z);
  const double sz = z > 0.0 ? 1.0 : -1.0;
  const cplx pref = 0.5 * kI * p.kappa;
  PlaneSum out{0.0, 0.0, 0.0, 0, 0.0};
  auto add = [&](int m) {
    cplx beta;
    const cplx t = plane_term(p.kappa, p.kx, m, x, az, &beta);
    out.value += t;
    if (gradient) {
      out.dx += kI * bloch_wavenumber(p.kx, m) * t;
      out.dz += kI * sz * beta * t;
    }
    return t;
  };
  auto magnitude = [&](int m) {
    cplx beta;
    cplx t = plane_term(p.kappa, p.kx, m, x, az, &beta);
    double s = std::abs(t);
    if (gradient) s *= std::max(std::abs(bloch_wavenumber(p.kx, m)), std::abs(beta));
    return std::pair<double, double>(s, beta.imag());
  };
  add(0);
  int M = 0;
  for (;;) {
    const auto [a1, i1] = magnitude(M + 1);
    const auto [b1, j1] = magnitude(-M - 1);
    const double re = p.kappa.real();
    const bool closed = bloch_wavenumber(p.kx, M + 1) * bloch_wavenumber(p.kx, M + 1) > re &&
                        bloch_wavenumber(p.kx, -M - 1) * bloch_wavenumber(p.kx, -M - 1) > re;
    if (closed) {
      // Consecutive closed terms shrink at least by exp(-|z| * d Im beta),
      // with d Im beta >= 2 pi - |kx| - small once |k_m| dominates.
      const double grow = std::min(i1, j1);
      const double ratio = std::exp(-az * std::max(kTwoPi - 1.0, 0.5 * grow / (M + 1)));
      const double est = std::abs(pref) * (a1 + b1) / (1.0 - ratio);
      if (est <= tol) {
        out.est = est;
        break;
      }
    }
    if (2 * M + 3 > max_terms)
      throw Error(ErrorCode::SlowConvergence, "spectral series exceeded its term budget");
    add(M + 1);
    add(-M - 1);
    ++M;
  }
  out.terms = 2 * M + 1;
  out.value *= pref;
  out.dx *= pref;
  out.dz *= pref;
  return out;
}

}  // namespace

KernelEval green_spectral(const SpectralPoint& p, double x, double z, double tol, int max_terms) {
  const PlaneSum s = plane_series(p, x, z, tol, max_terms, false);
  return {s.value, s.terms, s.est};
}

std::array<cplx, 2> green_gradient(const SpectralPoint& p, double x, double z, double tol) {
  const PlaneSum s = plane_series(p, x, z, tol, 100000, true);
  return {s.dx, s.dz};
}

cplx green_direct(const SpectralPoint& p, double x, double z, int M, bool accelerate) {
  const cplx k = branch_sqrt(p.kappa);
  if (!(k.imag() > 0.0) && !accelerate)
    throw Error(ErrorCode::TailDivergence,
                "image sum diverges without acceleration when Im k = 0");
  const cplx pref = 0.25 * kI * p.kappa;
  auto image = [&](int m) {
    const double rho = std::hypot(x - m, z);
    return std::exp(kI * (m * p.kx)) * hankel_h1_0(k * rho);
  };
  std::vector<cplx> partial;
  partial.reserve(M + 1);
  cplx sum = image(0);
  partial.push_back(sum);
  for (int m = 1; m <= M; ++m) {
    sum += image(m) + image(-m);
    partial.push_back(sum);
  }
  if (!accelerate) return pref * sum;

  // Wynn epsilon table, keeping the latest even column entry.
  std::vector<cplx> e0 = partial;
  std::vector<cplx> em1(e0.size(), 0.0);
  cplx best = e0.back();
  for (int col = 1; e0.size() > 1; ++col) {
    std::vector<cplx> e1(e0.size() - 1);
    for (std::size_t i = 0; i + 1 < e0.size(); ++i) {
      const cplx d = e0[i + 1] - e0[i];
      if (std::abs(d) == 0.0) return pref * e0[i + 1];
      e1[i] = em1[i + 1] + 1.0 / d;
    }
    if (col % 2 == 0) best = e1.back();
    em1 = std::move(e0);
    e0 = std::move(e1);
  }
  return pref * best;
}

Kernel::Kernel(const SpectralPoint& p) : p_(p) {
  const double ak = std::abs(p.kappa);
  eta_ = std::max(std::sqrt(kPi), std::sqrt(ak) / 5.0);
  // Ewald spectral terms: need Re(gamma_n) / (2 eta) - 0.5 eta >= 6.1.
  const double gamma_min = 2.0 * eta_ * (6.1 + 0.5 * eta_);
  const double kmax = std::sqrt(gamma_min * gamma_min + std::max(0.0, p.kappa.real())) +
                      std::abs(p.kappa.imag()) + 1.0;
  n_spec_ = int(std::ceil((kmax + std::abs(p.kx)) / kTwoPi)) + 1;
  // Plane-wave terms for |z| >= 0.5: Im beta_n >= 80.
  const double kmax_pw = std::sqrt(80.0 * 80.0 + std::max(0.0, p.kappa.real())) + 1.0;
  n_plane_ = int(std::ceil((kmax_pw + std::abs(p.kx)) / kTwoPi)) + 1;
  const int n = std::max(n_spec_, n_plane_);
  km_.resize(2 * n + 1);
  beta_.resize(2 * n + 1);
  gamma_.resize(2 * n + 1);
  for (int m = -n; m <= n; ++m) {
    const double km = bloch_wavenumber(p.kx, m);
    km_[m + n] = km;
    beta_[m + n] = checked_beta(p.kappa, km);
    gamma_[m + n] = -kI * beta_[m + n];
  }
  const cplx q = p.kappa / (4.0 * eta_ * eta_);
  cplx c = 1.0;
  for (int j = 0; j < 127; ++j) {
    if (j > 0) c *= q / double(j);
    jcoef_.push_back(c);
    if (j > 2 && std::abs(c) < 1e-18) break;
  }
}

cplx Kernel::value(double x, double z) const {
  cplx v;
  if (std::abs(z) >= 0.5)
    spectral(x, z, &v, nullptr);
  else
    ewald(x, z, false, &v, nullptr);
  return v;
}

cplx Kernel::regular(double x, double z) const {
  cplx v;
  ewald(x, z, true, &v, nullptr);
  return v;
}

std::array<cplx, 2> Kernel::value_pair(double x, double z) const {
  std::array<cplx, 2> v;
  if (std::abs(z) >= 0.5)
    spectral(x, z, &v[0], &v[1]);
  else
    ewald(x, z, false, &v[0], &v[1]);
  return v;
}

void Kernel::spectral(double x, double z, cplx* pos, cplx* neg) const {
  const double az = std::abs(z);
  const int off = (int(km_.size()) - 1) / 2;
  cplx sp = 0.0, sn = 0.0;
  for (int m = -n_plane_; m <= n_plane_; ++m) {
    const int i = m + off;
    const cplx t = std::exp(kI * (az * beta_[i])) / beta_[i];
    const cplx ph = std::polar(1.0, x * km_[i]);
    sp += ph * t;
    if (neg) sn += std::conj(ph) * t;
  }
  const cplx pref = 0.5 * kI * p_.kappa;
  *pos = pref * sp;
  if (neg) *neg = pref * sn;
}

void Kernel::ewald(double x, double z, bool subtract_log, cplx* pos, cplx* neg) const {
  const double az = std::abs(z);
  const double eta = eta_;
  const int off = (int(km_.size()) - 1) / 2;

  cplx spec_p = 0.0, spec_n = 0.0;
  const double b = az * eta;
  for (int m = -n_spec_; m <= n_spec_; ++m) {
    const int i = m + off;
    const cplx g = gamma_[i];
    const cplx a = g / (2.0 * eta);
    const cplx t = (exp_erfc(g * az, a + b) + exp_erfc(-g * az, a - b)) / g;
    const cplx ph = std::polar(1.0, x * km_[i]);
    spec_p += ph * t;
    if (neg) spec_n += std::conj(ph) * t;
  }

  cplx spat_p = 0.0, spat_n = 0.0;
  const int J = int(jcoef_.size());
  double en_buf[128];
  std::span<double> en(en_buf, J);
  const double cut = 45.0;
  const int mlo = int(std::floor(x - std::sqrt(cut) / eta)) - 1;
  const int mhi = int(std::ceil(x + std::sqrt(cut) / eta)) + 1;
  for (int m = mlo; m <= mhi; ++m) {
    const double dx = x - m;
    const double X = (dx * dx + z * z) * eta * eta;
    if (X > cut) continue;
    if (m == 0 && subtract_log) {
      // E_1 replaced by E_1 + ln X - 2 ln eta: removes -(1/2pi) ln rho.
      expint_sequence(X, en);
      en[0] = expint_e1_plus_log(X) - 2.0 * std::log(eta);
    } else {
      if (X == 0.0) throw Error(ErrorCode::DomainError, "kernel evaluated at a lattice point");
      expint_sequence(X, en);
    }
    cplx s = 0.0;
    for (int j = J - 1; j >= 0; --j) s += jcoef_[j] * en[j];
    const cplx ph = std::polar(1.0, m * p_.kx);
    spat_p += ph * s;
    if (neg) spat_n += std::conj(ph) * s;
  }
  const double cs = 0.25, cr = 1.0 / (2.0 * kTwoPi);
  *pos = p_.kappa * (cs * spec_p + cr * spat_p);
  if (neg) *neg = p_.kappa * (cs * spec_n + cr * spat_n);
}

}  // namespace siegert
