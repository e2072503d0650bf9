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

#include "siegert/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "siegert/error.hpp"

namespace siegert {
namespace {

constexpr cplx kI(0.0, 1.0);

// Gauss-Kronrod 7/15 on [-1, 1]; odd-indexed Kronrod nodes are the Gauss nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
  double abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F f, double a, double b) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx k = fc * kWgk[7], g = fc * kWg[3];
  double ab = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const cplx f1 = f(c - hl * kXgk[j]), f2 = f(c + hl * kXgk[j]);
    k += kWgk[j] * (f1 + f2);
    ab += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, k * hl, std::abs((k - g) * hl), ab * std::abs(hl)};
}

constexpr int kPanelBudget = 400000;

}  // namespace

cplx WavePacket::amplitude(cplx k) const {
  const cplx d = k - k_c;
  return std::exp(-d * d / (2.0 * sigma * sigma)) / (sigma * std::sqrt(kTwoPi));
}

void validate(const WavePacket& w) {
  if (!(w.k_c > 0.0) || !(w.sigma > 0.0) || !(w.c > 0.0))
    throw Error(ErrorCode::InvalidArgument, "wave packet needs k_c, sigma, c > 0");
}

DecayConstants decay_constants(cplx kappa_n, double c) {
  const double k2 = kappa_n.real(), gamma = -kappa_n.imag();
  if (!(k2 > 0.0)) throw Error(ErrorCode::NegativeRealPart, "k_n^2 <= 0: no decaying emission");
  DecayConstants d;
  d.k_tilde = std::sqrt(0.5 * (k2 + std::hypot(k2, gamma)));
  d.tau = gamma > 0.0 ? 2.0 * d.k_tilde / (c * gamma) : std::numeric_limits<double>::infinity();
  return d;
}

std::vector<cplx> omega_direct(cplx kappa_n, cplx a_tilde, const WavePacket& w,
                               const std::vector<double>& times, double rel_tol) {
  validate(w);
  const double gamma = -kappa_n.imag();
  std::vector<cplx> out(times.size(), cplx(0.0));
  if (!(gamma > 0.0)) return out;  // bound states are not excited
  const cplx pref = a_tilde * std::sqrt(gamma);
  const double lo = std::max(0.0, w.k_c - 8.0 * w.sigma), hi = w.k_c + 8.0 * w.sigma;
  bool budget_hit = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t it = 0; it < std::ptrdiff_t(times.size()); ++it) {
    const double t = times[std::size_t(it)];
    auto f = [&](double k) {
      return w.amplitude(k).real() * std::exp(-kI * (w.c * k * t)) / (k * k - kappa_n);
    };
    int n0 = 8;
    if (t > 0.0) n0 = std::max(n0, int(std::ceil((hi - lo) / (kPi / (4.0 * w.c * t)))));
    std::priority_queue<Panel> heap;
    cplx total = 0.0;
    double err = 0.0, l1 = 0.0;
    for (int i = 0; i < n0; ++i) {
      Panel p = gk15(f, lo + (hi - lo) * i / n0, lo + (hi - lo) * (i + 1) / n0);
      total += p.value;
      err += p.error;
      l1 += p.abs_value;
      heap.push(p);
    }
    int panels = n0;
    while (err > std::max(rel_tol * std::abs(total), 1e-15 * l1)) {
      if (panels >= kPanelBudget) {
#pragma omp atomic write
        budget_hit = true;
        break;
      }
      const Panel p = heap.top();
      heap.pop();
      const double m = 0.5 * (p.a + p.b);
      const Panel l = gk15(f, p.a, m), r = gk15(f, m, p.b);
      total += l.value + r.value - p.value;
      err += l.error + r.error - p.error;
      l1 += l.abs_value + r.abs_value - p.abs_value;
      heap.push(l);
      heap.push(r);
      ++panels;
    }
    out[std::size_t(it)] = pref * total;
  }
  if (budget_hit) throw Error(ErrorCode::QuadratureBudget, "wave-packet quadrature budget exhausted");
  return out;
}

std::vector<cplx> omega_residue(cplx kappa_n, cplx a_tilde, const WavePacket& w,
                                const std::vector<double>& times) {
  validate(w);
  if (!(kappa_n.real() > 0.0))
    throw Error(ErrorCode::PoleNotEnclosed, "k_n^2 <= 0: the pole is not enclosed by the contour");
  const double gamma = -kappa_n.imag();
  std::vector<cplx> out(times.size(), cplx(0.0));
  if (!(gamma > 0.0)) return out;
  const cplx sk = std::sqrt(kappa_n);
  // Closing the contour in the lower half k-plane encloses sqrt(kappa_n) clockwise.
  const cplx pref = a_tilde * (-kPi * kI) * std::sqrt(gamma) / sk * w.amplitude(sk);
  for (std::size_t i = 0; i < times.size(); ++i)
    out[i] = pref * std::exp(-kI * (w.c * times[i]) * sk);
  return out;
}

ObservationWindow observation_window(cplx kappa_n, const WavePacket& w) {
  validate(w);
  ObservationWindow o;
  o.t_max = w.k_c / (w.c * w.sigma * w.sigma);
  const auto d = decay_constants(kappa_n, w.c);
  o.sigma_ok = std::log(2.0) * d.tau <= o.t_max;
  return o;
}

double extract_half_life(const std::vector<double>& times, const std::vector<double>& envelope,
                         double t_lo, double t_hi) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (std::size_t i = 0; i < times.size() && i < envelope.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || !(envelope[i] > 0.0)) continue;
    const double y = std::log(envelope[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorCode::InsufficientSamples, "need two envelope samples in the window");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  if (!(slope < 0.0)) return std::numeric_limits<double>::infinity();
  return -std::log(2.0) / slope;
}

}  // namespace siegert
