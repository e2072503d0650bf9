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

#include "siegert/special.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "siegert/channels.hpp"
#include "siegert/error.hpp"

namespace siegert {
namespace {

cplx hankel_series(cplx z) {
  const cplx q = 0.25 * z * z;
  cplx term = 1.0;  // (-q)^k / (k!)^2
  cplx j0 = 1.0;
  cplx ysum = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (double(k) * k);
    harmonic += 1.0 / k;
    j0 += term;
    ysum -= harmonic * term;  // (-1)^{k+1} H_k q^k / (k!)^2
    if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(j0)) break;
  }
  const cplx y0 = (2.0 / kPi) * ((std::log(0.5 * z) + kEulerGamma) * j0 + ysum);
  return j0 + cplx(0.0, 1.0) * y0;
}

cplx hankel_integral(cplx z) {
  // 8 panels x 16 Gauss nodes on s in [0, 6.5]; e^{-42} beyond.
  const auto& g = gauss_legendre(16);
  constexpr int kPanels = 8;
  constexpr double kUpper = 6.5;
  const double h = kUpper / kPanels;
  const cplx inv2z = cplx(0.0, 0.5) / z;
  cplx sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = mid + 0.5 * h * g.nodes[i];
      const double s2 = s * s;
      sum += g.weights[i] * std::exp(-s2) / std::sqrt(1.0 + s2 * inv2z);
    }
  }
  sum *= 0.5 * h * 2.0 / std::sqrt(kPi);
  return std::sqrt(2.0 / (kPi * z)) * std::exp(cplx(0.0, 1.0) * (z - 0.25 * kPi)) * sum;
}

// Coefficients of the rational approximation for w(z) in the upper half-plane.
struct FaddeevaTable {
  static constexpr int N = 48;
  double L;
  std::array<double, N> a{};
  FaddeevaTable() {
    const int M = 2 * N;
    L = std::sqrt(N / std::sqrt(2.0));
    std::vector<double> f(2 * M, 0.0);  // f[k + M], k = -M..M-1; f(-M) = 0
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(0.5 * k * kPi / M);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= N; ++n) {
      double s = 0.0;
      for (int k = -M + 1; k <= M - 1; ++k) s += f[k + M] * std::cos(kPi * k * n / M);
      a[n - 1] = s / (2.0 * M);
    }
  }
};

const FaddeevaTable& faddeeva_table() {
  static const FaddeevaTable table;
  return table;
}

cplx faddeeva_upper(cplx z) {
  const auto& t = faddeeva_table();
  const cplx iz(-z.imag(), z.real());
  const cplx denom = t.L - iz;
  const cplx Z = (t.L + iz) / denom;
  cplx p = 0.0;
  for (int n = FaddeevaTable::N - 1; n >= 0; --n) p = p * Z + t.a[n];
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

}  // namespace

cplx hankel_h1_0(cplx z) {
  if (z == cplx(0.0, 0.0)) throw Error(ErrorCode::DomainError, "hankel_h1_0: z = 0");
  if (z.imag() == 0.0 && z.real() > 0.0)
    return {std::cyl_bessel_j(0.0, z.real()), std::cyl_neumann(0.0, z.real())};
  if (z.real() < 0.0) throw Error(ErrorCode::DomainError, "hankel_h1_0: Re z < 0");
  if (std::abs(z) <= 2.0) return hankel_series(z);
  return hankel_integral(z);
}

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

cplx exp_erfc(cplx c, cplx u) {
  // erfc(u) = exp(-u^2) w(i u) for Re u >= 0, and 2 - erfc(-u) otherwise.
  if (u.real() >= 0.0) return std::exp(c - u * u) * faddeeva_upper(cplx(-u.imag(), u.real()));
  return 2.0 * std::exp(c) - std::exp(c - u * u) * faddeeva_upper(cplx(u.imag(), -u.real()));
}

double expint_e1_plus_log(double x) {
  if (x > 1.0) {
    std::array<double, 1> e1{};
    expint_sequence(x, e1);
    return e1[0] + std::log(x);
  }
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 100; ++k) {
    term *= -x / k;
    sum += term / k;
    if (std::abs(term) < 1e-18) break;
  }
  return -kEulerGamma - sum;
}

void expint_sequence(double x, std::span<double> out) {
  if (out.empty()) return;
  if (x < 0.0) throw Error(ErrorCode::DomainError, "expint_sequence: x < 0");
  if (x == 0.0) {
    out[0] = HUGE_VAL;
    for (std::size_t n = 1; n < out.size(); ++n) out[n] = 1.0 / double(n);
    return;
  }
  double e1;
  if (x <= 1.0) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      sum += term / k;
      if (std::abs(term) < 1e-18) break;
    }
    e1 = -kEulerGamma - std::log(x) - sum;
  } else {
    // Modified Lentz on the continued fraction for E_1.
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
      const double an = -double(i) * i;
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const double del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < 1e-16) break;
    }
    e1 = h * std::exp(-x);
  }
  out[0] = e1;
  const double ex = std::exp(-x);
  for (std::size_t n = 1; n < out.size(); ++n) out[n] = (ex - x * out[n - 1]) / double(n);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre: n < 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace siegert
