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

#include "siegert/modal.hpp"

#include <algorithm>
#include <cmath>

#include "siegert/error.hpp"
#include "siegert/special.hpp"

namespace siegert {
namespace {

constexpr cplx kI(0.0, 1.0);

cplx incident_kz(const SpectralPoint& p) { return branch_sqrt(p.kappa - p.kx * p.kx); }

// Amplitude at level z_ref of the mode m radiated by the nodes selected by
// `use`; up = true for waves going to +z (sources below z_ref).
template <class Pred>
cplx mode_amplitude(const NodalField& f, int m, double z_ref, bool up, Pred use) {
  const double km = bloch_wavenumber(f.p.kx, m);
  const cplx beta = branch_sqrt(f.p.kappa - km * km);
  cplx s = 0.0;
  const auto& nodes = f.q->nodes;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (!use(nodes[j])) continue;
    const double dz = up ? z_ref - nodes[j].z : nodes[j].z - z_ref;
    s += nodes[j].w * nodes[j].contrast * f.E(Eigen::Index(j)) *
         std::exp(kI * (beta * dz - nodes[j].x * km));
  }
  return kI * f.p.kappa / (2.0 * beta) * s;
}

// int_0^L exp(-2 b t) dt
double decay_integral(double b, double L) {
  if (std::abs(b * L) < 1e-12) return L;
  return -std::expm1(-2.0 * b * L) / (2.0 * b);
}

}  // namespace

int modes_for_distance(const SpectralPoint& p, double d) {
  const double bneed = 21.0 / std::max(d, 1e-6) + 1.0;
  const double kmax = std::sqrt(bneed * bneed + std::max(0.0, p.kappa.real()));
  return std::min(4000, int(std::ceil((kmax + std::abs(p.kx)) / kTwoPi)) + 1);
}

cplx level_amplitude(const NodalField& f, int m, double z_ref, bool up) {
  return mode_amplitude(f, m, z_ref, up, [](const QuadNode&) { return true; });
}

cplx far_amplitude(const NodalField& f, int m, int sign) {
  // Referenced to z = 0: amplitude of exp(i(x k_m +/- z beta_m)).
  const double km = bloch_wavenumber(f.p.kx, m);
  const cplx beta = branch_sqrt(f.p.kappa - km * km);
  cplx s = 0.0;
  const auto& nodes = f.q->nodes;
  for (std::size_t j = 0; j < nodes.size(); ++j)
    s += nodes[j].w * nodes[j].contrast * f.E(Eigen::Index(j)) *
         std::exp(-kI * (nodes[j].x * km + double(sign) * nodes[j].z * beta));
  return kI * f.p.kappa / (2.0 * beta) * s;
}

cplx field_value(const NodalField& f, double x, double z) {
  FieldInterpolant interp(f.p, f.q, f.E);
  cplx inc = 0.0;
  if (f.incident) inc = std::exp(kI * (f.p.kx * x + incident_kz(f.p) * z));
  return interp(x, z, inc);
}

cplx field_value_modal(const NodalField& f, double x, double z, int max_order) {
  const auto& nodes = f.q->nodes;
  double top = -HUGE_VAL, bot = HUGE_VAL;
  for (const auto& n : nodes) {
    top = std::max(top, n.z);
    bot = std::min(bot, n.z);
  }
  const bool up = z > top;
  if (!up && !(z < bot))
    throw Error(ErrorCode::InvalidArgument, "modal expansion needs z outside the node range");
  const double d = up ? z - top : bot - z;
  const int M = std::min(max_order, modes_for_distance(f.p, d));
  cplx sum = 0.0;
  for (int m = -M; m <= M; ++m) {
    const cplx a = mode_amplitude(f, m, z, up, [](const QuadNode&) { return true; });
    sum += a * std::polar(1.0, x * bloch_wavenumber(f.p.kx, m));
  }
  if (f.incident) sum += std::exp(kI * (f.p.kx * x + incident_kz(f.p) * z));
  return sum;
}

namespace {

// Splits [z1, z2] into node-free gaps and padded inclusion bands and calls
// gap(za, zb) / band(za, zb) in order.
template <class Gap, class Band>
void split_strip(const QuadratureDomain& q, double z1, double z2, Gap gap, Band band) {
  std::vector<std::pair<double, double>> bands;
  for (const auto& part : q.parts) {
    const double pad = 0.05 * (part.zmax() - part.zmin());
    bands.push_back({std::max(z1, part.zmin() - pad), std::min(z2, part.zmax() + pad)});
  }
  std::sort(bands.begin(), bands.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& b : bands) {
    if (!merged.empty() && b.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, b.second);
    else
      merged.push_back(b);
  }
  for (const auto& n : q.nodes)
    if (!(n.z > z1 && n.z < z2))
      throw Error(ErrorCode::InvalidArgument, "strip interval must contain every node");
  double cursor = z1;
  for (const auto& b : merged) {
    if (b.first > cursor) gap(cursor, b.first);
    band(b.first, b.second);
    cursor = b.second;
  }
  if (z2 > cursor) gap(cursor, z2);
}

// Truncation order for a node-free gap [za, zb].
int gap_modes(const NodalField& f, double za, double zb) {
  double dlo = HUGE_VAL, dhi = HUGE_VAL;
  for (const auto& n : f.q->nodes) {
    if (n.z < za) dlo = std::min(dlo, za - n.z);
    if (n.z > zb) dhi = std::min(dhi, n.z - zb);
  }
  return modes_for_distance(f.p, std::min(dlo, dhi));
}

// Gauss-trapezoid integral over one period in x and [za, zb] in z of
// density(x, z).
template <class Density>
cplx band_integral(const QuadratureDomain& q, double za, double zb, const NormOptions& opt,
                   Density density) {
  double xc = 0.0;
  for (const auto& n : q.nodes) xc += n.x;
  if (!q.nodes.empty()) xc /= double(q.nodes.size());
  const GaussRule& g = gauss_legendre(opt.z_points);
  const int panels = std::max(1, int(std::ceil((zb - za) / opt.z_panel)));
  const double hz = (zb - za) / panels;
  cplx s = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    for (int iz = 0; iz < opt.z_points; ++iz) {
      const double z = za + hz * (pnl + 0.5 * (g.nodes[iz] + 1.0));
      cplx row = 0.0;
      for (int ix = 0; ix < opt.x_points; ++ix)
        row += density(xc - 0.5 + (ix + 0.5) / opt.x_points, z);
      s += 0.5 * hz * g.weights[iz] * row / double(opt.x_points);
    }
  }
  return s;
}

}  // namespace

double field_norm_sq(const NodalField& f, double z1, double z2, const NormOptions& opt) {
  const auto& nodes = f.q->nodes;
  const cplx kz = incident_kz(f.p);
  double total = 0.0;

  // Closed-form strip integral over a gap [za, zb] free of nodes.
  auto gap = [&](double za, double zb) {
    const int M = gap_modes(f, za, zb);
    const double L = zb - za;
    for (int m = -M; m <= M; ++m) {
      const double km = bloch_wavenumber(f.p.kx, m);
      const cplx beta = branch_sqrt(f.p.kappa - km * km);
      cplx U = mode_amplitude(f, m, za, true, [&](const QuadNode& n) { return n.z < za; });
      const cplx D = mode_amplitude(f, m, zb, false, [&](const QuadNode& n) { return n.z > zb; });
      if (m == 0 && f.incident) U += std::exp(kI * kz * za);
      const double b = beta.imag(), rb = beta.real();
      double s = std::norm(U) * decay_integral(b, L) + std::norm(D) * decay_integral(b, L);
      // cross term: 2 Re(U conj(D) int_0^L exp(i beta t - i conj(beta)(L - t)) dt)
      const cplx lead = std::exp(-kI * std::conj(beta) * L);
      const cplx integral =
          std::abs(rb * L) < 1e-12 ? cplx(L) : (std::exp(2.0 * kI * rb * L) - 1.0) / (2.0 * kI * rb);
      s += 2.0 * (U * std::conj(D) * lead * integral).real();
      total += s;
    }
  };

  FieldInterpolant interp(f.p, f.q, f.E);
  auto band = [&](double za, double zb) {
    total += band_integral(*f.q, za, zb, opt, [&](double x, double z) {
               cplx inc = 0.0;
               if (f.incident) inc = std::exp(kI * (f.p.kx * x + kz * z));
               return cplx(std::norm(interp(x, z, inc)));
             }).real();
  };
  split_strip(*f.q, z1, z2, gap, band);

  if (opt.eps_weighted)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      total += nodes[j].w * nodes[j].contrast * std::norm(f.E(Eigen::Index(j)));

  if (opt.closed_tails) {
    double top = -HUGE_VAL, bot = HUGE_VAL;
    for (const auto& n : nodes) {
      top = std::max(top, n.z);
      bot = std::min(bot, n.z);
    }
    const int M = modes_for_distance(f.p, std::min(z2 - top, bot - z1));
    for (int m = -M; m <= M; ++m) {
      const double km = bloch_wavenumber(f.p.kx, m);
      if (f.p.kappa.real() >= km * km) continue;  // open channel
      const double b = branch_sqrt(f.p.kappa - km * km).imag();
      const cplx U = mode_amplitude(f, m, z2, true, [](const QuadNode&) { return true; });
      const cplx D = mode_amplitude(f, m, z1, false, [](const QuadNode&) { return true; });
      total += (std::norm(U) + std::norm(D)) / (2.0 * b);
    }
  }
  return total;
}

cplx field_bilinear(const NodalField& f, const NodalField& g, double z1, double z2,
                    const NormOptions& opt) {
  if (f.q != g.q || std::abs(f.p.kappa - g.p.kappa) > 1e-12 * std::abs(f.p.kappa) ||
      std::abs(f.p.kx + g.p.kx) > 1e-12)
    throw Error(ErrorCode::InvalidArgument,
                "bilinear pairing needs the same quadrature and kappa and opposite kx");
  if (f.incident || g.incident)
    throw Error(ErrorCode::InvalidArgument, "bilinear pairing is defined for source fields only");
  cplx total = 0.0;
  auto gap = [&](double za, double zb) {
    const int M = gap_modes(f, za, zb);
    const double L = zb - za;
    for (int m = -M; m <= M; ++m) {
      const double km = bloch_wavenumber(f.p.kx, m);
      const cplx beta = branch_sqrt(f.p.kappa - km * km);
      auto below = [&](const QuadNode& n) { return n.z < za; };
      auto above = [&](const QuadNode& n) { return n.z > zb; };
      const cplx U = mode_amplitude(f, m, za, true, below);
      const cplx D = mode_amplitude(f, m, zb, false, above);
      const cplx Ug = mode_amplitude(g, -m, za, true, below);
      const cplx Dg = mode_amplitude(g, -m, zb, false, above);
      const cplx e2 = std::abs(beta * L) < 1e-12 ? cplx(L)
                                                 : (std::exp(2.0 * kI * beta * L) - 1.0) /
                                                       (2.0 * kI * beta);
      total += (U * Ug + D * Dg) * e2 + (U * Dg + D * Ug) * L * std::exp(kI * beta * L);
    }
  };
  FieldInterpolant fi(f.p, f.q, f.E), gi(g.p, g.q, g.E);
  auto band = [&](double za, double zb) {
    total += band_integral(*f.q, za, zb, opt,
                           [&](double x, double z) { return fi(x, z) * gi(x, z); });
  };
  split_strip(*f.q, z1, z2, gap, band);
  if (opt.eps_weighted) {
    const auto& nodes = f.q->nodes;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      total += nodes[j].w * nodes[j].contrast * f.E(Eigen::Index(j)) * g.E(Eigen::Index(j));
  }
  return total;
}

}  // namespace siegert
