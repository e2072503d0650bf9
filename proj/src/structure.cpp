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

#include "siegert/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "siegert/channels.hpp"
#include "siegert/error.hpp"
#include "siegert/special.hpp"

namespace siegert {

bool Inclusion::contains(double x, double z) const {
  if (shape == Shape::Disk) {
    const double dx = x - cx, dz = z - cz;
    return dx * dx + dz * dz < radius * radius;
  }
  return std::abs(x - cx) < 0.5 * width && std::abs(z - cz) < 0.5 * height;
}

double Inclusion::zmin() const { return cz - (shape == Shape::Disk ? radius : 0.5 * height); }
double Inclusion::zmax() const { return cz + (shape == Shape::Disk ? radius : 0.5 * height); }
double Inclusion::area() const {
  return shape == Shape::Disk ? kPi * radius * radius : width * height;
}

bool StructureSpec::empty() const {
  return coupling == Coupling::None ? inclusions.empty() : (upper.empty() && lower.empty());
}

bool StructureSpec::in_range(double h) const {
  return coupling == Coupling::None || (h > h_min && h < h_max);
}

std::vector<Inclusion> StructureSpec::placed(double h) const {
  if (coupling == Coupling::None) return inclusions;
  std::vector<Inclusion> out;
  for (Inclusion inc : upper) {
    inc.cz += h;
    out.push_back(inc);
  }
  for (Inclusion inc : lower) {
    inc.cz -= h;
    out.push_back(inc);
  }
  return out;
}

void validate(const StructureSpec& s) {
  auto check = [](const Inclusion& inc) {
    if (!(inc.eps >= 1.0)) throw Error(ErrorCode::InvalidArgument, "inclusion eps must be >= 1");
    if (inc.shape == Shape::Disk) {
      if (!(inc.radius > 0.0 && 2.0 * inc.radius < 1.0))
        throw Error(ErrorCode::InvalidArgument, "disk radius must satisfy 0 < 2r < 1");
    } else if (!(inc.width > 0.0 && inc.width <= 1.0 && inc.height > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "rectangle needs 0 < width <= 1 and height > 0");
    }
  };
  for (const auto& inc : s.inclusions) check(inc);
  for (const auto& inc : s.upper) check(inc);
  for (const auto& inc : s.lower) check(inc);
  if (s.coupling == Coupling::DoubleArray && !(s.h_min < s.h_max))
    throw Error(ErrorCode::InvalidArgument, "h range must satisfy h_min < h_max");
}

double eval_epsilon(const StructureSpec& s, double h, double x, double z) {
  if (!s.in_range(h)) throw Error(ErrorCode::OutOfRange, "h outside the coupling range");
  const double xr = x - std::floor(x);
  double eps = 1.0;
  for (const Inclusion& inc : s.placed(h)) {
    for (double shift : {-1.0, 0.0, 1.0}) {
      if (inc.contains(xr + shift, z)) {
        eps += inc.eps - 1.0;
        break;
      }
    }
  }
  return eps;
}

SupportBox support_box(const StructureSpec& s) {
  if (s.empty()) return {0.0, 0.0, true};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (s.coupling == Coupling::None) {
    for (const auto& inc : s.inclusions) {
      lo = std::min(lo, inc.zmin());
      hi = std::max(hi, inc.zmax());
    }
  } else {
    // Union over h in (h_min, h_max): the upper array moves up with h.
    for (const auto& inc : s.upper) {
      lo = std::min(lo, inc.zmin() + s.h_min);
      hi = std::max(hi, inc.zmax() + s.h_max);
    }
    for (const auto& inc : s.lower) {
      lo = std::min(lo, inc.zmin() - s.h_max);
      hi = std::max(hi, inc.zmax() - s.h_min);
    }
  }
  const double pad = 0.1 * 0.5 * (hi - lo);
  return {lo - pad, hi + pad, false};
}

double QuadratureDomain::total_weight() const {
  double sum = 0.0;
  for (const auto& n : nodes) sum += n.w;
  return sum;
}

QuadratureDomain build_quadrature(const StructureSpec& s, double h, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
  if (!s.in_range(h)) throw Error(ErrorCode::OutOfRange, "h outside the coupling range");
  QuadratureDomain q;
  q.box = support_box(s);
  q.parts = s.placed(h);
  q.order = order;
  const GaussRule& g = gauss_legendre(order);
  for (int p = 0; p < int(q.parts.size()); ++p) {
    const Inclusion& inc = q.parts[p];
    const double c = inc.eps - 1.0;
    if (inc.shape == Shape::Disk) {
      const int nt = 2 * order;
      const double r2 = inc.radius * inc.radius;
      for (int i = 0; i < order; ++i) {
        const double s2 = 0.5 * r2 * (g.nodes[i] + 1.0);
        const double rho = std::sqrt(s2);
        const double wr = 0.5 * (0.5 * r2 * g.weights[i]);
        for (int k = 0; k < nt; ++k) {
          const double th = (k + 0.5) * kTwoPi / nt;
          q.nodes.push_back({inc.cx + rho * std::cos(th), inc.cz + rho * std::sin(th),
                             wr * kTwoPi / nt, c, p});
        }
      }
    } else {
      const double hx = 0.5 * inc.width, hz = 0.5 * inc.height;
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
          q.nodes.push_back({inc.cx + hx * g.nodes[i], inc.cz + hz * g.nodes[j],
                             hx * hz * g.weights[i] * g.weights[j], c, p});
    }
  }
  return q;
}

namespace {

// Antiderivative of ln(u^2 + v^2) in u and v.
double rect_antiderivative(double u, double v) {
  double f = -3.0 * u * v;
  const double r2 = u * u + v * v;
  if (r2 > 0.0) f += u * v * std::log(r2);
  if (u != 0.0) f += u * u * std::atan(v / u);
  if (v != 0.0) f += v * v * std::atan(u / v);
  return f;
}

}  // namespace

double log_potential(const Inclusion& part, double x, double z) {
  if (part.shape == Shape::Disk) {
    const double a = part.radius;
    const double d = std::hypot(x - part.cx, z - part.cz);
    if (d >= a) return kPi * a * a * std::log(d);
    return kPi * a * a * std::log(a) - 0.5 * kPi * (a * a - d * d);
  }
  const double u1 = part.cx - 0.5 * part.width - x, u2 = part.cx + 0.5 * part.width - x;
  const double v1 = part.cz - 0.5 * part.height - z, v2 = part.cz + 0.5 * part.height - z;
  return 0.5 * (rect_antiderivative(u2, v2) - rect_antiderivative(u1, v2) -
                 rect_antiderivative(u2, v1) + rect_antiderivative(u1, v1));
}

}  // namespace siegert
