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

#include <doctest.h>

#include <cmath>

#include "siegert/error.hpp"
#include "siegert/structure.hpp"
#include "testutil.hpp"

using namespace siegert;
using testutil::uniform;

namespace {

Inclusion disk(double r, double eps, double cz = 0.0) {
  Inclusion d;
  d.radius = r;
  d.eps = eps;
  d.cz = cz;
  return d;
}

Inclusion rect(double w, double h, double eps) {
  Inclusion d;
  d.shape = Shape::Rect;
  d.width = w;
  d.height = h;
  d.eps = eps;
  return d;
}

StructureSpec single(const Inclusion& inc) {
  StructureSpec s;
  s.inclusions = {inc};
  return s;
}

}  // namespace

TEST_CASE("validation rejects bad geometry") {
  CHECK_NOTHROW(validate(single(disk(0.3, 2.0))));
  CHECK_THROWS_AS(validate(single(disk(0.3, 0.5))), Error);
  CHECK_THROWS_AS(validate(single(disk(0.6, 2.0))), Error);
  CHECK_THROWS_AS(validate(single(rect(0.0, 0.2, 2.0))), Error);
  StructureSpec dbl;
  dbl.coupling = Coupling::DoubleArray;
  dbl.upper = {disk(0.25, 3.0)};
  dbl.lower = dbl.upper;
  dbl.h_min = 0.5;
  dbl.h_max = 0.4;
  CHECK_THROWS_AS(validate(dbl), Error);
}

TEST_CASE("permittivity profile") {
  const auto s = single(disk(0.3, 2.0));
  CHECK(eval_epsilon(s, 0.0, 0.5, 0.0) == 2.0);
  CHECK(eval_epsilon(s, 0.0, 0.5, 0.35) == 1.0);
  CHECK(eval_epsilon(s, 0.0, 1.5, 0.1) == 2.0);
  CHECK(eval_epsilon(s, 0.0, -0.15, 0.0) == 1.0);
  StructureSpec empty;
  CHECK(eval_epsilon(empty, 0.0, 0.3, 0.0) == 1.0);
}

TEST_CASE("double array placement and support box") {
  StructureSpec s;
  s.coupling = Coupling::DoubleArray;
  s.upper = {disk(0.25, 3.0)};
  s.lower = s.upper;
  s.h_min = 0.26;
  s.h_max = 1.0;
  const auto placed = s.placed(0.6);
  REQUIRE(placed.size() == 2);
  CHECK(placed[0].cz == doctest::Approx(0.6));
  CHECK(placed[1].cz == doctest::Approx(-0.6));
  const auto box = support_box(s);
  // Extent [-1.25, 1.25] plus 5% padding.
  CHECK(box.z_hi == doctest::Approx(1.375));
  CHECK(box.z_lo == doctest::Approx(-1.375));
  CHECK(eval_epsilon(s, 0.6, 0.5, 0.6) == 3.0);
  CHECK(eval_epsilon(s, 0.6, 0.5, 0.0) == 1.0);
  CHECK(s.in_range(0.5));
  CHECK_FALSE(s.in_range(1.5));
}

TEST_CASE("support box of a single array and of vacuum") {
  const auto box = support_box(single(disk(0.3, 2.0)));
  CHECK(box.z_lo == doctest::Approx(-0.33));
  CHECK(box.z_hi == doctest::Approx(0.33));
  CHECK(support_box(StructureSpec{}).degenerate);
}

TEST_CASE("quadrature weights sum to the inclusion area") {
  for (int order : {4, 8, 12}) {
    const auto qd = build_quadrature(single(disk(0.3, 2.0)), 0.0, order);
    CHECK(qd.total_weight() == doctest::Approx(kPi * 0.09).epsilon(1e-12));
    const auto qr = build_quadrature(single(rect(0.4, 0.2, 2.0)), 0.0, order);
    CHECK(qr.total_weight() == doctest::Approx(0.08).epsilon(1e-12));
    for (const auto& n : qd.nodes) {
      CHECK(n.contrast == doctest::Approx(1.0));
      CHECK(n.w > 0.0);
    }
  }
}

TEST_CASE("quadrature nodes lie inside their part (random shapes)") {
  testutil::rng(31);
  for (int i = 0; i < 30; ++i) {
    const double r = uniform(0.05, 0.49);
    const auto q = build_quadrature(single(disk(r, uniform(1.0, 10.0), uniform(-1, 1))), 0.0, 6);
    for (const auto& n : q.nodes) CHECK(q.parts[n.group].contains(n.x, n.z));
  }
}

TEST_CASE("quadrature integrates smooth functions over the disk") {
  // int_disk (x - cx)^2 dA = pi r^4 / 4
  const double r = 0.3;
  const auto q = build_quadrature(single(disk(r, 2.0)), 0.0, 8);
  double s = 0.0;
  for (const auto& n : q.nodes) s += n.w * (n.x - 0.5) * (n.x - 0.5);
  CHECK(s == doctest::Approx(kPi * std::pow(r, 4) / 4).epsilon(1e-12));
}

TEST_CASE("logarithmic potential in closed form") {
  const Inclusion d = disk(0.3, 2.0);
  // Center value pi a^2 (ln a - 1/2); outside it is the point-mass potential.
  CHECK(log_potential(d, 0.5, 0.0) == doctest::Approx(kPi * 0.09 * (std::log(0.3) - 0.5)));
  CHECK(log_potential(d, 0.5, 0.7) == doctest::Approx(kPi * 0.09 * std::log(0.7)));
  // Rectangles: mpmath two-dimensional quadrature.
  Inclusion r = rect(0.4, 0.2, 2.0);
  CHECK(log_potential(r, 0.55, 0.03) == doctest::Approx(-0.17630107784617602521).epsilon(1e-12));
  CHECK(log_potential(r, 0.9, 0.3) == doctest::Approx(-0.055881693846212030334).epsilon(1e-12));
}
