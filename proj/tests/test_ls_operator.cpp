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
#include <memory>

#include "siegert/error.hpp"
#include "siegert/green.hpp"
#include "siegert/ls_operator.hpp"
#include "siegert/scattering.hpp"
#include "testutil.hpp"

using namespace siegert;
using testutil::rel_err;

namespace {

StructureSpec single_disk(double r = 0.3, double eps = 2.0) {
  StructureSpec s;
  Inclusion d;
  d.radius = r;
  d.eps = eps;
  s.inclusions = {d};
  return s;
}

std::shared_ptr<const QuadratureDomain> quad(const StructureSpec& s, int order) {
  return std::make_shared<const QuadratureDomain>(build_quadrature(s, 0.0, order));
}

// Pole of the r = 0.3, eps = 2 array at kx = 0 for the order-8 quadrature.
const cplx kPole(33.708955098421, -0.783797717032);

}  // namespace

TEST_CASE("off-diagonal entries are weighted kernel values") {
  const auto s = single_disk();
  const auto q = quad(s, 6);
  const SpectralPoint p{{20.0, -0.5}, 0.3};
  const auto op = assemble(s, 0.0, p, q);
  REQUIRE(op.size() == Eigen::Index(q->size()));
  int checked = 0;
  for (std::size_t i = 0; i < q->size(); i += 7) {
    for (std::size_t j = 0; j < q->size() && checked < 20; j += 5) {
      const auto& a = q->nodes[i];
      const auto& b = q->nodes[j];
      if (std::abs(a.z - b.z) < 0.05) continue;  // keeps the plane-wave series short
      ++checked;
      const cplx h = green_spectral(p, a.x - b.x, a.z - b.z, 1e-15).value;
      CHECK(rel_err(op.A(i, j), b.w * b.contrast * h) < 1e-9);
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("vacuum contrast gives the zero operator") {
  const auto s = single_disk(0.3, 1.0);
  const auto q = quad(s, 4);
  const auto op = assemble(s, 0.0, {{10.0, 0.0}, 0.0}, q);
  CHECK(op.A.norm() == 0.0);
  const CVec rhs = CVec::Ones(op.size());
  CHECK((resolvent_solve(op, rhs) - rhs).norm() == 0.0);
}

TEST_CASE("size mismatch is reported") {
  const auto s = single_disk();
  const auto op = assemble(s, 0.0, {{10.0, 0.0}, 0.0}, quad(s, 4));
  try {
    siegert::apply(op, CVec::Ones(3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("weighted norm is the induced norm of the inner product") {
  const auto s = single_disk();
  const auto q = quad(s, 5);
  testutil::rng(41);
  CVec f(Eigen::Index(q->size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = testutil::uniform_c(-1, 1, -1, 1);
  CHECK(weighted_norm(*q, f) * weighted_norm(*q, f) == doctest::Approx(inner(*q, f, f).real()));
  CHECK(std::abs(inner(*q, f, f).imag()) < 1e-15);
}

TEST_CASE("eigenvalue near one converges with the quadrature order") {
  const auto s = single_disk();
  std::vector<cplx> lam;
  for (int order : {6, 8, 10}) {
    const auto op = assemble(s, 0.0, {kPole, 0.0}, quad(s, order));
    lam.push_back(eigen_near_one(op, 1e-2).lambda0);
  }
  CHECK(std::abs(lam[1] - 1.0) < 1e-8);
  CHECK(std::abs(lam[2] - lam[1]) < std::abs(lam[1] - lam[0]) + 1e-9);
}

TEST_CASE("Riesz projection at a pole") {
  const auto s = single_disk();
  const auto op = assemble(s, 0.0, {kPole, 0.0}, quad(s, 8));
  const auto e = eigen_near_one(op, 1e-3);
  const auto P = riesz_projection(op, 1e-3);
  CHECK(P.rank_estimate == 1);
  CHECK(P.idempotency < 1e-8);
  CHECK(std::abs(lambda0_formula(op, P, CVec::Ones(op.size())) - e.lambda0) < 1e-8);
  // P is the spectral projector v w^H / (w^H v).
  const CMat Pd = e.right * e.left.adjoint() / e.left.dot(e.right);
  CHECK((P.P - Pd).norm() < 1e-8 * Pd.norm());
}

TEST_CASE("eigenvalue derivative matches finite differences") {
  const auto s = single_disk();
  const auto q = quad(s, 6);
  const auto op = assemble(s, 0.0, {kPole, 0.0}, q);
  const auto e = eigen_near_one(op, 1e-2);
  const cplx dl = d_lambda_d_kappa(s, op, e);
  const double d = 1e-3;
  auto lam = [&](cplx k) { return eigen_near_one(assemble(s, 0.0, {k, 0.0}, q), 1e-2).lambda0; };
  const cplx fd = (lam(kPole + d) - lam(kPole - d)) / (2 * d);
  CHECK(rel_err(dl, fd) < 1e-5);
  CHECK(std::abs(dl) > 1e-8);
}

TEST_CASE("field interpolant reproduces nodes and the source sum outside") {
  const auto s = single_disk();
  const auto q = quad(s, 6);
  const SpectralPoint p{{20.0, 0.0}, 0.2};
  const auto op = assemble(s, 0.0, p, q);
  const CVec inc = incident_on_nodes(*q, p);
  const CVec E = resolvent_solve(op, inc);
  const FieldInterpolant F(p, q, E);
  const auto& n0 = q->nodes[10];
  CHECK(rel_err(F(n0.x, n0.z), E(10)) < 1e-14);
  const double x = 0.2, z = 0.7;
  const Kernel K(p);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < q->size(); ++j) {
    const auto& nj = q->nodes[j];
    sum += nj.w * nj.contrast * K.value(x - nj.x, z - nj.z) * E(Eigen::Index(j));
  }
  CHECK(rel_err(F(x, z), sum) < 1e-10);
  // Quasi-periodic in x.
  CHECK(rel_err(F(x + 1.0, z), std::exp(cplx(0, p.kx)) * F(x, z)) < 1e-12);
}

TEST_CASE("interpolant at an interior point matches a finer solve") {
  const auto s = single_disk();
  const SpectralPoint p{{20.0, 0.0}, 0.0};
  std::vector<cplx> v;
  for (int order : {6, 10, 14}) {
    const auto q = quad(s, order);
    const CVec E = resolvent_solve(assemble(s, 0.0, p, q), incident_on_nodes(*q, p));
    const double kz = std::sqrt(20.0);
    v.push_back(FieldInterpolant(p, q, E)(0.55, 0.1, std::polar(1.0, kz * 0.1)));
  }
  CHECK(rel_err(v[0], v[2]) < 1e-3);
  CHECK(rel_err(v[1], v[2]) < rel_err(v[0], v[2]));
}
