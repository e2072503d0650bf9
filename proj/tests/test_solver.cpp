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
#include "siegert/scattering.hpp"
#include "siegert/siegert_solver.hpp"
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

// Order-8 poles of the r = 0.3, eps = 2 array at kx = 0.
const cplx kLeaky(33.708955098421, -0.783797717032);
const double kProtected = 30.334353283097;

struct Fixture {
  StructureSpec s = single_disk();
  std::shared_ptr<const QuadratureDomain> q = quad(s, 8);
};

const SiegertPole& leaky() {
  static const SiegertPole p = [] {
    Fixture f;
    return refine_pole(f.s, 0.0, 0.0, {33.6, -0.7}, f.q);
  }();
  return p;
}

}  // namespace

TEST_CASE("leaky pole of the single array") {
  const auto& p = leaky();
  CHECK(std::abs(p.kappa - kLeaky) < 1e-9);
  CHECK(p.residual < 1e-8);
  CHECK(p.gamma() > 0.0);
  CHECK(std::abs(p.d_lambda_d_kappa) > 1e-8);
  CHECK(std::abs(p.lambda0 - 1.0) < 1e-10);
  CHECK(std::abs(p.state.cwiseAbs().maxCoeff() - 1.0) < 1e-14);
  CHECK(p.gap > 0.0);
}

TEST_CASE("flux width reproduces -Im kappa") {
  const auto& p = leaky();
  const double g = width_from_flux(p, default_flux_box(p));
  CHECK(g == doctest::Approx(p.gamma()).epsilon(1e-2));
  // The width does not depend on where the flux is measured.
  const double g2 = width_from_flux(p, default_flux_box(p, 0.4));
  CHECK(g2 == doctest::Approx(g).epsilon(1e-6));
}

TEST_CASE("residue of the resolvent is the rank-one pole term") {
  Fixture f;
  const auto& p = leaky();
  const CMat R = residue_by_contour(f.s, p, 1e-2, 16);
  CVec row(p.state.size());
  for (Eigen::Index j = 0; j < row.size(); ++j)
    row(j) = f.q->nodes[std::size_t(j)].w * std::conj(p.left_functional(j));
  const CMat Rd = p.state * row.transpose();
  CHECK((R - Rd).norm() <= 1e-6 * Rd.norm());
}

TEST_CASE("rescaling keeps the pole term invariant") {
  SiegertPole p = leaky();
  const cplx a0 = residue_amplitude(p).a_n;
  const CVec e0 = p.state;
  const cplx alpha(0.3, -1.7);
  rescale(p, alpha);
  CHECK((p.state - alpha * e0).norm() < 1e-14 * p.state.norm());
  CHECK(rel_err(residue_amplitude(p).a_n * alpha, a0) < 1e-12);
}

TEST_CASE("Siegert field is continuous across the support box") {
  const auto& p = leaky();
  const auto& box = p.quad->box;
  for (double x : {0.1, 0.5, 0.8}) {
    const cplx in = eval_siegert_field(p, x, box.z_hi - 1e-9);
    const cplx out = eval_siegert_field(p, x, box.z_hi + 1e-9);
    CHECK(rel_err(out, in) < 1e-6);
  }
}

TEST_CASE("outgoing amplitudes of a leaky pole") {
  const auto& p = leaky();
  const auto amps = far_field_amplitudes(p, -1, 1);
  REQUIRE(amps.size() == 3);
  // kx = 0 and a mirror-symmetric disk: up and down amplitudes agree in size.
  for (const auto& [m, ud] : amps) CHECK(std::abs(ud.first) == doctest::Approx(std::abs(ud.second)).epsilon(1e-6));
  CHECK(std::abs(amps.at(0).first) > 1e-3);
}

TEST_CASE("symmetry-protected bound state") {
  Fixture f;
  const auto p = refine_pole(f.s, 0.0, 0.0, {30.3, -0.01}, f.q);
  CHECK(p.kappa.real() == doctest::Approx(kProtected).epsilon(1e-10));
  CHECK(std::abs(p.kappa.imag()) < 1e-8);
  const auto b = normalize_bic(p);
  CHECK(b.tag == NormalizationTag::BicNormalized);
  CHECK(strip_norm_sq(b) == doctest::Approx(1.0).epsilon(1e-10));
  // No radiation in the open channel.
  CHECK(std::abs(far_field_amplitudes(b, 0, 0).at(0).first) < 1e-6);
  CHECK_THROWS_AS(normalize_bic(leaky()), Error);
}

TEST_CASE("scan finds the leaky pole and vacuum has none") {
  Fixture f;
  const auto c = scan_poles(f.s, 0.0, 0.0, {32.0, 35.0, -1.5, -0.1}, 6, 4, f.q);
  REQUIRE_FALSE(c.empty());
  CHECK(std::abs(c.front().kappa - kLeaky) < 0.6);
  StructureSpec vac;
  auto qv = std::make_shared<const QuadratureDomain>(build_quadrature(vac, 0.0, 4));
  CHECK(scan_poles(vac, 0.0, 0.0, {1.0, 30.0, -2.0, -0.1}, 5, 5, qv).empty());
}

TEST_CASE("guesses on a branch cut are rejected") {
  Fixture f;
  try {
    refine_pole(f.s, 0.0, 0.0, {kTwoPi * kTwoPi, -0.5}, f.q);
    FAIL("expected CutCollision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CutCollision);
  }
}
