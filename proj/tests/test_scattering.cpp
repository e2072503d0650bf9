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
#include "testutil.hpp"

using namespace siegert;
using testutil::rel_err;
using testutil::uniform;

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

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("vacuum transmits everything") {
  StructureSpec vac;
  const auto sol = solve_plane_wave(vac, 0.0, 3.0, 0.4, quad(vac, 4));
  CHECK(sol.transmittance() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sol.reflectance() == doctest::Approx(0.0));
}

TEST_CASE("lossless scattering conserves flux (random k)") {
  const auto s = single_disk();
  const auto q = quad(s, 6);
  testutil::rng(51);
  for (int i = 0; i < 12; ++i) {
    const double kx = uniform(-1.0, 1.0);
    const double k = uniform(std::abs(kx) + 0.05, kTwoPi - std::abs(kx) - 0.05);
    const auto sol = solve_plane_wave(s, 0.0, k, kx, q);
    CHECK(sol.flux_deficit < 1e-10);
    CHECK(sol.transmittance() + sol.reflectance() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.r.size() == 1);
  }
}

TEST_CASE("above the first threshold more channels open and flux still balances") {
  const auto s = single_disk();
  const auto sol = solve_plane_wave(s, 0.0, 7.5, 0.0, quad(s, 6));
  CHECK(sol.r.size() == 3);
  CHECK(sol.flux_deficit < 1e-10);
  // Mirror symmetry at normal incidence: orders +1 and -1 carry the same flux.
  CHECK(std::abs(sol.t.at(1)) == doctest::Approx(std::abs(sol.t.at(-1))).epsilon(1e-8));
}

TEST_CASE("argument errors") {
  const auto s = single_disk();
  const auto q = quad(s, 4);
  CHECK(code_of([&] { solve_plane_wave(s, 0.0, 0.2, 0.3, q); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { solve_plane_wave(s, 0.0, kTwoPi, 0.0, q); }) == ErrorCode::BranchPoint);
}

TEST_CASE("spectrum reports failed rows without aborting") {
  const auto s = single_disk();
  const auto rows = spectrum(s, 0.0, {2.0, kTwoPi, 3.0}, 0.0, quad(s, 4));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK_FALSE(rows[1].error.empty());
  CHECK(rows[2].ok);
  CHECK(rows[2].kappa == doctest::Approx(9.0));
}

TEST_CASE("Lorentzian fit recovers synthetic line shapes (random)") {
  testutil::rng(52);
  for (int i = 0; i < 20; ++i) {
    const double x0 = uniform(5, 15), g = uniform(0.05, 0.5), a = uniform(-1, 1);
    const double b0 = uniform(-1, 1), b1 = uniform(-0.05, 0.05);
    std::vector<double> x, y;
    for (int k = 0; k <= 400; ++k) {
      const double t = x0 - 10 * g + 20 * g * k / 400.0;
      x.push_back(t);
      y.push_back(b0 + b1 * t + a * g * g / ((t - x0) * (t - x0) + g * g));
    }
    const auto fit = fit_lorentzian(x, y, x.front(), x.back());
    CHECK(fit.kappa_res == doctest::Approx(x0).epsilon(1e-8));
    CHECK(fit.gamma == doctest::Approx(g).epsilon(1e-6));
    CHECK(fit.amplitude == doctest::Approx(a).epsilon(1e-6));
    CHECK(fit.rel_rms < 1e-8);
  }
}

TEST_CASE("Lorentzian fit refuses a non-resonant signal") {
  std::vector<double> x, y;
  for (int k = 0; k < 100; ++k) {
    x.push_back(k * 0.1);
    y.push_back(std::sin(3.0 * k * 0.1));
  }
  CHECK(code_of([&] { fit_lorentzian(x, y, 0.0, 10.0); }) == ErrorCode::PoorFit);
}

TEST_CASE("residue and boundary amplitudes agree") {
  const auto s = single_disk();
  const auto q = quad(s, 8);
  const auto p = refine_pole(s, 0.0, 0.0, {33.6, -0.7}, q);
  const auto adj = adjoint_pole(s, p);
  const cplx a1 = residue_amplitude(p).a_n;
  const cplx a2 = boundary_amplitude(p, adj, default_flux_box(p)).a_n;
  CHECK(rel_err(a2, a1) < 1e-3);
  CHECK(residue_amplitude(p).route == AmplitudeRoute::ResidueFormula);
}

TEST_CASE("adjoint pole sits at -kx with the same kappa") {
  const auto s = single_disk();
  const auto q = quad(s, 6);
  const auto p = refine_pole(s, 0.0, 0.4, {33.6, -0.7}, q);
  const auto adj = adjoint_pole(s, p);
  CHECK(adj.kx == doctest::Approx(-0.4));
  CHECK(std::abs(adj.kappa - p.kappa) < 1e-8);
}

TEST_CASE("pole term dominates the scattered field on resonance") {
  const auto s = single_disk();
  const auto q = quad(s, 8);
  const auto p = refine_pole(s, 0.0, 0.0, {33.6, -0.7}, q);
  const auto sol = solve_plane_wave(s, 0.0, std::sqrt(p.kappa.real()), 0.0, q);
  const CVec scat = sol.total - incident_on_nodes(*q, sol.p);
  const CVec bg = background_field(sol, {p});
  CHECK(weighted_norm(*q, bg) < 0.5 * weighted_norm(*q, scat));
}
