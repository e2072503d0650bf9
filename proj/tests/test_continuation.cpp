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

#include "siegert/continuation.hpp"
#include "siegert/error.hpp"
#include "testutil.hpp"

using namespace siegert;
using testutil::uniform;

namespace {

StructureSpec double_disk() {
  StructureSpec s;
  s.coupling = Coupling::DoubleArray;
  Inclusion d;
  d.radius = 0.25;
  d.eps = 3.0;
  s.upper = {d};
  s.lower = s.upper;
  s.h_min = 0.26;
  s.h_max = 3.0;
  return s;
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

const ContinuationBranch& short_branch() {
  static const ContinuationBranch b = [] {
    const auto s = double_disk();
    const auto p = refine_pole(s, 0.64, 0.0, {32.76, -0.0487}, quadrature_at(s, 0.64, 6));
    ContinuationOptions o;
    o.step0 = 0.01;
    return continue_pole(s, p, 0.665, o);
  }();
  return b;
}

}  // namespace

TEST_CASE("quadrature follows the coupling parameter") {
  const auto s = double_disk();
  const auto q = quadrature_at(s, 0.7, 6);
  REQUIRE(q->parts.size() == 2);
  CHECK(q->parts[0].cz == doctest::Approx(0.7));
  CHECK(q->parts[1].cz == doctest::Approx(-0.7));
  CHECK(q->order == 6);
}

TEST_CASE("continued samples are poles of their own operator") {
  const auto s = double_disk();
  const auto& b = short_branch();
  REQUIRE(b.samples.size() >= 3);
  CHECK(b.samples.front().h == doctest::Approx(0.64));
  CHECK(b.samples.back().h == doctest::Approx(0.665));
  for (std::size_t i = 1; i < b.samples.size(); ++i) CHECK(b.samples[i].h > b.samples[i - 1].h);
  for (const auto& smp : b.samples) {
    CHECK(smp.pole.residual < 1e-8);
    CHECK(smp.pole.h == doctest::Approx(smp.h));
  }
  // An independent refinement from a nearby guess lands on the same pole.
  const auto& last = b.samples.back();
  const auto fresh = refine_pole(s, last.h, 0.0, last.pole.kappa + cplx(1e-3, 1e-4), last.pole.quad);
  CHECK(std::abs(fresh.kappa - last.pole.kappa) < 1e-8);
}

TEST_CASE("width shrinks toward the bound state along this branch") {
  const auto& b = short_branch();
  CHECK(b.samples.back().pole.gamma() < b.samples.front().pole.gamma());
  CHECK(code_of([&] { detect_bic(double_disk(), b); }) == ErrorCode::NoMinimum);
}

TEST_CASE("too few samples for limits") {
  BicRecord rec;
  rec.h_b = 0.68;
  ContinuationBranch tiny;
  tiny.samples = {short_branch().samples.front()};
  CHECK(code_of([&] { limit_amplitudes(tiny, rec); }) == ErrorCode::InsufficientSamples);
  CHECK(code_of([&] { detect_bic(double_disk(), tiny); }) == ErrorCode::NoMinimum);
}

TEST_CASE("log-log slope of exact power laws (random)") {
  testutil::rng(71);
  for (int i = 0; i < 50; ++i) {
    const double beta = uniform(-2, 2), a = uniform(0.1, 10);
    std::vector<double> x, y;
    for (int k = 0; k < 10; ++k) {
      x.push_back(std::pow(10.0, -6.0 + 0.4 * k));
      y.push_back(a * std::pow(x.back(), beta));
    }
    CHECK(loglog_slope(x, y) == doctest::Approx(beta).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("target outside the coupling range is rejected") {
  const auto s = double_disk();
  const auto& p = short_branch().samples.front().pole;
  CHECK_THROWS_AS(continue_pole(s, p, 5.0), Error);
}
