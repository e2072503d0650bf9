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

// Exercises the extern "C" interface through the shared library only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "siegert/siegert.h"

namespace {

const char* kSingle = R"({"structure": {"inclusions": [{"radius": 0.3, "eps": 2}]}})";

}  // namespace

TEST_CASE("version string") { CHECK(std::strlen(siegert_version()) > 0); }

TEST_CASE("structure handle lifecycle") {
  siegert_structure* s = nullptr;
  REQUIRE(siegert_structure_from_json(kSingle, &s) == SIEGERT_OK);
  REQUIRE(s != nullptr);
  double T = 0, R = 0;
  REQUIRE(siegert_transmission(s, 3.0, 0.0, 6, &T, &R) == SIEGERT_OK);
  CHECK(T + R == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(siegert_transmission(s, 0.1, 0.5, 6, &T, &R) == SIEGERT_ERR_ARGUMENT);
  CHECK(std::string(siegert_last_error()).find("InvalidArgument") != std::string::npos);
  siegert_structure_free(s);
}

TEST_CASE("schema errors through the C API") {
  siegert_structure* s = nullptr;
  CHECK(siegert_structure_from_json(R"({"structure": {"inclusions": [{"eps": 2}]}})", &s) == SIEGERT_ERR_SCHEMA);
  CHECK(s == nullptr);
  CHECK(std::string(siegert_last_error()).find("radius") != std::string::npos);
  CHECK(siegert_structure_from_json(nullptr, &s) == SIEGERT_ERR_ARGUMENT);
}

TEST_CASE("kernel evaluation") {
  double re = 0, im = 0;
  REQUIRE(siegert_green(10.0, -0.5, 0.0, 0.3, 0.2, &re, &im) == SIEGERT_OK);
  // mpmath plane-wave series.
  CHECK(re == doctest::Approx(-1.1571714745358406).epsilon(1e-10));
  CHECK(im == doctest::Approx(1.3352671901982491).epsilon(1e-10));
}

TEST_CASE("pole search handles") {
  siegert_structure* s = nullptr;
  REQUIRE(siegert_structure_from_json(kSingle, &s) == SIEGERT_OK);
  siegert_pole_set* set = nullptr;
  REQUIRE(siegert_find_poles(s, 0.0, 33.0, 34.5, -1.2, -0.4, 6, &set) == SIEGERT_OK);
  REQUIRE(siegert_pole_count(set) == 1);
  double kr = 0, ki = 0, res = 1;
  REQUIRE(siegert_pole_get(set, 0, &kr, &ki, &res) == SIEGERT_OK);
  CHECK(kr == doctest::Approx(33.7).epsilon(1e-2));
  CHECK(ki < 0.0);
  CHECK(res < 1e-8);
  CHECK(siegert_pole_get(set, 5, &kr, &ki, &res) == SIEGERT_ERR_ARGUMENT);
  siegert_pole_set_free(set);
  siegert_structure_free(s);
  CHECK(siegert_pole_count(nullptr) == 0);
}

TEST_CASE("run through the C API") {
  const auto dir = std::filesystem::temp_directory_path() / "siegert_capi_run";
  std::filesystem::remove_all(dir);
  CHECK(siegert_run("poles", R"({"structure": {"inclusions": []}})", dir.c_str(), 1) == SIEGERT_OK);
  CHECK(std::filesystem::exists(dir / "poles.json"));
  CHECK(siegert_run("poles", R"({"structure": {"inclusions": []}})", dir.c_str(), 1) == SIEGERT_ERR_NUMERICAL);
  CHECK(std::string(siegert_last_error()).find("IoError") != std::string::npos);
}
