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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "siegert/runner.hpp"

using namespace siegert;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "siegert_runner_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSingle = R"({
  "structure": {"inclusions": [{"radius": 0.3, "eps": 2}]},
  "physics": {"search": {"re": [33.0, 34.5], "im": [-1.2, -0.4], "grid": [4, 4]},
              "k_grid": {"start": 1.0, "stop": 6.0, "count": 12},
              "modes_grid": {"nx": 5, "nz": 7},
              "packet": {"guess": [33.7, -0.78], "t_count": 11}},
  "numerics": {"order": 6}
})";

const char* kVacuum = R"({"structure": {"inclusions": []}})";

}  // namespace

TEST_CASE("command names") {
  for (const char* c : {"poles", "modes", "scatter", "sweep-h", "amplify", "decay"}) CHECK(known_command(c));
  CHECK_FALSE(known_command("plot"));
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("poles on vacuum: empty list, exit 0") {
  const auto dir = fresh_dir("vacuum");
  const auto r = run_command("poles", kVacuum, dir.string(), 1);
  REQUIRE(r.exit_code == 0);
  const auto doc = json::parse(slurp(dir / "poles.json"));
  CHECK(doc["poles"].empty());
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("modes on vacuum fail with a numerical exit code") {
  const auto dir = fresh_dir("vacuum_modes");
  const auto r = run_command("modes", kVacuum, dir.string(), 1);
  CHECK(r.exit_code == 3);
  CHECK(json::parse(r.error_json)["error"] == "OutOfRange");
}

TEST_CASE("schema and argument errors exit with 2") {
  const auto r = run_command("poles", R"({"structure": {}, "bogus": 1})", fresh_dir("bad").string(), 1);
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.error_json)["path"] == "$.bogus");
  CHECK(run_command("plot", kVacuum, fresh_dir("plot").string(), 1).exit_code == 2);
  // sweep-h needs a double array.
  CHECK(run_command("sweep-h", kVacuum, fresh_dir("sweep").string(), 1).exit_code == 2);
}

TEST_CASE("results directories are never overwritten") {
  const auto dir = fresh_dir("twice");
  REQUIRE(run_command("poles", kVacuum, dir.string(), 1).exit_code == 0);
  const auto r = run_command("poles", kVacuum, dir.string(), 1);
  CHECK(r.exit_code == 3);
  CHECK(json::parse(r.error_json)["error"] == "IoError");
}

TEST_CASE("poles and modes on the single array") {
  const auto dir = fresh_dir("modes");
  const auto r = run_command("modes", kSingle, dir.string(), 1);
  REQUIRE(r.exit_code == 0);
  const auto doc = json::parse(slurp(dir / "poles.json"));
  REQUIRE(doc["poles"].size() == 1);
  const auto& p = doc["poles"][0];
  CHECK(p["re_kappa"].get<double>() == doctest::Approx(33.709).epsilon(1e-3));
  CHECK(p["gamma"].get<double>() == doctest::Approx(0.784).epsilon(1e-2));
  CHECK(p["residual"].get<double>() < 1e-8);
  CHECK(p["amplitudes"].size() == 5);

  const std::string csv = slurp(dir / "modes.csv");
  CHECK(csv.rfind("x,z,re_E,im_E\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 7);

  const auto man = json::parse(slurp(dir / "manifest.json"));
  CHECK(man["command"] == "modes");
  CHECK(man["input_sha256"] == sha256_hex(kSingle));
  CHECK(man["threads"] == 1);
  REQUIRE(man["files"].size() == 2);
  for (const auto& f : man["files"]) CHECK(f["sha256"] == sha256_hex(slurp(dir / f["name"].get<std::string>())));
}

TEST_CASE("scatter output is deterministic") {
  const auto a = fresh_dir("scatter_a"), b = fresh_dir("scatter_b");
  REQUIRE(run_command("scatter", kSingle, a.string(), 1).exit_code == 0);
  REQUIRE(run_command("scatter", kSingle, b.string(), 1).exit_code == 0);
  const std::string sa = slurp(a / "spectrum.csv");
  CHECK(sa.rfind("k,kappa,T,R,flux_deficit\n", 0) == 0);
  CHECK(std::count(sa.begin(), sa.end(), '\n') == 13);
  CHECK(sa == slurp(b / "spectrum.csv"));
}

TEST_CASE("decay writes the time series and a summary") {
  const auto dir = fresh_dir("decay");
  const auto r = run_command("decay", kSingle, dir.string(), 1);
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(dir / "decay.csv");
  CHECK(csv.rfind("t,re_omega_direct,im_omega_direct,re_omega_residue,im_omega_residue,envelope_direct\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  const auto s = json::parse(slurp(dir / "decay.json"));
  CHECK(s["tau"].get<double>() > 0.0);
  CHECK(s["sigma"].get<double>() == doctest::Approx(std::sqrt(0.784) / 2).epsilon(1e-2));
}
