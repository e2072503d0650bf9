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

// siegert <command> --config <path> [--out <dir>] [--threads N]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "siegert/siegert.h"

namespace {

int exit_code(siegert_status st) {
  switch (st) {
    case SIEGERT_OK:
      return 0;
    case SIEGERT_ERR_SCHEMA:
    case SIEGERT_ERR_ARGUMENT:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Siegert pole solver for periodic dielectric arrays"};
  app.set_version_flag("--version", std::string(siegert_version()));
  std::string command, config, out;
  int threads = 0;
  app.add_option("command", command, "poles | modes | scatter | sweep-h | amplify | decay")
      ->required()
      ->check(CLI::IsMember({"poles", "modes", "scatter", "sweep-h", "amplify", "decay"}));
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out, "results directory (must not exist or be empty)");
  app.add_option("--threads", threads, "OpenMP threads (default: numerics.threads)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ifstream in(config, std::ios::binary);
  if (!in) {
    std::cerr << R"({"error":"IoError","message":"cannot read config file"})" << '\n';
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();

  const siegert_status st = siegert_run(command.c_str(), text.str().c_str(),
                                        out.empty() ? nullptr : out.c_str(), threads);
  if (st != SIEGERT_OK) std::cerr << siegert_last_error() << '\n';
  return exit_code(st);
}
