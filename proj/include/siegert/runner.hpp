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

#pragma once

#include <string>
#include <vector>

#include "siegert/config.hpp"
#include "siegert/siegert_solver.hpp"

namespace siegert {

inline constexpr const char* kVersion = "0.1.0";

// Commands: poles, modes, scatter, sweep-h, amplify, decay.
bool known_command(const std::string& command);

struct RunOutcome {
  int exit_code = 0;       // 0 ok, 2 schema/argument, 3 numerical or I/O failure
  std::string error_json;  // set when exit_code != 0
  std::vector<std::string> files;
};

// Runs one command into out_dir, which must not exist yet (or be empty).
// config_text is hashed into the manifest. Never throws.
RunOutcome run_command(const std::string& command, const std::string& config_text,
                       const std::string& out_dir, int threads);

// Same, with an already parsed spec. threads <= 0 uses spec.threads.
RunOutcome run_command(const std::string& command, const RunSpec& spec,
                       const std::string& config_text, const std::string& out_dir, int threads);

// Scan, refine, filter and deduplicate poles in the search rectangle.
struct PoleSearch {
  std::vector<SiegertPole> poles;  // sorted by Re kappa
  struct Skipped {
    cplx guess;
    std::string reason;
  };
  std::vector<Skipped> skipped;
};
PoleSearch find_poles(const StructureSpec& s, double h, double kx, const SearchSpec& search,
                      int order, double tol);

std::string sha256_hex(const std::string& bytes);

}  // namespace siegert
