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

// Run configuration: JSON schema, defaults and validation.

#include <optional>
#include <string>

#include "siegert/structure.hpp"

namespace siegert {

struct SearchSpec {
  double re_lo = 0.5, re_hi = 39.0, im_lo = -3.0, im_hi = -1e-3;
  int nx = 24, ny = 8;
  double promote = 0.25;
};

struct KGrid {
  double start = 1.0, stop = 6.0;
  int count = 200;
};

struct ModesGrid {
  double x_lo = 0.0, x_hi = 1.0;
  int nx = 41;
  double z_lo = -1.0, z_hi = 1.0;
  int nz = 81;
  int pole_index = 0;
};

struct HSweep {
  double start = 0.0, stop = 0.0, step = 0.01;
  double guess_re = 0.0, guess_im = 0.0;
  bool present = false;
};

struct PacketSpec {
  std::optional<double> k_c;    // default: k_tilde of the pole
  std::optional<double> sigma;  // default: sqrt(Gamma) / 2
  double c = 1.0;
  double guess_re = 0.0, guess_im = 0.0;
  bool present = false;
  double a_tilde_re = 1.0, a_tilde_im = 0.0;
  std::optional<double> t_stop;  // default: 2 t_max
  int t_count = 401;
};

struct RunSpec {
  StructureSpec structure;
  double h = 0.0;
  double kx = 0.0;
  SearchSpec search;
  KGrid k_grid;
  ModesGrid modes;
  HSweep h_sweep;
  PacketSpec packet;
  int order = 8;
  int amplitude_orders = 2;  // |m| range reported for S+/-_m
  double tol = 1e-10;
  double bic_tol = 1e-6;
  int threads = 1;
  std::string output_directory = "results";
};

// Throws SchemaError carrying the JSON path of the offending key.
RunSpec parse_config(const std::string& text);

// Normalized JSON (all defaults filled, fixed key order).
std::string serialize_config(const RunSpec& spec);

}  // namespace siegert
