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

#include "siegert/siegert.h"

#include <string>

#include <json.hpp>

#include "siegert/config.hpp"
#include "siegert/error.hpp"
#include "siegert/green.hpp"
#include "siegert/runner.hpp"
#include "siegert/scattering.hpp"
#include "siegert/continuation.hpp"

struct siegert_structure {
  siegert::StructureSpec spec;
  double h = 0.0;
};

struct siegert_pole_set {
  std::vector<siegert::SiegertPole> poles;
};

namespace {

thread_local std::string g_last_error;

siegert_status set_error(siegert_status st, const std::string& kind, const std::string& msg) {
  g_last_error = nlohmann::json{{"error", kind}, {"message", msg}}.dump();
  return st;
}

// Maps exceptions thrown by the core onto status codes.
template <class F>
siegert_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return SIEGERT_OK;
  } catch (const siegert::SchemaError& e) {
    g_last_error = nlohmann::json{{"error", "SchemaError"}, {"message", e.what()}, {"path", e.path()}}.dump();
    return SIEGERT_ERR_SCHEMA;
  } catch (const siegert::Error& e) {
    const siegert_status st = e.code() == siegert::ErrorCode::InvalidArgument ? SIEGERT_ERR_ARGUMENT
                              : e.code() == siegert::ErrorCode::IoError      ? SIEGERT_ERR_IO
                                                                             : SIEGERT_ERR_NUMERICAL;
    return set_error(st, siegert::error_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return set_error(SIEGERT_ERR_INTERNAL, "Internal", e.what());
  } catch (...) {
    return set_error(SIEGERT_ERR_INTERNAL, "Internal", "unknown exception");
  }
}

#define REQUIRE_ARG(cond)                                                        \
  do {                                                                           \
    if (!(cond)) return set_error(SIEGERT_ERR_ARGUMENT, "InvalidArgument", #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* siegert_version(void) { return siegert::kVersion; }

const char* siegert_last_error(void) { return g_last_error.c_str(); }

siegert_status siegert_structure_from_json(const char* config_json, siegert_structure** out) {
  REQUIRE_ARG(config_json && out);
  *out = nullptr;
  return guarded([&] {
    const auto rs = siegert::parse_config(config_json);
    *out = new siegert_structure{rs.structure, rs.h};
  });
}

void siegert_structure_free(siegert_structure* s) { delete s; }

siegert_status siegert_green(double kappa_re, double kappa_im, double kx, double x, double z,
                             double* out_re, double* out_im) {
  REQUIRE_ARG(out_re && out_im);
  return guarded([&] {
    const auto v = siegert::green_spectral({{kappa_re, kappa_im}, kx}, x, z, 1e-14).value;
    *out_re = v.real();
    *out_im = v.imag();
  });
}

siegert_status siegert_find_poles(const siegert_structure* s, double kx, double re_lo,
                                  double re_hi, double im_lo, double im_hi, int order,
                                  siegert_pole_set** out) {
  REQUIRE_ARG(s && out && order >= 2);
  *out = nullptr;
  return guarded([&] {
    siegert::SearchSpec search;
    search.re_lo = re_lo;
    search.re_hi = re_hi;
    search.im_lo = im_lo;
    search.im_hi = im_hi;
    auto ps = siegert::find_poles(s->spec, s->h, kx, search, order, 1e-10);
    *out = new siegert_pole_set{std::move(ps.poles)};
  });
}

size_t siegert_pole_count(const siegert_pole_set* set) { return set ? set->poles.size() : 0; }

siegert_status siegert_pole_get(const siegert_pole_set* set, size_t index, double* kappa_re,
                                double* kappa_im, double* residual) {
  REQUIRE_ARG(set && index < set->poles.size());
  const auto& p = set->poles[index];
  if (kappa_re) *kappa_re = p.kappa.real();
  if (kappa_im) *kappa_im = p.kappa.imag();
  if (residual) *residual = p.residual;
  return SIEGERT_OK;
}

void siegert_pole_set_free(siegert_pole_set* set) { delete set; }

siegert_status siegert_transmission(const siegert_structure* s, double k, double kx, int order,
                                    double* T, double* R) {
  REQUIRE_ARG(s && T && R && order >= 2);
  return guarded([&] {
    const auto q = siegert::quadrature_at(s->spec, s->h, order);
    const auto sol = siegert::solve_plane_wave(s->spec, s->h, k, kx, q);
    *T = sol.transmittance();
    *R = sol.reflectance();
  });
}

siegert_status siegert_run(const char* command, const char* config_json, const char* out_dir,
                           int threads) {
  REQUIRE_ARG(command && config_json);
  g_last_error.clear();
  const auto r = siegert::run_command(command, config_json, out_dir ? out_dir : "", threads);
  if (r.exit_code == 0) return SIEGERT_OK;
  g_last_error = r.error_json;
  return r.exit_code == 2 ? SIEGERT_ERR_SCHEMA : SIEGERT_ERR_NUMERICAL;
}

}  // extern "C"
