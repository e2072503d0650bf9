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

/* C interface to the siegert library. All functions return a status code;
 * on failure siegert_last_error() describes the problem as a JSON object
 * (thread local, valid until the next call on the same thread). */
#ifndef SIEGERT_H_
#define SIEGERT_H_

#include <stddef.h>

#if defined(SIEGERT_BUILDING_LIBRARY)
#define SIEGERT_API __attribute__((visibility("default")))
#else
#define SIEGERT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SIEGERT_OK = 0,
  SIEGERT_ERR_ARGUMENT = 1,
  SIEGERT_ERR_SCHEMA = 2,
  SIEGERT_ERR_NUMERICAL = 3,
  SIEGERT_ERR_IO = 4,
  SIEGERT_ERR_INTERNAL = 5
} siegert_status;

typedef struct siegert_structure siegert_structure;
typedef struct siegert_pole_set siegert_pole_set;

SIEGERT_API const char* siegert_version(void);
SIEGERT_API const char* siegert_last_error(void);

/* Structure from a config document; uses its "structure" block and h. */
SIEGERT_API siegert_status siegert_structure_from_json(const char* config_json,
                                                       siegert_structure** out);
SIEGERT_API void siegert_structure_free(siegert_structure* s);

/* Quasi-periodic kernel H(kappa; x, z) = (i kappa / 4) sum_m exp(i m kx) H0(k |r - m e_x|)
 * via its plane-wave series; needs z != 0. */
SIEGERT_API siegert_status siegert_green(double kappa_re, double kappa_im, double kx, double x,
                                         double z, double* out_re, double* out_im);

/* Pole search in [re_lo, re_hi] x [im_lo, im_hi] at Bloch number kx. */
SIEGERT_API siegert_status siegert_find_poles(const siegert_structure* s, double kx, double re_lo,
                                              double re_hi, double im_lo, double im_hi, int order,
                                              siegert_pole_set** out);
SIEGERT_API size_t siegert_pole_count(const siegert_pole_set* set);
SIEGERT_API siegert_status siegert_pole_get(const siegert_pole_set* set, size_t index,
                                            double* kappa_re, double* kappa_im, double* residual);
SIEGERT_API void siegert_pole_set_free(siegert_pole_set* set);

/* Plane-wave transmittance and reflectance at wavenumber k (k > |kx|). */
SIEGERT_API siegert_status siegert_transmission(const siegert_structure* s, double k, double kx,
                                                int order, double* T, double* R);

/* Runs a CLI command into out_dir. threads <= 0 uses the config value.
 * Returns SIEGERT_ERR_SCHEMA for schema/argument problems. */
SIEGERT_API siegert_status siegert_run(const char* command, const char* config_json,
                                       const char* out_dir, int threads);

#ifdef __cplusplus
}
#endif

#endif /* SIEGERT_H_ */
