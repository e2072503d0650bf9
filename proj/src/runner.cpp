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

#include "siegert/runner.hpp"

#include <omp.h>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "siegert/continuation.hpp"
#include "siegert/error.hpp"
#include "siegert/scattering.hpp"
#include "siegert/wavepacket.hpp"

namespace siegert {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

const char* const kCommands[] = {"poles", "modes", "scatter", "sweep-h", "amplify", "decay"};

// Poles below this Gamma are rejected as unphysical (upper half plane).
constexpr double kGammaFloor = -1e-10;
constexpr double kResidualCap = 1e-8;

// Dense one-sided branch used for limits at a BIC.
constexpr double kDenseOffset = 1e-3;
constexpr double kDenseSpan = 0.06;
constexpr double kDenseStep = 0.002;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }
  void row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      if (!first) text_ += ',';
      text_ += num(v);
      first = false;
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(std::size_t(std::max(n, 1)), a);
  for (int i = 1; i < n; ++i) v[std::size_t(i)] = a + (b - a) * i / (n - 1);
  return v;
}

class Context {
 public:
  Context(const RunSpec& spec, fs::path dir) : spec(spec), dir_(std::move(dir)) {}

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = Clock::now();
    struct Record {
      Context* c;
      std::string n;
      Clock::time_point t0;
      ~Record() { c->timings_.push_back({{"stage", n}, {"seconds", seconds_since(t0)}}); }
    } rec{this, name, t0};
    return f();
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    files_.push_back({{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    names_.push_back(name);
  }

  void warn(std::string w) { warnings_.push_back(std::move(w)); }

  static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  const RunSpec& spec;
  json summary = json::object();

  json manifest(const std::string& command, const std::string& config_text, int threads,
                double wall) const {
    json m;
    m["tool"] = "siegert";
    m["version"] = kVersion;
    m["command"] = command;
    m["input_sha256"] = sha256_hex(config_text);
    m["threads"] = threads;
    m["wall_seconds"] = wall;
    m["timings"] = timings_;
    m["warnings"] = warnings_;
    m["files"] = files_;
    m["summary"] = summary;
    return m;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  json timings_ = json::array();
  json files_ = json::array();
  std::vector<std::string> warnings_;
  std::vector<std::string> names_;
};

RefineOptions refine_opts(const RunSpec& rs) {
  RefineOptions o;
  o.tol = rs.tol;
  return o;
}

json pole_json(const SiegertPole& p, int m_max) {
  json j;
  j["re_kappa"] = p.kappa.real();
  j["im_kappa"] = p.kappa.imag();
  j["gamma"] = p.gamma();
  j["residual"] = p.residual;
  j["lambda0"] = cjson(p.lambda0);
  j["d_lambda_d_kappa"] = cjson(p.d_lambda_d_kappa);
  j["gap"] = p.gap;
  j["flux_width"] = width_from_flux(p, default_flux_box(p));
  json amps = json::array();
  for (const auto& [m, ud] : far_field_amplitudes(p, -m_max, m_max))
    amps.push_back({{"m", m}, {"up", cjson(ud.first)}, {"down", cjson(ud.second)}});
  j["amplitudes"] = amps;
  return j;
}

json poles_document(const RunSpec& rs, const PoleSearch& ps) {
  json doc;
  doc["h"] = rs.h;
  doc["kx"] = rs.kx;
  json arr = json::array();
  for (const auto& p : ps.poles) arr.push_back(pole_json(p, rs.amplitude_orders));
  doc["poles"] = arr;
  json sk = json::array();
  for (const auto& s : ps.skipped)
    sk.push_back({{"re_kappa", s.guess.real()}, {"im_kappa", s.guess.imag()}, {"reason", s.reason}});
  doc["skipped"] = sk;
  return doc;
}

void cmd_poles(Context& c, bool modes) {
  const RunSpec& rs = c.spec;
  const PoleSearch ps = c.stage("search", [&] {
    return find_poles(rs.structure, rs.h, rs.kx, rs.search, rs.order, rs.tol);
  });
  for (const auto& s : ps.skipped)
    c.warn("skipped candidate (" + num(s.guess.real()) + ", " + num(s.guess.imag()) + "): " + s.reason);
  c.stage("poles.json", [&] { c.write("poles.json", poles_document(rs, ps).dump(2) + "\n"); });
  c.summary["pole_count"] = ps.poles.size();
  if (!modes) return;

  const ModesGrid& g = rs.modes;
  if (g.pole_index >= int(ps.poles.size()))
    throw Error(ErrorCode::OutOfRange, "modes_grid.pole_index " + std::to_string(g.pole_index) +
                                           " but " + std::to_string(ps.poles.size()) + " poles found");
  const SiegertPole& pole = ps.poles[std::size_t(g.pole_index)];
  const auto xs = linspace(g.x_lo, g.x_hi, g.nx);
  const auto zs = linspace(g.z_lo, g.z_hi, g.nz);
  std::vector<cplx> vals(xs.size() * zs.size());
  c.stage("modes", [&] {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(vals.size()); ++k) {
      const std::size_t iz = std::size_t(k) / xs.size(), ix = std::size_t(k) % xs.size();
      vals[std::size_t(k)] = eval_siegert_field(pole, xs[ix], zs[iz]);
    }
  });
  Csv csv({"x", "z", "re_E", "im_E"});
  for (std::size_t iz = 0; iz < zs.size(); ++iz)
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const cplx v = vals[iz * xs.size() + ix];
      csv.row({xs[ix], zs[iz], v.real(), v.imag()});
    }
  c.write("modes.csv", csv.text());
  c.summary["mode_kappa"] = cjson(pole.kappa);
}

void cmd_scatter(Context& c) {
  const RunSpec& rs = c.spec;
  const auto ks = linspace(rs.k_grid.start, rs.k_grid.stop, rs.k_grid.count);
  const auto q = quadrature_at(rs.structure, rs.h, rs.order);
  const auto rows = c.stage("spectrum", [&] { return spectrum(rs.structure, rs.h, ks, rs.kx, q); });
  Csv csv({"k", "kappa", "T", "R", "flux_deficit"});
  double worst = 0.0;
  int failed = 0;
  for (const auto& r : rows) {
    if (!r.ok) {
      c.warn("k = " + num(r.k) + ": " + r.error);
      ++failed;
      continue;
    }
    csv.row({r.k, r.kappa, r.T, r.R, r.flux_deficit});
    worst = std::max(worst, r.flux_deficit);
  }
  c.write("spectrum.csv", csv.text());
  c.summary["rows"] = rows.size() - std::size_t(failed);
  c.summary["failed_rows"] = failed;
  c.summary["max_flux_deficit"] = worst;
}

struct Sweep {
  ContinuationBranch branch;
  std::optional<BicRecord> bic;
  ContinuationBranch dense;  // one-sided samples next to h_b
};

Sweep run_sweep(Context& c) {
  const RunSpec& rs = c.spec;
  if (!rs.h_sweep.present) throw Error(ErrorCode::InvalidArgument, "physics.h_sweep is required");
  if (rs.structure.coupling != Coupling::DoubleArray)
    throw Error(ErrorCode::InvalidArgument, "h sweeps need coupling = double_array");
  const HSweep& hs = rs.h_sweep;
  const RefineOptions ro = refine_opts(rs);
  Sweep out;
  out.branch = c.stage("continuation", [&] {
    const auto start = refine_pole(rs.structure, hs.start, rs.kx, {hs.guess_re, hs.guess_im},
                                   quadrature_at(rs.structure, hs.start, rs.order), ro);
    ContinuationOptions co;
    co.step0 = hs.step;
    co.refine = ro;
    return continue_pole(rs.structure, start, hs.stop, co);
  });
  if (out.branch.halvings > 0)
    c.warn("continuation halved its step " + std::to_string(out.branch.halvings) +
           " times (smallest " + num(out.branch.smallest_step) + ")");
  try {
    out.bic = c.stage("bic", [&] { return detect_bic(rs.structure, out.branch, rs.bic_tol, ro); });
  } catch (const Error& e) {
    c.warn(std::string("BIC search: ") + error_name(e.code()) + ": " + e.what());
  }
  if (!out.bic) return out;

  const double hb = out.bic->h_b;
  const double dir = rs.structure.in_range(hb + kDenseOffset + kDenseSpan) ? 1.0 : -1.0;
  const double h0 = hb + dir * kDenseOffset;
  const double h1 = std::clamp(hb + dir * kDenseSpan, rs.structure.h_min, rs.structure.h_max);
  try {
    out.dense = c.stage("dense_branch", [&] {
      const auto p0 = refine_pole(rs.structure, h0, rs.kx, out.bic->kappa_b,
                                  quadrature_at(rs.structure, h0, rs.order), ro);
      ContinuationOptions co;
      co.step0 = kDenseStep;
      co.refine = ro;
      return continue_pole(rs.structure, p0, h1, co);
    });
    c.stage("limits", [&] {
      limit_amplitudes(out.dense, *out.bic, std::max(rs.amplitude_orders, 0));
      return 0;
    });
  } catch (const Error& e) {
    c.warn(std::string("limit amplitudes: ") + error_name(e.code()) + ": " + e.what());
  }
  return out;
}

json bic_document(const RunSpec& rs, const Sweep& sw) {
  const BicRecord& b = *sw.bic;
  json j;
  j["h_b"] = b.h_b;
  j["kappa_b"] = b.kappa_b;
  j["gamma_b"] = b.gamma_b;
  j["interval_index"] = b.interval_index;
  j["strip_norm_sq"] = strip_norm_sq(b.state);
  json lim = json::array();
  for (const auto& [m, v] : b.limit_amplitudes)
    lim.push_back({{"m", m}, {"s_plus", cjson(v.first)}, {"s_minus", cjson(v.second)}});
  j["limit_amplitudes"] = lim;
  if (auto it = b.limit_amplitudes.find(0); it != b.limit_amplitudes.end())
    j["normal_channel_check"] =
        std::norm(it->second.first) * 2.0 * std::sqrt(b.kappa_b - rs.kx * rs.kx);
  if (!sw.dense.samples.empty()) {
    std::vector<double> g, a;
    for (const auto& r : amplitude_scaling(sw.dense, b))
      if (r.gamma >= 1e-6 && r.gamma <= 1e-2) {
        g.push_back(r.gamma);
        a.push_back(std::abs(r.a_n));
      }
    if (g.size() >= 2) j["amplitude_exponent"] = loglog_slope(g, a);
  }
  return j;
}

void cmd_sweep(Context& c) {
  const RunSpec& rs = c.spec;
  const Sweep sw = run_sweep(c);
  Csv csv({"h", "re_kappa", "im_kappa", "gamma", "a_n_re", "a_n_im", "field_norm"});
  for (const auto& smp : sw.branch.samples) {
    SiegertPole p = smp.pole;
    if (sw.bic) {
      try {
        p = normalize_near_bic(smp.pole, sw.bic->state);
      } catch (const Error&) {
        // keep the max-abs normalization
      }
    }
    const cplx a = residue_amplitude(p).a_n;
    csv.row({smp.h, p.kappa.real(), p.kappa.imag(), p.gamma(), a.real(), a.imag(),
             std::sqrt(strip_norm_sq(p))});
  }
  c.write("branch.csv", csv.text());
  c.summary["samples"] = sw.branch.samples.size();
  c.summary["bic_found"] = bool(sw.bic);
  if (sw.bic) c.write("bic.json", bic_document(rs, sw).dump(2) + "\n");
}

void cmd_amplify(Context& c) {
  const RunSpec& rs = c.spec;
  const Sweep sw = run_sweep(c);
  if (!sw.bic) throw Error(ErrorCode::NoMinimum, "no BIC on the swept branch");
  if (sw.dense.samples.empty()) throw Error(ErrorCode::BranchLost, "dense branch next to the BIC failed");
  const auto rows = c.stage("amplification", [&] { return amplification_curve(rs.structure, sw.dense); });
  Csv csv({"h", "gamma", "k_drive", "near_norm", "far_norm"});
  std::vector<double> g, n, f;
  for (const auto& r : rows) {
    csv.row({r.h, r.gamma, r.k_drive, r.near_norm, r.far_norm});
    if (r.gamma >= 1e-6 && r.gamma <= 1e-2) {
      g.push_back(r.gamma);
      n.push_back(r.near_norm);
      f.push_back(r.far_norm);
    }
  }
  c.write("amplify.csv", csv.text());
  c.write("bic.json", bic_document(rs, sw).dump(2) + "\n");
  if (g.size() >= 2) {
    c.summary["near_slope"] = loglog_slope(g, n);
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    c.summary["far_ratio"] = *hi / *lo;
  }
}

void cmd_decay(Context& c) {
  const RunSpec& rs = c.spec;
  if (!rs.packet.present) throw Error(ErrorCode::InvalidArgument, "physics.packet is required");
  const PacketSpec& ps = rs.packet;
  const auto pole = c.stage("refine", [&] {
    return refine_pole(rs.structure, rs.h, rs.kx, {ps.guess_re, ps.guess_im},
                       quadrature_at(rs.structure, rs.h, rs.order), refine_opts(rs));
  });
  const cplx kappa = pole.kappa;
  const auto dc = decay_constants(kappa, ps.c);
  WavePacket w;
  w.c = ps.c;
  w.k_c = ps.k_c.value_or(dc.k_tilde);
  if (ps.sigma) {
    w.sigma = *ps.sigma;
  } else {
    if (!(pole.gamma() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "packet.sigma is required when Gamma <= 0");
    w.sigma = std::sqrt(pole.gamma()) / 2.0;
  }
  const auto win = observation_window(kappa, w);
  const double t0 = 3.0 / (w.c * w.k_c);
  const double t1 = ps.t_stop.value_or(2.0 * win.t_max);
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "packet.t_stop must exceed 3/(c k_c)");
  const auto ts = linspace(t0, t1, ps.t_count);
  const cplx at{ps.a_tilde_re, ps.a_tilde_im};
  const auto od = c.stage("direct", [&] { return omega_direct(kappa, at, w, ts); });
  const auto orr = c.stage("residue", [&] { return omega_residue(kappa, at, w, ts); });
  Csv csv({"t", "re_omega_direct", "im_omega_direct", "re_omega_residue", "im_omega_residue",
           "envelope_direct"});
  std::vector<double> env(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    env[i] = std::abs(od[i]);
    csv.row({ts[i], od[i].real(), od[i].imag(), orr[i].real(), orr[i].imag(), env[i]});
  }
  c.write("decay.csv", csv.text());

  json s;
  s["kappa"] = cjson(kappa);
  s["k_tilde"] = dc.k_tilde;
  s["tau"] = dc.tau;
  s["k_c"] = w.k_c;
  s["sigma"] = w.sigma;
  s["t_max"] = win.t_max;
  s["sigma_ok"] = win.sigma_ok;
  s["half_life_expected"] = std::log(2.0) * dc.tau;
  const std::size_t ip = std::size_t(std::max_element(env.begin(), env.end()) - env.begin());
  try {
    s["half_life_fit"] = extract_half_life(ts, env, ts[ip], 0.8 * win.t_max);
  } catch (const Error& e) {
    c.warn(std::string("half-life fit: ") + e.what());
  }
  if (!win.sigma_ok) c.warn("half-life does not fit inside the observation window");
  c.write("decay.json", s.dump(2) + "\n");
}

}  // namespace

bool known_command(const std::string& command) {
  return std::find(std::begin(kCommands), std::end(kCommands), command) != std::end(kCommands);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

PoleSearch find_poles(const StructureSpec& s, double h, double kx, const SearchSpec& search,
                      int order, double tol) {
  PoleSearch out;
  if (s.empty()) return out;
  const auto q = quadrature_at(s, h, order);
  const Region region{search.re_lo, search.re_hi, search.im_lo, search.im_hi};
  const auto cands = scan_poles(s, h, kx, region, search.nx, search.ny, q, search.promote);
  RefineOptions ro;
  ro.tol = tol;
  // A refined pole may drift by about one scan cell.
  const double mx = (search.re_hi - search.re_lo) / search.nx;
  const double my = (search.im_hi - search.im_lo) / search.ny;
  std::vector<std::optional<SiegertPole>> got(cands.size());
  std::vector<std::string> why(cands.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(cands.size()); ++i) {
    const std::size_t k = std::size_t(i);
    try {
      auto p = refine_pole(s, h, kx, cands[k].kappa, q, ro);
      const cplx z = p.kappa;
      if (p.gamma() < kGammaFloor)
        why[k] = "Gamma below zero";
      else if (!(p.residual <= kResidualCap))
        why[k] = "residual " + num(p.residual);
      else if (z.real() < search.re_lo - mx || z.real() > search.re_hi + mx ||
               z.imag() < search.im_lo - my || z.imag() > search.im_hi + my)
        why[k] = "left the search rectangle";
      else
        got[k] = std::move(p);
    } catch (const Error& e) {
      why[k] = std::string(error_name(e.code())) + ": " + e.what();
    }
  }
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (got[k])
      out.poles.push_back(std::move(*got[k]));
    else
      out.skipped.push_back({cands[k].kappa, why[k]});
  }
  std::stable_sort(out.poles.begin(), out.poles.end(), [](const auto& a, const auto& b) {
    return a.kappa.real() < b.kappa.real();
  });
  std::vector<SiegertPole> uniq;
  for (auto& p : out.poles) {
    bool dup = false;
    for (const auto& u : uniq)
      if (std::abs(u.kappa - p.kappa) <= 1e-6 * (1.0 + std::abs(p.kappa))) dup = true;
    if (!dup) uniq.push_back(std::move(p));
  }
  out.poles = std::move(uniq);
  return out;
}

RunOutcome run_command(const std::string& command, const RunSpec& spec,
                       const std::string& config_text, const std::string& out_dir, int threads) {
  RunOutcome res;
  auto fail = [&](int code, const std::string& kind, const std::string& msg, const std::string& path) {
    json e{{"error", kind}, {"message", msg}, {"command", command}};
    if (!path.empty()) e["path"] = path;
    res.exit_code = code;
    res.error_json = e.dump();
    return res;
  };
  if (!known_command(command)) return fail(2, "InvalidArgument", "unknown command '" + command + "'", "");
  const int nthreads = threads > 0 ? threads : spec.threads;
  const fs::path dir(out_dir.empty() ? spec.output_directory : out_dir);
  try {
    std::error_code ec;
    if (fs::exists(dir, ec) && !fs::is_empty(dir, ec))
      throw Error(ErrorCode::IoError, "output directory " + dir.string() + " exists and is not empty");
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    omp_set_num_threads(nthreads);
    const auto t0 = Clock::now();
    Context c(spec, dir);
    if (command == "poles" || command == "modes")
      cmd_poles(c, command == "modes");
    else if (command == "scatter")
      cmd_scatter(c);
    else if (command == "sweep-h")
      cmd_sweep(c);
    else if (command == "amplify")
      cmd_amplify(c);
    else
      cmd_decay(c);
    const json m = c.manifest(command, config_text, nthreads, Context::seconds_since(t0));
    c.write("manifest.json", m.dump(2) + "\n");
    res.files = c.names();
    return res;
  } catch (const SchemaError& e) {
    return fail(2, "SchemaError", e.what(), e.path());
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::InvalidArgument ? 2 : 3;
    return fail(code, error_name(e.code()), e.what(), "");
  } catch (const std::exception& e) {
    return fail(3, "Internal", e.what(), "");
  }
}

RunOutcome run_command(const std::string& command, const std::string& config_text,
                       const std::string& out_dir, int threads) {
  try {
    const RunSpec spec = parse_config(config_text);
    return run_command(command, spec, config_text, out_dir, threads);
  } catch (const SchemaError& e) {
    RunOutcome r;
    r.exit_code = 2;
    r.error_json = json{{"error", "SchemaError"}, {"message", e.what()}, {"path", e.path()},
                        {"command", command}}
                       .dump();
    return r;
  }
}

}  // namespace siegert
