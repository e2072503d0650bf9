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

#include "siegert/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "siegert/error.hpp"

namespace siegert {
namespace {

using json = nlohmann::json;

// Typed access to a JSON object that remembers its path and rejects unknown
// keys.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  std::string sub(const std::string& key) const { return path_ + "." + key; }
  Node object(const std::string& key) {
    seen_.insert(key);
    return Node(j_.at(key), sub(key));
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double def) {
    if (!has(key)) return def;
    return as_number(j_.at(key), sub(key));
  }
  double number(const std::string& key) {
    if (!has(key)) throw SchemaError(sub(key), "required number is missing");
    return as_number(j_.at(key), sub(key));
  }
  int integer(const std::string& key, int def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw SchemaError(sub(key), "expected an integer");
    return v.get<int>();
  }
  std::string string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) throw SchemaError(sub(key), "expected a string");
    return v.get<std::string>();
  }
  std::pair<double, double> pair(const std::string& key, std::pair<double, double> def) {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2) throw SchemaError(sub(key), "expected [a, b]");
    return {as_number(v[0], sub(key) + "[0]"), as_number(v[1], sub(key) + "[1]")};
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw SchemaError(sub(it.key()), "unknown key");
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
    return x;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Inclusion parse_inclusion(const json& j, const std::string& path) {
  Node n(j, path);
  Inclusion inc;
  const std::string shape = n.string("shape", "disk");
  const auto c = n.pair("center", {0.5, 0.0});
  inc.cx = c.first;
  inc.cz = c.second;
  inc.eps = n.number("eps");
  if (!(inc.eps >= 1.0)) throw SchemaError(n.sub("eps"), "eps must be >= 1");
  if (shape == "disk") {
    inc.shape = Shape::Disk;
    inc.radius = n.number("radius");
    if (!(inc.radius > 0.0 && 2.0 * inc.radius < 1.0))
      throw SchemaError(n.sub("radius"), "radius must satisfy 0 < 2r < 1");
  } else if (shape == "rect") {
    inc.shape = Shape::Rect;
    inc.width = n.number("width");
    inc.height = n.number("height");
    if (!(inc.width > 0.0 && inc.width <= 1.0)) throw SchemaError(n.sub("width"), "need 0 < width <= 1");
    if (!(inc.height > 0.0)) throw SchemaError(n.sub("height"), "need height > 0");
  } else {
    throw SchemaError(n.sub("shape"), "expected \"disk\" or \"rect\"");
  }
  n.finish();
  return inc;
}

std::vector<Inclusion> parse_list(Node& parent, const std::string& key) {
  std::vector<Inclusion> out;
  if (!parent.has(key)) return out;
  const json& arr = parent.raw(key);
  if (!arr.is_array()) throw SchemaError(parent.sub(key), "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_inclusion(arr[i], parent.sub(key) + "[" + std::to_string(i) + "]"));
  return out;
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw SchemaError(path, "must be > 0");
}

json inclusion_json(const Inclusion& inc) {
  json j;
  j["shape"] = inc.shape == Shape::Disk ? "disk" : "rect";
  j["center"] = {inc.cx, inc.cz};
  if (inc.shape == Shape::Disk) {
    j["radius"] = inc.radius;
  } else {
    j["width"] = inc.width;
    j["height"] = inc.height;
  }
  j["eps"] = inc.eps;
  return j;
}

json list_json(const std::vector<Inclusion>& v) {
  json a = json::array();
  for (const auto& inc : v) a.push_back(inclusion_json(inc));
  return a;
}

}  // namespace

RunSpec parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  RunSpec rs;
  Node top(root, "$");

  // structure
  if (!top.has("structure")) throw SchemaError("$.structure", "required object is missing");
  {
    Node st = top.object("structure");
    const std::string coupling = st.string("coupling", "none");
    StructureSpec& s = rs.structure;
    if (coupling == "none") {
      s.coupling = Coupling::None;
      s.inclusions = parse_list(st, "inclusions");
      rs.h = st.number("h", 0.0);
      if (st.has("h_range")) st.pair("h_range", {0.0, 0.0});  // accepted, unused
    } else if (coupling == "double_array") {
      s.coupling = Coupling::DoubleArray;
      s.upper = parse_list(st, "upper");
      s.lower = st.has("lower") ? parse_list(st, "lower") : s.upper;
      if (s.upper.empty()) throw SchemaError(st.sub("upper"), "double array needs inclusions");
      if (!st.has("h_range")) throw SchemaError(st.sub("h_range"), "required for double_array");
      const auto r = st.pair("h_range", {0.0, 0.0});
      s.h_min = r.first;
      s.h_max = r.second;
      // Coupling interval: the two arrays must stay disjoint.
      double up_lo = HUGE_VAL, low_hi = -HUGE_VAL;
      for (const auto& inc : s.upper) up_lo = std::min(up_lo, inc.zmin());
      for (const auto& inc : s.lower) low_hi = std::max(low_hi, inc.zmax());
      const double h_geo = std::max(0.0, 0.5 * (low_hi - up_lo));
      if (!(s.h_min > h_geo) || !(s.h_max > s.h_min))
        throw SchemaError(st.sub("h_range"),
                          "must satisfy " + std::to_string(h_geo) + " < h_min < h_max (arrays disjoint)");
      rs.h = st.number("h", 0.5 * (s.h_min + s.h_max));
      if (!s.in_range(rs.h)) throw SchemaError(st.sub("h"), "outside h_range");
      if (st.has("inclusions")) throw SchemaError(st.sub("inclusions"), "use upper/lower for double_array");
    } else {
      throw SchemaError(st.sub("coupling"), "expected \"none\" or \"double_array\"");
    }
    st.finish();
  }

  // physics
  if (top.has("physics")) {
    Node ph = top.object("physics");
    rs.kx = ph.number("kx", 0.0);
    if (ph.has("search")) {
      Node se = ph.object("search");
      auto re = se.pair("re", {rs.search.re_lo, rs.search.re_hi});
      auto im = se.pair("im", {rs.search.im_lo, rs.search.im_hi});
      rs.search.re_lo = re.first;
      rs.search.re_hi = re.second;
      rs.search.im_lo = im.first;
      rs.search.im_hi = im.second;
      if (se.has("grid")) {
        const json& g = se.raw("grid");
        if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer())
          throw SchemaError(se.sub("grid"), "expected [nx, ny] integers");
        rs.search.nx = g[0].get<int>();
        rs.search.ny = g[1].get<int>();
      }
      rs.search.promote = se.number("promote", rs.search.promote);
      if (!(re.first < re.second)) throw SchemaError(se.sub("re"), "need lo < hi");
      if (!(im.first < im.second)) throw SchemaError(se.sub("im"), "need lo < hi");
      if (rs.search.nx < 3 || rs.search.ny < 3) throw SchemaError(se.sub("grid"), "need nx, ny >= 3");
      require_positive(rs.search.promote, se.sub("promote"));
      se.finish();
    }
    if (ph.has("k_grid")) {
      Node kg = ph.object("k_grid");
      rs.k_grid.start = kg.number("start", rs.k_grid.start);
      rs.k_grid.stop = kg.number("stop", rs.k_grid.stop);
      rs.k_grid.count = kg.integer("count", rs.k_grid.count);
      require_positive(rs.k_grid.start, kg.sub("start"));
      if (!(rs.k_grid.stop > rs.k_grid.start)) throw SchemaError(kg.sub("stop"), "need stop > start");
      if (rs.k_grid.count < 2) throw SchemaError(kg.sub("count"), "need count >= 2");
      kg.finish();
    }
    if (ph.has("modes_grid")) {
      Node mg = ph.object("modes_grid");
      auto x = mg.pair("x", {rs.modes.x_lo, rs.modes.x_hi});
      auto z = mg.pair("z", {rs.modes.z_lo, rs.modes.z_hi});
      rs.modes.x_lo = x.first;
      rs.modes.x_hi = x.second;
      rs.modes.z_lo = z.first;
      rs.modes.z_hi = z.second;
      rs.modes.nx = mg.integer("nx", rs.modes.nx);
      rs.modes.nz = mg.integer("nz", rs.modes.nz);
      rs.modes.pole_index = mg.integer("pole_index", 0);
      if (rs.modes.nx < 1 || rs.modes.nz < 1) throw SchemaError(mg.sub("nx"), "need nx, nz >= 1");
      if (rs.modes.pole_index < 0) throw SchemaError(mg.sub("pole_index"), "must be >= 0");
      mg.finish();
    }
    if (ph.has("h_sweep")) {
      Node hs = ph.object("h_sweep");
      rs.h_sweep.present = true;
      rs.h_sweep.start = hs.number("start");
      rs.h_sweep.stop = hs.number("stop");
      rs.h_sweep.step = hs.number("step", rs.h_sweep.step);
      const auto g = hs.pair("guess", {0.0, 0.0});
      if (!hs.has("guess")) throw SchemaError(hs.sub("guess"), "required [re, im] pole guess");
      rs.h_sweep.guess_re = g.first;
      rs.h_sweep.guess_im = g.second;
      require_positive(rs.h_sweep.step, hs.sub("step"));
      if (!rs.structure.in_range(rs.h_sweep.start)) throw SchemaError(hs.sub("start"), "outside h_range");
      if (!rs.structure.in_range(rs.h_sweep.stop)) throw SchemaError(hs.sub("stop"), "outside h_range");
      hs.finish();
    }
    if (ph.has("packet")) {
      Node pk = ph.object("packet");
      PacketSpec& p = rs.packet;
      p.present = true;
      if (pk.has("k_c")) p.k_c = pk.number("k_c");
      if (pk.has("sigma")) p.sigma = pk.number("sigma");
      p.c = pk.number("c", 1.0);
      if (!pk.has("guess")) throw SchemaError(pk.sub("guess"), "required [re, im] pole guess");
      const auto g = pk.pair("guess", {0.0, 0.0});
      p.guess_re = g.first;
      p.guess_im = g.second;
      const auto a = pk.pair("a_tilde", {1.0, 0.0});
      p.a_tilde_re = a.first;
      p.a_tilde_im = a.second;
      if (pk.has("t_stop")) p.t_stop = pk.number("t_stop");
      p.t_count = pk.integer("t_count", p.t_count);
      if (p.k_c) require_positive(*p.k_c, pk.sub("k_c"));
      if (p.sigma) require_positive(*p.sigma, pk.sub("sigma"));
      require_positive(p.c, pk.sub("c"));
      if (p.t_stop) require_positive(*p.t_stop, pk.sub("t_stop"));
      if (p.t_count < 2) throw SchemaError(pk.sub("t_count"), "need t_count >= 2");
      pk.finish();
    }
    ph.finish();
  }

  // numerics
  if (top.has("numerics")) {
    Node nu = top.object("numerics");
    rs.order = nu.integer("order", rs.order);
    rs.amplitude_orders = nu.integer("amplitude_orders", rs.amplitude_orders);
    rs.tol = nu.number("tol", rs.tol);
    rs.bic_tol = nu.number("bic_tol", rs.bic_tol);
    rs.threads = nu.integer("threads", rs.threads);
    if (rs.order < 2 || rs.order > 40) throw SchemaError(nu.sub("order"), "need 2 <= order <= 40");
    if (rs.amplitude_orders < 0) throw SchemaError(nu.sub("amplitude_orders"), "must be >= 0");
    require_positive(rs.tol, nu.sub("tol"));
    require_positive(rs.bic_tol, nu.sub("bic_tol"));
    if (rs.threads < 1) throw SchemaError(nu.sub("threads"), "must be >= 1");
    nu.finish();
  }

  if (top.has("output")) {
    Node out = top.object("output");
    rs.output_directory = out.string("directory", rs.output_directory);
    if (rs.output_directory.empty()) throw SchemaError(out.sub("directory"), "must not be empty");
    out.finish();
  }
  top.finish();
  return rs;
}

std::string serialize_config(const RunSpec& rs) {
  json j;
  const StructureSpec& s = rs.structure;
  json st;
  if (s.coupling == Coupling::None) {
    st["coupling"] = "none";
    st["inclusions"] = list_json(s.inclusions);
    st["h"] = rs.h;
  } else {
    st["coupling"] = "double_array";
    st["upper"] = list_json(s.upper);
    st["lower"] = list_json(s.lower);
    st["h_range"] = {s.h_min, s.h_max};
    st["h"] = rs.h;
  }
  j["structure"] = st;

  json ph;
  ph["kx"] = rs.kx;
  ph["search"] = {{"re", {rs.search.re_lo, rs.search.re_hi}},
                  {"im", {rs.search.im_lo, rs.search.im_hi}},
                  {"grid", {rs.search.nx, rs.search.ny}},
                  {"promote", rs.search.promote}};
  ph["k_grid"] = {{"start", rs.k_grid.start}, {"stop", rs.k_grid.stop}, {"count", rs.k_grid.count}};
  ph["modes_grid"] = {{"x", {rs.modes.x_lo, rs.modes.x_hi}}, {"nx", rs.modes.nx},
                      {"z", {rs.modes.z_lo, rs.modes.z_hi}}, {"nz", rs.modes.nz},
                      {"pole_index", rs.modes.pole_index}};
  if (rs.h_sweep.present)
    ph["h_sweep"] = {{"start", rs.h_sweep.start}, {"stop", rs.h_sweep.stop},
                     {"step", rs.h_sweep.step}, {"guess", {rs.h_sweep.guess_re, rs.h_sweep.guess_im}}};
  if (rs.packet.present) {
    json pk = {{"c", rs.packet.c},
               {"guess", {rs.packet.guess_re, rs.packet.guess_im}},
               {"a_tilde", {rs.packet.a_tilde_re, rs.packet.a_tilde_im}},
               {"t_count", rs.packet.t_count}};
    if (rs.packet.k_c) pk["k_c"] = *rs.packet.k_c;
    if (rs.packet.sigma) pk["sigma"] = *rs.packet.sigma;
    if (rs.packet.t_stop) pk["t_stop"] = *rs.packet.t_stop;
    ph["packet"] = pk;
  }
  j["physics"] = ph;
  j["numerics"] = {{"order", rs.order},     {"amplitude_orders", rs.amplitude_orders},
                   {"tol", rs.tol},         {"bic_tol", rs.bic_tol},
                   {"threads", rs.threads}};
  j["output"] = {{"directory", rs.output_directory}};
  return j.dump(2);
}

}  // namespace siegert
