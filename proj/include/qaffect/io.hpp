// Copyright 2026 The qaffect Authors
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

// File formats: circuit, network and model-script JSON; trajectory CSV; and
// JSON views of the core value types.

#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qaffect/affect.hpp"
#include "qaffect/core.hpp"
#include "qaffect/gates.hpp"
#include "qaffect/network.hpp"
#include "qaffect/session.hpp"

namespace qaffect {

using json = nlohmann::json;

namespace detail {
template <class T>
T field(const json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

inline double number(const json& v, std::string_view where) {
  if (!v.is_number()) throw Error(std::string(where) + ": expected a number");
  return v.get<double>();
}
}  // namespace detail

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Circuit JSON: {"qubits": N, "ops": [{"gate": G, "targets": [..], "angle": a}]}

inline Circuit circuit_from_json(const json& j) {
  const auto n = detail::field<unsigned>(j, "qubits", "circuit");
  Circuit c(n);
  const json ops = j.contains("ops") ? j.at("ops") : json::array();
  if (!ops.is_array()) throw Error("circuit: 'ops' must be an array");
  for (const auto& op : ops) {
    const auto name = detail::field<std::string>(op, "gate", "circuit op");
    const auto targets =
        detail::field<std::vector<unsigned>>(op, "targets", "circuit op");
    if (is_rotation_name(name)) {
      if (!op.contains("angle")) {
        throw Error("circuit op: rotation '" + name + "' needs an angle");
      }
      c.add(rotation_gate(name, detail::number(op.at("angle"), "circuit op")),
            targets);
    } else {
      if (op.contains("angle")) {
        throw Error("circuit op: gate '" + name + "' takes no angle");
      }
      c.add(standard_gate(name), targets);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Network JSON:
// {"nodes": [{"id","label","metrics":{..},"dimensions":[..]}],
//  "arcs": [{"from","to","operator","guard","targets"}],
//  "start": id, "end": id, "register": "0"}

inline TransitionNetwork network_from_json(const json& j) {
  if (!j.is_object()) throw Error("network: expected an object");
  std::vector<NetworkNode> nodes;
  for (const auto& n : detail::field<json>(j, "nodes", "network")) {
    NetworkNode node;
    node.id = detail::field<std::string>(n, "id", "network node");
    node.label = n.value("label", node.id);
    if (n.contains("metrics")) {
      if (!n.at("metrics").is_object()) {
        throw Error("network node '" + node.id + "': metrics must be an object");
      }
      for (const auto& [k, v] : n.at("metrics").items()) {
        node.metrics[k] = detail::number(v, "network node '" + node.id + "'");
      }
    }
    if (n.contains("dimensions")) {
      for (const auto& d : n.at("dimensions")) {
        if (!d.is_string()) throw Error("network node: dimension must be a string");
        node.active_dimensions.insert(dimension_from_string(d.get<std::string>()));
      }
    }
    nodes.push_back(std::move(node));
  }
  std::vector<TransitionArc> arcs;
  const json arcs_json = j.contains("arcs") ? j.at("arcs") : json::array();
  for (const auto& a : arcs_json) {
    TransitionArc arc;
    arc.from = detail::field<std::string>(a, "from", "network arc");
    arc.to = detail::field<std::string>(a, "to", "network arc");
    arc.op = detail::field<std::string>(a, "operator", "network arc");
    if (a.contains("guard") && !a.at("guard").is_null()) {
      arc.guard = detail::field<std::string>(a, "guard", "network arc");
    }
    if (a.contains("targets")) {
      arc.targets = detail::field<std::vector<unsigned>>(a, "targets", "network arc");
    }
    arcs.push_back(std::move(arc));
  }
  std::optional<std::string> end;
  if (j.contains("end") && !j.at("end").is_null()) {
    end = detail::field<std::string>(j, "end", "network");
  }
  PureState reg = basis_state(1, 0);
  if (j.contains("register")) {
    reg = basis_from_label(detail::field<std::string>(j, "register", "network"));
  }
  return TransitionNetwork(std::move(nodes), std::move(arcs),
                           detail::field<std::string>(j, "start", "network"),
                           std::move(end), std::move(reg));
}

// ---------------------------------------------------------------------------
// Model script JSON: {"dt": s, "points": [{"target": [x,y,z], "duration": s}]}

struct ModelScript {
  double dt;
  std::vector<ScriptPoint> points;
};

inline constexpr double kDefaultScriptDt = 0.05;

inline ModelScript script_from_json(const json& j) {
  ModelScript s{j.is_object() && j.contains("dt")
                    ? detail::number(j.at("dt"), "script dt")
                    : kDefaultScriptDt,
                {}};
  for (const auto& p : detail::field<json>(j, "points", "script")) {
    const auto t = detail::field<std::vector<double>>(p, "target", "script point");
    if (t.size() != 3) throw Error("script point: target needs 3 coordinates");
    s.points.push_back(
        {BlochVector(t[0], t[1], t[2]),
         detail::number(detail::field<json>(p, "duration", "script point"),
                        "script point")});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Trajectory CSV: header t,x,y,z,collapsed; 17 significant digits.

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.17g", v);
  return buf;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,x,y,z,collapsed\n";
  for (const auto& s : tr) {
    out << format_real(s.t) << ',' << format_real(s.x) << ','
        << format_real(s.y) << ',' << format_real(s.z) << ',';
    if (s.collapsed) out << *s.collapsed;
    out << '\n';
  }
}

inline Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  const auto chomp = [](std::string& l) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  };
  if (!std::getline(in, line)) throw Error("trajectory CSV is empty");
  chomp(line);
  if (line != "t,x,y,z,collapsed") {
    throw Error("trajectory CSV header must be 't,x,y,z,collapsed'");
  }
  Trajectory out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    chomp(line);
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    cells.push_back(rest);
    const std::string where = "trajectory CSV row " + std::to_string(row);
    if (cells.size() != 5) throw Error(where + ": expected 5 columns");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      const auto cell = cells[k];
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v[k]);
      if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v[k])) {
        throw Error(where + ": bad number '" + std::string(cell) + "'");
      }
    }
    std::optional<int> collapsed;
    if (cells[4] == "0" || cells[4] == "1") {
      collapsed = cells[4] == "1";
    } else if (!cells[4].empty()) {
      throw Error(where + ": collapsed must be empty, 0 or 1");
    }
    if (std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) > 1.0 + tol::kConstruct) {
      throw Error(where + ": point lies outside the unit ball");
    }
    if (!out.empty() && !(v[0] > out.back().t)) {
      throw Error(where + ": timestamps must increase strictly");
    }
    out.push_back({v[0], v[1], v[2], v[3], collapsed});
  }
  return out;
}

inline Trajectory load_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_trajectory_csv(in);
}

// ---------------------------------------------------------------------------
// JSON views

inline json amplitude_json(Amp a) { return {{"re", a.real()}, {"im", a.imag()}}; }

inline json state_json(const PureState& s) {
  json amps = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    json a = amplitude_json(s[i]);
    a["ket"] = basis_label(i, s.n_qubits());
    amps.push_back(std::move(a));
  }
  return {{"qubits", s.n_qubits()}, {"amplitudes", std::move(amps)}};
}

inline json bloch_json(const BlochVector& b) {
  return {{"x", b.x()},         {"y", b.y()},         {"z", b.z()},
          {"length", b.length()}, {"theta", b.theta()}, {"phi", b.phi()}};
}

inline json readout_json(const PsychReadout& r) {
  return {{"reflection_depth", r.reflection_depth},
          {"valence", r.valence},
          {"processing_balance", r.processing_balance},
          {"relevance_affect", r.relevance_affect},
          {"relevance_reflection", r.relevance_reflection}};
}

inline json labels_json(const std::vector<ReadoutLabel>& labels) {
  json out = json::array();
  for (auto l : labels) out.push_back(std::string(to_string(l)));
  return out;
}

inline json danger_json(const DangerReport& r) {
  json flagged = json::array();
  for (const auto& f : r.flagged) {
    flagged.push_back({{"node", f.node_id}, {"reason", f.reason}});
  }
  return {{"flagged", std::move(flagged)}};
}

inline json deviation_json(const DeviationReport& r) {
  return {{"mean_dev", r.mean_dev},
          {"max_dev", r.max_dev},
          {"n", r.n},
          {"per_sample", r.per_sample}};
}

/// Human-readable ket expansion, e.g. "0.70710678|00> - 0.70710678|11>".
/// Complex coefficients are printed as (re+im i).
inline std::string format_ket(const PureState& s, int precision = 8) {
  const auto num = [&](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return std::string(buf);
  };
  std::string out;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Amp a = s[i];
    if (std::abs(a) < 1e-12) continue;
    const bool real = std::abs(a.imag()) < 1e-12;
    const bool imag = std::abs(a.real()) < 1e-12;
    std::string coef;
    bool negative = false;
    if (real) {
      negative = a.real() < 0;
      coef = num(std::abs(a.real()));
    } else if (imag) {
      negative = a.imag() < 0;
      coef = num(std::abs(a.imag())) + "i";
    } else {
      const std::string sign = a.imag() < 0 ? "-" : "+";
      coef = "(" + num(a.real()) + sign + num(std::abs(a.imag())) + "i)";
    }
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    out += coef + "|" + basis_label(i, s.n_qubits()) + ">";
  }
  return out;
}

}  // namespace qaffect
