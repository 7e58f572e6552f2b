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

// Behavioral state-transition networks whose arcs apply gates to a shared
// register, plus detection of states where inaction freezes a bad metric.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qaffect/core.hpp"
#include "qaffect/gates.hpp"

namespace qaffect {

enum class Dimension {
  Ethics,
  Engagement,
  UseIntentions,
  AffectiveInteraction,
  ReflectiveIntervention,
  Idle,
};

inline std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Ethics: return "Ethics";
    case Dimension::Engagement: return "Engagement";
    case Dimension::UseIntentions: return "UseIntentions";
    case Dimension::AffectiveInteraction: return "AffectiveInteraction";
    case Dimension::ReflectiveIntervention: return "ReflectiveIntervention";
    case Dimension::Idle: return "Idle";
  }
  return "?";
}

inline Dimension dimension_from_string(std::string_view s) {
  for (Dimension d : {Dimension::Ethics, Dimension::Engagement,
                      Dimension::UseIntentions, Dimension::AffectiveInteraction,
                      Dimension::ReflectiveIntervention, Dimension::Idle}) {
    if (to_string(d) == s) return d;
  }
  throw Error("unknown dimension '" + std::string(s) + "'");
}

inline constexpr std::string_view kNoop = "noop";

struct NetworkNode {
  std::string id;
  std::string label;
  std::set<Dimension> active_dimensions;
  std::map<std::string, double> metrics;
};

struct TransitionArc {
  std::string from;
  std::string to;
  std::string op = std::string(kNoop);  // gate name or "noop"
  std::optional<std::string> guard;
  std::vector<unsigned> targets;  // empty: first qubit(s) of the register

  bool is_noop() const { return op == kNoop; }
  bool operator==(const TransitionArc&) const = default;
};

class TransitionNetwork {
 public:
  TransitionNetwork(std::vector<NetworkNode> nodes,
                    std::vector<TransitionArc> arcs, std::string start,
                    std::optional<std::string> end = std::nullopt,
                    PureState register_state = basis_state(1, 0))
      : nodes_(std::move(nodes)),
        arcs_(std::move(arcs)),
        start_(std::move(start)),
        end_(std::move(end)),
        register_(std::move(register_state)) {
    std::set<std::string> ids;
    for (const auto& n : nodes_) {
      if (n.id.empty()) throw Error("node id must not be empty");
      if (!ids.insert(n.id).second) {
        throw Error("duplicate node id '" + n.id + "'");
      }
      for (const auto& [name, value] : n.metrics) {
        if (!std::isfinite(value)) {
          throw Error("metric '" + name + "' on node '" + n.id +
                      "' is not finite");
        }
      }
    }
    const auto require = [&](const std::string& id, std::string_view what) {
      if (!ids.count(id)) {
        throw Error(std::string(what) + " '" + id + "' is not a node");
      }
    };
    require(start_, "start");
    if (end_) require(*end_, "end");
    for (const auto& a : arcs_) {
      require(a.from, "arc source");
      require(a.to, "arc target");
      if (!a.is_noop()) {
        const Gate g = standard_gate(a.op);
        detail::check_targets(register_.n_qubits(), g, arc_targets(a, g));
      }
    }
  }

  std::span<const NetworkNode> nodes() const { return nodes_; }
  std::span<const TransitionArc> arcs() const { return arcs_; }
  const std::string& start() const { return start_; }
  const std::optional<std::string>& end() const { return end_; }
  const PureState& register_state() const { return register_; }

  const NetworkNode* find(std::string_view id) const {
    for (const auto& n : nodes_) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }

  std::vector<TransitionArc> arcs_from(std::string_view id) const {
    std::vector<TransitionArc> out;
    for (const auto& a : arcs_) {
      if (a.from == id) out.push_back(a);
    }
    return out;
  }

  static std::vector<unsigned> arc_targets(const TransitionArc& a,
                                           const Gate& g) {
    if (!a.targets.empty()) return a.targets;
    return g.arity() == 1 ? std::vector<unsigned>{0}
                          : std::vector<unsigned>{0, 1};
  }

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<TransitionArc> arcs_;
  std::string start_;
  std::optional<std::string> end_;
  PureState register_;
};

/// Position of one walk through a network.
struct Traversal {
  std::string current;
  PureState register_state;
};

inline Traversal start_traversal(const TransitionNetwork& net) {
  return Traversal{net.start(), net.register_state()};
}

/// Follows `arc` from the traversal's node. `holding` lists the guard
/// predicates that currently hold.
inline Traversal step(const TransitionNetwork& net, const Traversal& at,
                      const TransitionArc& arc,
                      const std::set<std::string>& holding = {}) {
  if (arc.from != at.current) {
    throw Error("arc " + arc.from + " -> " + arc.to +
                " does not leave node '" + at.current + "'");
  }
  bool known = false;
  for (const auto& a : net.arcs()) known = known || a == arc;
  if (!known) throw Error("arc is not part of the network");
  if (arc.guard && !holding.count(*arc.guard)) {
    throw Error("guard '" + *arc.guard + "' does not hold");
  }
  if (arc.is_noop()) return Traversal{arc.to, at.register_state};
  const Gate g = standard_gate(arc.op);
  return Traversal{arc.to, apply_gate(at.register_state, g,
                                      TransitionNetwork::arc_targets(arc, g))};
}

/// Every non-empty combination of `dims`, smallest first.
inline std::vector<std::set<Dimension>> concurrent_activations(
    const std::set<Dimension>& dims) {
  if (dims.empty()) throw Error("at least one dimension is required");
  const std::vector<Dimension> items(dims.begin(), dims.end());
  const std::size_t k = items.size();
  std::vector<std::set<Dimension>> out;
  for (std::size_t size = 1; size <= k; ++size) {
    // Lexicographic combinations of `size` indices.
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::set<Dimension> combo;
      for (std::size_t i : pick) combo.insert(items[i]);
      out.push_back(std::move(combo));
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == k - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

struct DangerFlag {
  std::string node_id;
  std::string reason;
};

struct DangerReport {
  std::vector<DangerFlag> flagged;
};

/// Nodes reachable from `id` through noop arcs only (including `id`).
inline std::vector<std::string> noop_closure(const TransitionNetwork& net,
                                             const std::string& id) {
  std::vector<std::string> seen{id};
  std::deque<std::string> queue{id};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const auto& a : net.arcs()) {
      if (a.from != cur || !a.is_noop()) continue;
      if (std::find(seen.begin(), seen.end(), a.to) == seen.end()) {
        seen.push_back(a.to);
        queue.push_back(a.to);
      }
    }
  }
  return seen;
}

/// Flags nodes where doing nothing is available (a noop self-arc or a noop
/// arc into the end node), `metric` exceeds `threshold`, and no noop-only
/// walk reaches a node with a different level of that metric. Nodes without
/// the metric neither qualify nor count as a change.
inline DangerReport detect_danger(const TransitionNetwork& net,
                                  const std::string& metric, double threshold) {
  if (!std::isfinite(threshold)) throw Error("threshold must be finite");
  bool present = false;
  for (const auto& n : net.nodes()) present = present || n.metrics.count(metric);
  if (!present) throw Error("no node carries metric '" + metric + "'");

  DangerReport report;
  for (const auto& n : net.nodes()) {
    const auto it = n.metrics.find(metric);
    if (it == n.metrics.end() || !(it->second > threshold)) continue;
    const double level = it->second;

    bool self_noop = false, exit_noop = false;
    for (const auto& a : net.arcs()) {
      if (a.from != n.id || !a.is_noop()) continue;
      self_noop = self_noop || a.to == n.id;
      exit_noop = exit_noop || (net.end() && a.to == *net.end());
    }
    if (!self_noop && !exit_noop) continue;

    bool stagnant = true;
    for (const auto& id : noop_closure(net, n.id)) {
      const auto& m = net.find(id)->metrics;
      const auto mv = m.find(metric);
      if (mv != m.end() && std::abs(mv->second - level) > 1e-12) stagnant = false;
    }
    if (!stagnant) continue;

    std::string reason = self_noop ? "noop self-arc" : "noop exit";
    reason += " leaves " + metric + " at " + std::to_string(level) +
              " (threshold " + std::to_string(threshold) + ")";
    report.flagged.push_back({n.id, std::move(reason)});
  }
  return report;
}

}  // namespace qaffect
