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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qaffect/io.hpp"
#include "qaffect/network.hpp"

using namespace qaffect;

namespace {

std::string fixture(const char* name) { return std::string(QAFFECT_FIXTURES) + "/" + name; }

NetworkNode node(std::string id, std::optional<double> level) {
  NetworkNode n{id, id, {}, {}};
  if (level) n.metrics["dissatisfaction"] = *level;
  return n;
}

std::vector<std::string> flagged_ids(const DangerReport& r) {
  std::vector<std::string> ids;
  for (const auto& f : r.flagged) ids.push_back(f.node_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

TEST_CASE("network construction validation", "[network]") {
  std::vector<NetworkNode> nodes{node("a", 0.1), node("b", 0.2)};
  CHECK_NOTHROW(TransitionNetwork(nodes, {{"a", "b", "X"}}, "a"));
  CHECK_THROWS_AS(TransitionNetwork(nodes, {}, "zz"), Error);
  CHECK_THROWS_AS(TransitionNetwork(nodes, {{"a", "zz", "X"}}, "a"), Error);
  CHECK_THROWS_AS(TransitionNetwork(nodes, {{"a", "b", "Y"}}, "a"), Error);
  CHECK_THROWS_AS(TransitionNetwork(nodes, {}, "a", "zz"), Error);
  CHECK_THROWS_AS(TransitionNetwork({node("a", 0.1), node("a", 0.2)}, {}, "a"), Error);
  // CNOT needs two qubits in the register.
  CHECK_THROWS_AS(TransitionNetwork(nodes, {{"a", "b", "CNOT"}}, "a"), Error);
  CHECK_NOTHROW(TransitionNetwork(nodes, {{"a", "b", "CNOT"}}, "a", std::nullopt, basis_state(2, 0)));
  CHECK_THROWS_AS(TransitionNetwork(nodes, {{"a", "b", "X", std::nullopt, {1}}}, "a"), Error);
  NetworkNode bad = node("c", std::nan(""));
  CHECK_THROWS_AS(TransitionNetwork({bad}, {}, "c"), Error);
}

TEST_CASE("step applies arc operators to the register", "[network]") {
  const TransitionNetwork net({node("a", 0.1), node("b", 0.2), node("c", 0.3)},
                              {{"a", "b", "X"}, {"b", "c", "H", "ready"}, {"c", "c", "noop"}},
                              "a");
  Traversal t = start_traversal(net);
  CHECK(t.current == "a");
  t = step(net, t, net.arcs()[0]);
  CHECK(t.current == "b");
  CHECK(basis_index(t.register_state) == 1u);
  CHECK_THROWS_AS(step(net, t, net.arcs()[1]), Error);  // guard absent
  t = step(net, t, net.arcs()[1], {"ready"});
  CHECK(t.current == "c");
  CHECK(std::abs(t.register_state[1] + 1.0 / std::sqrt(2.0)) < 1e-12);
  const PureState before = t.register_state;
  t = step(net, t, net.arcs()[2]);
  CHECK(t.register_state == before);
  CHECK_THROWS_AS(step(net, t, net.arcs()[0]), Error);  // wrong source
  CHECK_THROWS_AS(step(net, t, TransitionArc{"c", "a", "X"}), Error);
  CHECK(net.arcs_from("b").size() == 1);
}

TEST_CASE("concurrent activations enumerate every non-empty subset", "[network][property]") {
  const std::vector<Dimension> all{Dimension::Ethics, Dimension::Engagement,
                                   Dimension::UseIntentions, Dimension::AffectiveInteraction,
                                   Dimension::ReflectiveIntervention, Dimension::Idle};
  for (std::size_t k = 1; k <= all.size(); ++k) {
    const std::set<Dimension> dims(all.begin(), all.begin() + k);
    const auto combos = concurrent_activations(dims);
    CHECK(combos.size() == (std::size_t{1} << k) - 1);
    // Bitmask oracle: every mask 1..2^k-1 appears exactly once.
    std::set<std::set<Dimension>> expected;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::set<Dimension> s;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) s.insert(all[i]);
      expected.insert(s);
    }
    CHECK(std::set<std::set<Dimension>>(combos.begin(), combos.end()) == expected);
    CHECK(std::is_sorted(combos.begin(), combos.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); }));
  }
  CHECK_THROWS_AS(concurrent_activations({}), Error);
}

TEST_CASE("three appraisal dimensions give seven activations", "[network]") {
  const auto combos = concurrent_activations(
      {Dimension::Ethics, Dimension::Engagement, Dimension::UseIntentions});
  CHECK(combos.size() == 7);
  CHECK(combos.back().size() == 3);
}

TEST_CASE("dimension names round-trip", "[network]") {
  for (Dimension d : {Dimension::Ethics, Dimension::Idle, Dimension::UseIntentions}) {
    CHECK(dimension_from_string(to_string(d)) == d);
  }
  CHECK_THROWS_AS(dimension_from_string("Mood"), Error);
}

TEST_CASE("noop closure", "[network]") {
  const TransitionNetwork net({node("a", 1), node("b", 1), node("c", 1), node("d", 1)},
                              {{"a", "b", "noop"}, {"b", "c", "noop"}, {"c", "a", "noop"},
                               {"a", "d", "X"}},
                              "a");
  auto ids = noop_closure(net, "b");
  std::sort(ids.begin(), ids.end());
  CHECK(ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(noop_closure(net, "d") == std::vector<std::string>{"d"});
}

TEST_CASE("danger detection rules", "[network]") {
  SECTION("noop self-arc above threshold is flagged") {
    const TransitionNetwork net({node("s", 0.9)}, {{"s", "s", "noop"}}, "s");
    CHECK(flagged_ids(detect_danger(net, "dissatisfaction", 0.5)) ==
          std::vector<std::string>{"s"});
    CHECK(detect_danger(net, "dissatisfaction", 0.9).flagged.empty());
  }
  SECTION("gate self-arc is not inaction") {
    const TransitionNetwork net({node("s", 0.9)}, {{"s", "s", "X"}}, "s");
    CHECK(detect_danger(net, "dissatisfaction", 0.5).flagged.empty());
  }
  SECTION("noop exit into the end node") {
    const TransitionNetwork net({node("s", 0.9), node("e", std::nullopt)},
                                {{"s", "e", "noop"}}, "s", "e");
    const auto r = detect_danger(net, "dissatisfaction", 0.5);
    CHECK(flagged_ids(r) == std::vector<std::string>{"s"});
    CHECK(r.flagged[0].reason.find("noop exit") != std::string::npos);
  }
  SECTION("noop walk that changes the metric clears the node") {
    const TransitionNetwork net({node("s", 0.9), node("calm", 0.2)},
                                {{"s", "s", "noop"}, {"s", "calm", "noop"}}, "s");
    CHECK(detect_danger(net, "dissatisfaction", 0.5).flagged.empty());
  }
  SECTION("missing metric") {
    const TransitionNetwork net({node("s", std::nullopt)}, {{"s", "s", "noop"}}, "s");
    CHECK_THROWS_AS(detect_danger(net, "dissatisfaction", 0.5), Error);
    CHECK_THROWS_AS(detect_danger(net, "boredom", 0.5), Error);
  }
}

TEST_CASE("danger flags shrink as the threshold rises", "[network][property]") {
  std::mt19937_64 gen(71);
  std::uniform_real_distribution<double> level(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + int(gen() % 6);
    std::vector<NetworkNode> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(node("n" + std::to_string(i), level(gen)));
    std::vector<TransitionArc> arcs;
    for (int k = 0; k < 2 * n; ++k) {
      const auto from = "n" + std::to_string(gen() % n), to = "n" + std::to_string(gen() % n);
      arcs.push_back({from, to, gen() % 2 ? "noop" : "X"});
    }
    const TransitionNetwork net(nodes, arcs, "n0");
    double lo = level(gen), hi = level(gen);
    if (lo > hi) std::swap(lo, hi);
    const auto at_lo = flagged_ids(detect_danger(net, "dissatisfaction", lo));
    const auto at_hi = flagged_ids(detect_danger(net, "dissatisfaction", hi));
    CHECK(std::includes(at_lo.begin(), at_lo.end(), at_hi.begin(), at_hi.end()));
  }
}

TEST_CASE("danger detection on the bundled scenarios", "[network]") {
  const auto freeze = network_from_json(load_json_file(fixture("freeze_network.json")));
  CHECK(flagged_ids(detect_danger(freeze, "dissatisfaction", 0.5)) ==
        std::vector<std::string>{"freeze"});
  const auto walkout = network_from_json(load_json_file(fixture("walkout_network.json")));
  CHECK(flagged_ids(detect_danger(walkout, "dissatisfaction", 0.5)) ==
        std::vector<std::string>{"walk_out_unadapted"});
  const auto appraisal = network_from_json(load_json_file(fixture("appraisal_network.json")));
  CHECK(detect_danger(appraisal, "dissatisfaction", 0.5).flagged.empty());
}
