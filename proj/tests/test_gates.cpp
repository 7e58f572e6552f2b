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

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qaffect/gates.hpp"

using namespace qaffect;
using namespace std::complex_literals;
using Catch::Matchers::WithinAbs;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

oracle::Mat mat_of(const Gate& g) {
  oracle::Mat m(g.dim());
  for (std::size_t r = 0; r < g.dim(); ++r)
    for (std::size_t c = 0; c < g.dim(); ++c) m(r, c) = g.at(r, c);
  return m;
}

oracle::Vec vec_of(const PureState& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

PureState random_state(std::mt19937_64& gen, unsigned n) {
  std::normal_distribution<double> g;
  std::vector<Amp> a(std::size_t{1} << n);
  for (auto& v : a) v = Amp(g(gen), g(gen));
  return PureState::normalized(n, a);
}

double max_diff(const oracle::Mat& a, const oracle::Mat& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i) d = std::max(d, std::abs(a.a[i] - b.a[i]));
  return d;
}

void require_state(const PureState& s, std::vector<Amp> expected, double eps = 1e-12) {
  REQUIRE(s.dim() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(s[i] - expected[i]) < eps);
}

}  // namespace

TEST_CASE("standard gates are unitary", "[gates][property]") {
  for (const char* name : {"X", "NOT", "H", "V", "Vdag", "CNOT", "CV"}) {
    const auto m = mat_of(standard_gate(name));
    oracle::Mat mdag(m.n);
    for (std::size_t r = 0; r < m.n; ++r)
      for (std::size_t c = 0; c < m.n; ++c) mdag(r, c) = std::conj(m(c, r));
    CHECK(max_diff(oracle::matmul(mdag, m), oracle::identity(m.n)) < 1e-12);
  }
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    for (const char* axis : {"Rx", "Ry", "Rz"}) {
      const Gate g = rotation_gate(axis, angle(gen));
      const auto m = mat_of(compose(g, g.adjoint()));
      CHECK(max_diff(m, oracle::identity(2)) < 1e-12);
    }
  }
}

TEST_CASE("gate construction validation", "[gates]") {
  CHECK_THROWS_AS(Gate("bad", 1, {1.0, 1.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(Gate("bad", 3, std::vector<Amp>(64, 0.0)), Error);
  CHECK_THROWS_AS(Gate("bad", 1, {1.0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(standard_gate("Toffoli"), Error);
  CHECK_THROWS_AS(rotation_gate("Rw", 0.1), Error);
  CHECK_THROWS_AS(rotation_gate("Rx", std::nan("")), Error);
  CHECK(standard_gate("NOT").name() == "X");
}

TEST_CASE("V squared is NOT and V Vdag is identity", "[gates]") {
  const Gate v = standard_gate("V");
  const auto vv = mat_of(compose(v, v));
  CHECK(max_diff(vv, mat_of(standard_gate("X"))) < 1e-12);
  CHECK(max_diff(mat_of(compose(v, standard_gate("Vdag"))), oracle::identity(2)) < 1e-12);
  // Controlled-V applied twice equals CNOT.
  const Gate cv = standard_gate("CV");
  CHECK(max_diff(mat_of(compose(cv, cv)), mat_of(standard_gate("CNOT"))) < 1e-12);
}

TEST_CASE("involutions return the input", "[gates][property]") {
  std::mt19937_64 gen(43);
  for (int i = 0; i < 30; ++i) {
    const PureState s1 = random_state(gen, 1), s2 = random_state(gen, 2);
    const PureState x2 = apply_gate(apply_gate(s1, standard_gate("X"), {0}), standard_gate("X"), {0});
    CHECK(max_diff(oracle::outer(vec_of(x2)), oracle::outer(vec_of(s1))) < 1e-12);
    const PureState h2 = apply_gate(apply_gate(s1, standard_gate("H"), {0}), standard_gate("H"), {0});
    CHECK(max_diff(oracle::outer(vec_of(h2)), oracle::outer(vec_of(s1))) < 1e-12);
    const Gate cnot = standard_gate("CNOT");
    const PureState c2 = apply_gate(apply_gate(s2, cnot, {0, 1}), cnot, {0, 1});
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(c2[k] - s2[k]) < 1e-12);
  }
}

TEST_CASE("rotation matrices", "[gates]") {
  const double a = 0.7;
  const Gate rx = rotation_gate("Rx", a), ry = rotation_gate("Ry", a), rz = rotation_gate("Rz", a);
  // R_n(a) = cos(a/2) I - i sin(a/2) sigma_n
  for (auto [g, axis] : {std::pair{rx, 'x'}, std::pair{ry, 'y'}, std::pair{rz, 'z'}}) {
    oracle::Mat expected(2);
    const auto p = oracle::pauli(axis);
    for (std::size_t k = 0; k < 4; ++k) {
      expected.a[k] = std::cos(a / 2) * oracle::identity(2).a[k] - 1i * std::sin(a / 2) * p.a[k];
    }
    CHECK(max_diff(mat_of(g), expected) < 1e-14);
  }
  // Ry(pi/2)|0> lands on +x.
  require_state(apply_gate(basis_state(1, 0), rotation_gate("Ry", std::numbers::pi / 2), {0}),
                {kS, kS});
}

TEST_CASE("apply_gate agrees with the dense embedding", "[gates][property]") {
  std::mt19937_64 gen(47);
  const std::vector<std::string> names{"X", "H", "V", "Vdag", "CNOT", "CV"};
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 1 + trial % 5;
    const std::string& name = names[gen() % names.size()];
    const Gate g = standard_gate(name);
    if (g.arity() > n) continue;
    std::vector<unsigned> targets;
    while (targets.size() < g.arity()) {
      const unsigned t = unsigned(gen() % n);
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    const PureState s = random_state(gen, n);
    const auto expected = oracle::matvec(oracle::embed(mat_of(g), targets, n), vec_of(s));
    const PureState out = apply_gate(s, g, std::span<const unsigned>(targets));
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(std::abs(out[k] - expected[k]) < 1e-12);
  }
}

TEST_CASE("apply_gate target validation", "[gates]") {
  const PureState s = basis_state(2, 0);
  CHECK_THROWS_AS(apply_gate(s, standard_gate("X"), {2}), Error);
  CHECK_THROWS_AS(apply_gate(s, standard_gate("CNOT"), {0, 0}), Error);
  CHECK_THROWS_AS(apply_gate(s, standard_gate("CNOT"), {0}), Error);
  CHECK_THROWS_AS(apply_gate(s, standard_gate("H"), {0, 1}), Error);
  CHECK_THROWS_AS(Circuit(2).add("CNOT", {1, 2}), Error);
  CHECK_THROWS_AS(Circuit(2).add("Y", {0}), Error);
}

TEST_CASE("CNOT control and target ordering", "[gates]") {
  const Gate cnot = standard_gate("CNOT");
  // control on qubit 0 (most significant): |10> -> |11>
  require_state(apply_gate(basis_state(2, 2), cnot, {0, 1}), {0.0, 0.0, 0.0, 1.0});
  require_state(apply_gate(basis_state(2, 1), cnot, {0, 1}), {0.0, 1.0, 0.0, 0.0});
  // reversed roles: |01> -> |11>
  require_state(apply_gate(basis_state(2, 1), cnot, {1, 0}), {0.0, 0.0, 0.0, 1.0});
  // three qubits, control 0 target 2: |100> -> |101>
  require_state(apply_gate(basis_state(3, 4), cnot, {0, 2}), {0, 0, 0, 0, 0, 1.0, 0, 0});
}

TEST_CASE("EPR circuit maps basis states to Bell states", "[gates]") {
  const std::vector<std::vector<Amp>> expected{
      {kS, 0.0, 0.0, kS}, {0.0, kS, kS, 0.0}, {kS, 0.0, 0.0, -kS}, {0.0, kS, -kS, 0.0}};
  for (std::size_t i = 0; i < 4; ++i) {
    require_state(epr_map(basis_state(2, i)), expected[i]);
    require_state(run_circuit(epr_circuit(), basis_state(2, i)), expected[i]);
  }
  CHECK_THROWS_AS(epr_map(PureState(2, {kS, 0.0, 0.0, kS})), Error);
  CHECK_THROWS_AS(epr_map(basis_state(1, 0)), Error);
}

TEST_CASE("random circuits preserve the norm", "[gates][property]") {
  std::mt19937_64 gen(53);
  const std::vector<std::string> one{"X", "H", "V", "Vdag"};
  const std::vector<std::string> two{"CNOT", "CV"};
  std::uniform_real_distribution<double> angle(-6.3, 6.3);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 1 + trial % 8;
    Circuit c(n);
    const int steps = 1 + int(gen() % 20);
    for (int k = 0; k < steps; ++k) {
      const auto choice = gen() % 3;
      if (choice == 0 && n >= 2) {
        const unsigned a = unsigned(gen() % n);
        unsigned b = unsigned(gen() % (n - 1));
        if (b >= a) ++b;
        c.add(two[gen() % 2], {a, b});
      } else if (choice == 1) {
        c.add(rotation_gate(std::array{"Rx", "Ry", "Rz"}[gen() % 3], angle(gen)),
              {unsigned(gen() % n)});
      } else {
        c.add(one[gen() % one.size()], {unsigned(gen() % n)});
      }
    }
    const PureState out = run_circuit(c, random_state(gen, n));
    double norm2 = 0.0;
    for (double p : probabilities(out)) norm2 += p;
    CHECK_THAT(norm2, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("run_circuit rejects mismatched input", "[gates]") {
  CHECK_THROWS_AS(run_circuit(epr_circuit(), basis_state(3, 0)), Error);
  CHECK_THROWS_AS(Circuit(0), Error);
  CHECK_THROWS_AS(Circuit(9), Error);
}

TEST_CASE("basis labels", "[gates]") {
  CHECK(basis_label(2, 2) == "10");
  CHECK(basis_label(1, 3) == "001");
  require_state(basis_from_label("10"), {0.0, 0.0, 1.0, 0.0});
  CHECK(basis_index(basis_from_label("0110")) == 6u);
  CHECK_THROWS_AS(basis_from_label(""), Error);
  CHECK_THROWS_AS(basis_from_label("012"), Error);
  CHECK_THROWS_AS(basis_from_label("000000000"), Error);
  CHECK_FALSE(basis_index(PureState(1, {kS, kS})).has_value());
}

TEST_CASE("RandomSource is deterministic and uniform in [0, 1)", "[gates][property]") {
  RandomSource a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs |= x != c.uniform();
  }
  CHECK(differs);
  CHECK(RandomSource::kAlgorithm == "mt19937_64/u53");
}

TEST_CASE("measure_qubit", "[gates]") {
  RandomSource rng(1);
  const MeasurementRecord r0 = measure_qubit(basis_state(1, 0), 0, rng);
  CHECK(r0.value == 0.0);
  CHECK(r0.probability == 1.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(measure_qubit(basis_state(1, 1), 0, rng).value == 1.0);
  }
  CHECK_THROWS_AS(measure_qubit(basis_state(1, 0), 1, rng), Error);

  // Measuring one half of a Bell pair fixes the other half.
  const PureState bell(2, {kS, 0.0, 0.0, kS});
  for (int i = 0; i < 50; ++i) {
    const auto r = measure_qubit(bell, 0, rng);
    CHECK_THAT(r.probability, WithinAbs(0.5, 1e-12));
    require_state(r.post_state, r.value == 0.0 ? std::vector<Amp>{1.0, 0.0, 0.0, 0.0}
                                                : std::vector<Amp>{0.0, 0.0, 0.0, 1.0});
  }
}

TEST_CASE("measurement statistics on |+>", "[gates][property]") {
  RandomSource rng(2024);
  const PureState plus(1, {kS, kS});
  int ones = 0;
  for (int i = 0; i < 10000; ++i) ones += int(measure_qubit(plus, 0, rng).value);
  const double freq = ones / 10000.0;
  CHECK(freq >= 0.47);
  CHECK(freq <= 0.53);
}

TEST_CASE("same seed, same measurement sequence", "[gates][property]") {
  std::mt19937_64 gen(59);
  const PureState s = random_state(gen, 3);
  RandomSource a(7), b(7);
  for (int i = 0; i < 500; ++i) {
    const unsigned q = unsigned(i % 3);
    CHECK(measure_qubit(s, q, a).outcome_index == measure_qubit(s, q, b).outcome_index);
  }
}

TEST_CASE("MeasurementOperator and expectation", "[gates]") {
  const MeasurementOperator z({{1.0, basis_state(1, 0)}, {-1.0, basis_state(1, 1)}});
  CHECK(expectation(basis_state(1, 0), z) == 1.0);
  CHECK(expectation(basis_state(1, 1), z) == -1.0);
  CHECK_THAT(expectation(PureState(1, {kS, kS}), z), WithinAbs(0.0, 1e-15));
  CHECK_THAT(expectation(DensityMatrix::maximally_mixed(1), z), WithinAbs(0.0, 1e-15));
  CHECK_THAT(expectation(DensityMatrix(2, {0.75, 0.0, 0.0, 0.25}), z), WithinAbs(0.5, 1e-15));

  CHECK_THROWS_AS(MeasurementOperator({{1.0, basis_state(1, 0)}}), Error);
  CHECK_THROWS_AS(MeasurementOperator({{1.0, basis_state(1, 0)}, {2.0, PureState(1, {kS, kS})}}),
                  Error);
  CHECK_THROWS_AS(expectation(basis_state(2, 0), z), Error);

  // Pure and density forms agree with Tr(rho M) computed densely.
  std::mt19937_64 gen(61);
  oracle::Mat mz = oracle::pauli('z');
  for (int i = 0; i < 50; ++i) {
    const PureState s = random_state(gen, 1);
    const double dense = oracle::trace(oracle::matmul(oracle::outer(vec_of(s)), mz)).real();
    CHECK_THAT(expectation(s, z), WithinAbs(dense, 1e-12));
    CHECK_THAT(expectation(density_from_pure(s), z), WithinAbs(dense, 1e-12));
  }
}

TEST_CASE("measure samples outcomes with Born weights", "[gates]") {
  const MeasurementOperator x({{1.0, PureState(1, {kS, kS})}, {-1.0, PureState(1, {kS, -kS})}});
  RandomSource rng(5);
  const auto r = measure(PureState(1, {kS, kS}), x, rng);
  CHECK(r.value == 1.0);
  CHECK_THAT(r.probability, WithinAbs(1.0, 1e-12));
  // Post-state keeps the phase of <k|psi>.
  const auto phased = measure(PureState(1, {kS * 1i, kS * 1i}), x, rng);
  CHECK(std::abs(phased.post_state[0] - kS * 1i) < 1e-12);
}
