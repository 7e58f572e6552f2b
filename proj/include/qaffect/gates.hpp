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

// Gate library, register-embedded gate application, circuits, and
// Born-rule measurement.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qaffect/core.hpp"

namespace qaffect {

/// Named unitary acting on one or two qubits. The matrix is row-major over
/// the local basis with targets[0] as the most significant local bit.
class Gate {
 public:
  Gate(std::string name, unsigned arity, std::vector<Amp> matrix)
      : name_(std::move(name)), arity_(arity), matrix_(std::move(matrix)) {
    if (arity_ != 1 && arity_ != 2) {
      throw Error("gate '" + name_ + "' must act on 1 or 2 qubits");
    }
    const std::size_t d = dim();
    if (matrix_.size() != d * d) {
      throw Error("gate '" + name_ + "' has a malformed matrix");
    }
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        Amp dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += std::conj(at(k, r)) * at(k, c);
        if (std::abs(dot - (r == c ? 1.0 : 0.0)) > tol::kConstruct) {
          throw Error("gate '" + name_ + "' is not unitary");
        }
      }
    }
  }

  const std::string& name() const { return name_; }
  unsigned arity() const { return arity_; }
  std::size_t dim() const { return std::size_t{1} << arity_; }
  Amp at(std::size_t r, std::size_t c) const { return matrix_[r * dim() + c]; }
  std::span<const Amp> matrix() const { return matrix_; }

  Gate adjoint() const {
    const std::size_t d = dim();
    std::vector<Amp> m(d * d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) m[r * d + c] = std::conj(at(c, r));
    }
    return Gate(name_ + "^dag", arity_, std::move(m));
  }

 private:
  std::string name_;
  unsigned arity_;
  std::vector<Amp> matrix_;
};

/// Gate equivalent to applying `first` and then `second` (matrix
/// second * first).
inline Gate compose(const Gate& first, const Gate& second) {
  if (first.arity() != second.arity()) {
    throw Error("cannot compose gates of different arity");
  }
  const std::size_t d = first.dim();
  std::vector<Amp> m(d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t k = 0; k < d; ++k) {
        m[r * d + c] += second.at(r, k) * first.at(k, c);
      }
    }
  }
  return Gate(first.name() + "*" + second.name(), first.arity(), std::move(m));
}

namespace detail {
inline Gate controlled(std::string name, const Gate& u) {
  std::vector<Amp> m(16, 0.0);
  m[0 * 4 + 0] = 1.0;
  m[1 * 4 + 1] = 1.0;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) m[(2 + r) * 4 + (2 + c)] = u.at(r, c);
  }
  return Gate(std::move(name), 2, std::move(m));
}
}  // namespace detail

/// X (alias NOT), H, V (square root of NOT), Vdag, CNOT, CV. Controlled
/// gates take targets {control, target}.
inline Gate standard_gate(std::string_view name) {
  using namespace std::complex_literals;
  const double s = 1.0 / std::numbers::sqrt2;
  if (name == "X" || name == "NOT") return Gate("X", 1, {0.0, 1.0, 1.0, 0.0});
  if (name == "H") return Gate("H", 1, {s, s, s, -s});
  if (name == "V") {
    return Gate("V", 1,
                {0.5 * (1.0 + 1i), 0.5 * (1.0 - 1i), 0.5 * (1.0 - 1i),
                 0.5 * (1.0 + 1i)});
  }
  if (name == "Vdag") {
    Gate g = standard_gate("V").adjoint();
    return Gate("Vdag", 1, {g.matrix().begin(), g.matrix().end()});
  }
  if (name == "CNOT") return detail::controlled("CNOT", standard_gate("X"));
  if (name == "CV") return detail::controlled("CV", standard_gate("V"));
  throw Error("unknown gate '" + std::string(name) + "'");
}

/// Rotation about the named Bloch axis ("Rx", "Ry", "Rz") by `angle` radians.
inline Gate rotation_gate(std::string_view axis, double angle) {
  using namespace std::complex_literals;
  if (!std::isfinite(angle)) throw Error("rotation angle must be finite");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  if (axis == "Rx") return Gate("Rx", 1, {c, -1i * s, -1i * s, c});
  if (axis == "Ry") return Gate("Ry", 1, {c, -s, s, c});
  if (axis == "Rz") {
    return Gate("Rz", 1, {std::polar(1.0, -angle / 2.0), 0.0, 0.0,
                          std::polar(1.0, angle / 2.0)});
  }
  throw Error("unknown rotation '" + std::string(axis) + "'");
}

inline bool is_rotation_name(std::string_view name) {
  return name == "Rx" || name == "Ry" || name == "Rz";
}

namespace detail {
inline void check_targets(unsigned n_qubits, const Gate& gate,
                          std::span<const unsigned> targets) {
  if (targets.size() != gate.arity()) {
    throw Error("gate '" + gate.name() + "' expects " +
                std::to_string(gate.arity()) + " target(s), got " +
                std::to_string(targets.size()));
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= n_qubits) {
      throw Error("target qubit " + std::to_string(targets[i]) +
                  " out of range for " + std::to_string(n_qubits) +
                  " qubit(s)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw Error("duplicate target qubit");
    }
  }
}
}  // namespace detail

/// Applies `gate` to the listed qubits of `state`, leaving the rest alone.
inline PureState apply_gate(const PureState& state, const Gate& gate,
                            std::span<const unsigned> targets) {
  const unsigned n = state.n_qubits();
  detail::check_targets(n, gate, targets);

  const std::size_t k = targets.size();
  std::vector<std::size_t> bits(k);
  std::size_t mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    bits[j] = std::size_t{1} << (n - 1 - targets[j]);
    mask |= bits[j];
  }
  const std::size_t local_dim = std::size_t{1} << k;

  std::vector<Amp> out(state.amplitudes().begin(), state.amplitudes().end());
  std::vector<std::size_t> idx(local_dim);
  std::vector<Amp> in(local_dim);
  for (std::size_t base = 0; base < state.dim(); ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) {
      std::size_t i = base;
      for (std::size_t j = 0; j < k; ++j) {
        if (l & (std::size_t{1} << (k - 1 - j))) i |= bits[j];
      }
      idx[l] = i;
      in[l] = state[i];
    }
    for (std::size_t r = 0; r < local_dim; ++r) {
      Amp acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) acc += gate.at(r, c) * in[c];
      out[idx[r]] = acc;
    }
  }
  return PureState(n, std::move(out));
}

inline PureState apply_gate(const PureState& state, const Gate& gate,
                            std::initializer_list<unsigned> targets) {
  return apply_gate(state, gate,
                    std::span<const unsigned>(targets.begin(), targets.size()));
}

struct CircuitStep {
  Gate gate;
  std::vector<unsigned> targets;
};

class Circuit {
 public:
  explicit Circuit(unsigned n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
      throw Error("circuit qubit count out of range");
    }
  }

  Circuit& add(Gate gate, std::vector<unsigned> targets) {
    detail::check_targets(n_qubits_, gate, targets);
    steps_.push_back({std::move(gate), std::move(targets)});
    return *this;
  }
  Circuit& add(std::string_view gate_name, std::vector<unsigned> targets) {
    return add(standard_gate(gate_name), std::move(targets));
  }

  unsigned n_qubits() const { return n_qubits_; }
  std::span<const CircuitStep> steps() const { return steps_; }

 private:
  unsigned n_qubits_;
  std::vector<CircuitStep> steps_;
};

inline PureState run_circuit(const Circuit& circuit, const PureState& input) {
  if (input.n_qubits() != circuit.n_qubits()) {
    throw Error("circuit acts on " + std::to_string(circuit.n_qubits()) +
                " qubit(s) but the input has " +
                std::to_string(input.n_qubits()));
  }
  PureState state = input;
  for (const auto& step : circuit.steps()) {
    state = apply_gate(state, step.gate, step.targets);
  }
  return state;
}

/// H on qubit 0 followed by CNOT(0 -> 1).
inline Circuit epr_circuit() {
  Circuit c(2);
  c.add("H", {0}).add("CNOT", {0, 1});
  return c;
}

/// Index of the basis state `state` equals up to a global phase, if any.
inline std::optional<std::size_t> basis_index(const PureState& state) {
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (std::abs(std::norm(state[i]) - 1.0) <= tol::kConstruct) return i;
  }
  return std::nullopt;
}

/// Bell state for a two-qubit computational basis input.
inline PureState epr_map(const PureState& input) {
  if (input.n_qubits() != 2 || !basis_index(input)) {
    throw Error("epr_map expects a two-qubit computational basis state");
  }
  return run_circuit(epr_circuit(), input);
}

/// Born-rule distribution over basis indices.
inline std::vector<double> probabilities(const PureState& state) {
  std::vector<double> p;
  p.reserve(state.dim());
  for (const Amp& a : state.amplitudes()) p.push_back(std::norm(a));
  return p;
}

/// Ket label of a basis index, most significant qubit first ("10" = 2).
inline std::string basis_label(std::size_t index, unsigned n_qubits) {
  std::string s(n_qubits, '0');
  for (unsigned q = 0; q < n_qubits; ++q) {
    if (index & (std::size_t{1} << (n_qubits - 1 - q))) s[q] = '1';
  }
  return s;
}

/// Parses a bit string such as "010" into the matching basis state.
inline PureState basis_from_label(std::string_view label) {
  if (label.empty() || label.size() > kMaxQubits) {
    throw Error("basis label must have 1 to " + std::to_string(kMaxQubits) +
                " bits");
  }
  std::size_t index = 0;
  for (char ch : label) {
    if (ch != '0' && ch != '1') {
      throw Error("basis label '" + std::string(label) +
                  "' must contain only 0 and 1");
    }
    index = (index << 1) | std::size_t(ch == '1');
  }
  return basis_state(unsigned(label.size()), index);
}

/// Seeded 64-bit Mersenne Twister. Uniform draws take the top 53 bits of
/// each output, so sequences are identical on every conforming platform.
class RandomSource {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/u53";

  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  bool operator==(const RandomSource&) const = default;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct MeasurementRecord {
  std::size_t outcome_index;
  double value;
  double probability;
  PureState post_state;
};

/// Projective computational-basis measurement of one qubit. The value is
/// the outcome bit.
inline MeasurementRecord measure_qubit(const PureState& state, unsigned qubit,
                                       RandomSource& rng) {
  const unsigned n = state.n_qubits();
  if (qubit >= n) throw Error("measured qubit out of range");
  const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    ((i & bit) ? p1 : p0) += std::norm(state[i]);
  }
  // Zero-probability branches can never be selected.
  const std::size_t outcome = rng.uniform() * (p0 + p1) < p0 ? 0 : 1;

  std::vector<Amp> post(state.dim(), 0.0);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (bool(i & bit) == bool(outcome)) post[i] = state[i];
  }
  return MeasurementRecord{outcome, double(outcome), outcome ? p1 : p0,
                           PureState::normalized(n, std::move(post))};
}

struct MeasurementOutcome {
  double value;
  PureState basis;
};

/// Observable given by its eigenvalues m_k and a complete orthonormal
/// eigenbasis |k>.
class MeasurementOperator {
 public:
  explicit MeasurementOperator(std::vector<MeasurementOutcome> outcomes)
      : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw Error("measurement operator has no outcomes");
    const std::size_t d = outcomes_.front().basis.dim();
    if (outcomes_.size() != d) {
      throw Error("measurement basis is incomplete: " +
                  std::to_string(outcomes_.size()) + " states for dimension " +
                  std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (!std::isfinite(outcomes_[i].value)) {
        throw Error("non-finite measurement value");
      }
      if (outcomes_[i].basis.dim() != d) {
        throw Error("measurement basis states differ in dimension");
      }
      for (std::size_t j = 0; j <= i; ++j) {
        const Amp ip = inner_product(outcomes_[i].basis, outcomes_[j].basis);
        if (std::abs(ip - (i == j ? 1.0 : 0.0)) > tol::kConstruct) {
          throw Error("measurement basis is not orthonormal");
        }
      }
    }
  }

  std::size_t dim() const { return outcomes_.size(); }
  std::span<const MeasurementOutcome> outcomes() const { return outcomes_; }

 private:
  std::vector<MeasurementOutcome> outcomes_;
};

/// <M> = sum_k |<k|psi>|^2 m_k
inline double expectation(const PureState& state, const MeasurementOperator& m) {
  if (state.dim() != m.dim()) {
    throw Error("measurement operator dimension does not match the state");
  }
  double acc = 0.0;
  for (const auto& [value, basis] : m.outcomes()) {
    acc += std::norm(inner_product(basis, state)) * value;
  }
  return acc;
}

/// Tr(rho M) = sum_k m_k <k|rho|k>
inline double expectation(const DensityMatrix& rho,
                          const MeasurementOperator& m) {
  if (rho.dim() != m.dim()) {
    throw Error("measurement operator dimension does not match the state");
  }
  double acc = 0.0;
  for (const auto& [value, basis] : m.outcomes()) {
    Amp kk = 0.0;
    for (std::size_t r = 0; r < rho.dim(); ++r) {
      for (std::size_t c = 0; c < rho.dim(); ++c) {
        kk += std::conj(basis[r]) * rho(r, c) * basis[c];
      }
    }
    acc += kk.real() * value;
  }
  return acc;
}

/// Samples one outcome of `m`; the post-state is |k> carrying the phase of
/// <k|psi>.
inline MeasurementRecord measure(const PureState& state,
                                 const MeasurementOperator& m,
                                 RandomSource& rng) {
  if (state.dim() != m.dim()) {
    throw Error("measurement operator dimension does not match the state");
  }
  std::vector<Amp> amps;
  std::vector<double> probs;
  double total = 0.0;
  for (const auto& o : m.outcomes()) {
    amps.push_back(inner_product(o.basis, state));
    probs.push_back(std::norm(amps.back()));
    total += probs.back();
  }
  const double u = rng.uniform() * total;
  std::size_t k = 0;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    k = i;
    cumulative += probs[i];
    if (u < cumulative) break;
  }
  const auto& chosen = m.outcomes()[k];
  const Amp phase = amps[k] / std::abs(amps[k]);
  std::vector<Amp> post(chosen.basis.amplitudes().begin(),
                        chosen.basis.amplitudes().end());
  for (Amp& a : post) a *= phase;
  return MeasurementRecord{k, chosen.value, probs[k],
                           PureState::normalized(state.n_qubits(), std::move(post))};
}

}  // namespace qaffect
