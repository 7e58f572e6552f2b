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

// Psychological reading of a single-qubit state: the x axis carries
// reflection depth, y carries valence, z separates the fast affective lane
// |0> from the slow reflective lane |1>. Also hosts the three appraisal
// circuits (traits, satisfaction, human-robot valence).

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qaffect/core.hpp"
#include "qaffect/gates.hpp"

namespace qaffect {

/// Eigenvalue +/-1 observables for the three Bloch axes.
struct AxisOperators {
  MeasurementOperator x_op;
  MeasurementOperator y_op;
  MeasurementOperator z_op;
};

inline const AxisOperators& axis_operators() {
  using namespace std::complex_literals;
  static const AxisOperators ops = [] {
    const double s = 1.0 / std::numbers::sqrt2;
    return AxisOperators{
        MeasurementOperator({{+1.0, PureState(1, {s, s})},
                             {-1.0, PureState(1, {s, -s})}}),
        MeasurementOperator({{+1.0, PureState(1, {s, 1i * s})},
                             {-1.0, PureState(1, {s, -1i * s})}}),
        MeasurementOperator({{+1.0, basis_state(1, 0)},
                             {-1.0, basis_state(1, 1)}}),
    };
  }();
  return ops;
}

struct PsychReadout {
  double reflection_depth;      // <X>: +1 deep, -1 shallow
  double valence;               // <Y>: +1 upbeat, -1 down
  double processing_balance;    // <Z>: +1 affective, -1 reflective
  double relevance_affect;      // |alpha|^2
  double relevance_reflection;  // |beta|^2
};

inline PsychReadout readout(const PureState& state) {
  if (state.n_qubits() != 1) {
    throw Error("readout needs a single-qubit state");
  }
  const auto& ops = axis_operators();
  return PsychReadout{expectation(state, ops.x_op),
                      expectation(state, ops.y_op),
                      expectation(state, ops.z_op), std::norm(state.alpha()),
                      std::norm(state.beta())};
}

/// Readout of a mixed single-qubit state (points inside the ball).
inline PsychReadout readout(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error("readout needs a 2x2 density matrix");
  const auto& ops = axis_operators();
  return PsychReadout{expectation(rho, ops.x_op), expectation(rho, ops.y_op),
                      expectation(rho, ops.z_op), rho(0, 0).real(),
                      rho(1, 1).real()};
}

enum class ReadoutLabel {
  DeepReflection,
  ShallowReflection,
  PositiveValence,
  NegativeValence,
  Affective,
  Reflective,
};

inline std::string_view to_string(ReadoutLabel l) {
  switch (l) {
    case ReadoutLabel::DeepReflection: return "DeepReflection";
    case ReadoutLabel::ShallowReflection: return "ShallowReflection";
    case ReadoutLabel::PositiveValence: return "PositiveValence";
    case ReadoutLabel::NegativeValence: return "NegativeValence";
    case ReadoutLabel::Affective: return "Affective";
    case ReadoutLabel::Reflective: return "Reflective";
  }
  return "?";
}

inline constexpr double kDefaultClassifyThreshold = 0.25;

/// Observable effects whose axis component exceeds `threshold` in magnitude,
/// in x, y, z order.
inline std::vector<ReadoutLabel> classify(
    const PsychReadout& r, double threshold = kDefaultClassifyThreshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("classification threshold must lie in (0, 1)");
  }
  std::vector<ReadoutLabel> labels;
  const auto emit = [&](double v, ReadoutLabel pos, ReadoutLabel neg) {
    if (v > threshold) labels.push_back(pos);
    if (v < -threshold) labels.push_back(neg);
  };
  emit(r.reflection_depth, ReadoutLabel::DeepReflection,
       ReadoutLabel::ShallowReflection);
  emit(r.valence, ReadoutLabel::PositiveValence, ReadoutLabel::NegativeValence);
  emit(r.processing_balance, ReadoutLabel::Affective, ReadoutLabel::Reflective);
  return labels;
}

/// Pure state with |alpha|^2 = relevance_affect and relative phase phi.
inline PureState state_from_relevance(double relevance_affect, double phi) {
  if (!(relevance_affect >= 0.0 && relevance_affect <= 1.0)) {
    throw Error("relevance of affect must lie in [0, 1]");
  }
  return pure_from_angles(2.0 * std::acos(std::sqrt(relevance_affect)), phi);
}

// ---------------------------------------------------------------------------
// Appraisal circuits

/// Register |good bad interaction>: CNOT(good -> interaction) then
/// CNOT(bad -> interaction).
inline Circuit traits_circuit() {
  Circuit c(3);
  c.add("CNOT", {0, 2}).add("CNOT", {1, 2});
  return c;
}

/// Register |involvement distance satisfaction>: CV from each control onto
/// the satisfaction qubit.
inline Circuit satisfaction_circuit() {
  Circuit c(3);
  c.add("CV", {0, 2}).add("CV", {1, 2});
  return c;
}

enum class ActionTendency { DoNothing, NegativeApproach, PositiveApproach, Avoid };

inline std::string_view to_string(ActionTendency t) {
  switch (t) {
    case ActionTendency::DoNothing: return "DoNothing";
    case ActionTendency::NegativeApproach: return "NegativeApproach";
    case ActionTendency::PositiveApproach: return "PositiveApproach";
    case ActionTendency::Avoid: return "Avoid";
  }
  return "?";
}

struct TraitAppraisal {
  bool interaction;
  ActionTendency tendency;
};

inline TraitAppraisal trait_appraisal(bool good, bool bad) {
  const std::size_t in = (std::size_t(good) << 2) | (std::size_t(bad) << 1);
  const PureState out = run_circuit(traits_circuit(), basis_state(3, in));
  const auto idx = basis_index(out);
  if (!idx || (*idx & ~std::size_t{1}) != in) {
    throw Error("traits circuit did not produce a basis output");
  }
  // (0,1) and (1,0) share interaction 1, so the tendency keys on the inputs.
  static constexpr std::array<ActionTendency, 4> kTendency{
      ActionTendency::DoNothing, ActionTendency::NegativeApproach,
      ActionTendency::PositiveApproach, ActionTendency::Avoid};
  return TraitAppraisal{bool(*idx & 1), kTendency[in >> 1]};
}

enum class Satisfaction { Unsatisfied, InDoubt, Satisfied };

inline std::string_view to_string(Satisfaction s) {
  switch (s) {
    case Satisfaction::Unsatisfied: return "Unsatisfied";
    case Satisfaction::InDoubt: return "InDoubt";
    case Satisfaction::Satisfied: return "Satisfied";
  }
  return "?";
}

struct SatisfactionVerdict {
  Satisfaction label;
  PureState state;  // the satisfaction qubit
};

inline SatisfactionVerdict satisfaction(bool involvement, bool distance) {
  const std::size_t base =
      (std::size_t(involvement) << 2) | (std::size_t(distance) << 1);
  const PureState out = run_circuit(satisfaction_circuit(), basis_state(3, base));
  // Basis controls pass through untouched, so the output factorizes.
  PureState s(1, {out[base], out[base | 1]});
  const double p0 = std::norm(s[0]);
  Satisfaction label = Satisfaction::InDoubt;
  if (p0 >= 1.0 - tol::kConstruct) label = Satisfaction::Unsatisfied;
  if (p0 <= tol::kConstruct) label = Satisfaction::Satisfied;
  return SatisfactionVerdict{label, std::move(s)};
}

struct HriValence {
  PureState entangled;
  std::vector<double> outcomes;
};

/// Entangles the |Human Robot> valence register.
inline HriValence hri_valence(bool human, bool robot) {
  PureState e = epr_map(basis_state(2, (std::size_t(human) << 1) | robot));
  std::vector<double> p = probabilities(e);
  return HriValence{std::move(e), std::move(p)};
}

// Tables regenerated by running the circuits over every classical input.

struct TraitsRow {
  bool good, bad;
  TraitAppraisal result;
};

struct SatisfactionRow {
  bool involvement, distance;
  SatisfactionVerdict verdict;
};

struct HriRow {
  bool human, robot;
  HriValence result;
};

inline std::vector<TraitsRow> traits_table() {
  std::vector<TraitsRow> rows;
  for (bool g : {false, true}) {
    for (bool b : {false, true}) rows.push_back({g, b, trait_appraisal(g, b)});
  }
  return rows;
}

inline std::vector<SatisfactionRow> satisfaction_table() {
  std::vector<SatisfactionRow> rows;
  for (bool i : {false, true}) {
    for (bool d : {false, true}) rows.push_back({i, d, satisfaction(i, d)});
  }
  return rows;
}

inline std::vector<HriRow> hri_table() {
  std::vector<HriRow> rows;
  for (bool h : {false, true}) {
    for (bool r : {false, true}) rows.push_back({h, r, hri_valence(h, r)});
  }
  return rows;
}

}  // namespace qaffect
