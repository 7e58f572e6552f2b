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

// Joystick-driven steering of a single-qubit register, collapse events,
// model trajectories along great circles, and path deviation scoring.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qaffect/core.hpp"
#include "qaffect/gates.hpp"

namespace qaffect {

enum class HandMap { Normal, Swapped };
enum class CollapseMode { Born, Forced };

struct SessionConfig {
  double omega = std::numbers::pi / 2;               // rad/s per unit deflection
  double collapse_threshold = std::numbers::pi / 2;  // accumulated |rotation|
  HandMap hand_map = HandMap::Normal;
  CollapseMode collapse_mode = CollapseMode::Born;
  std::uint64_t seed = 0;
};

/// One frame of stick deflection. Positive rot is counter-clockwise.
struct JoystickInput {
  double dx = 0.0;
  double dy = 0.0;
  double rot = 0.0;
  double dt = 0.0;

  void validate() const {
    const auto in_unit = [](double v) { return v >= -1.0 && v <= 1.0; };
    if (!in_unit(dx) || !in_unit(dy) || !in_unit(rot)) {
      throw Error("joystick deflection must lie in [-1, 1]");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw Error("joystick dt must be positive");
    }
  }
};

struct TrajectorySample {
  double t;
  double x, y, z;
  std::optional<int> collapsed;

  BlochVector point() const { return BlochVector(x, y, z); }
  bool operator==(const TrajectorySample&) const = default;
};

using Trajectory = std::vector<TrajectorySample>;

struct SessionState {
  PureState register_state;
  Trajectory trajectory;
  RandomSource rng;
  HandMap hand_map;
  CollapseMode collapse_mode;
  double omega;
  double collapse_threshold;
  double rot_accumulator = 0.0;  // sum of |z rotation|
  double rot_signed = 0.0;       // net z rotation, positive counter-clockwise
  double t = 0.0;
};

/// Fresh session at |0> with one sample at t = 0.
inline SessionState make_session(const SessionConfig& cfg) {
  if (!(cfg.omega > 0.0) || !std::isfinite(cfg.omega)) {
    throw Error("angular speed must be positive");
  }
  if (!(cfg.collapse_threshold > 0.0) || !std::isfinite(cfg.collapse_threshold)) {
    throw Error("collapse threshold must be positive");
  }
  SessionState s{basis_state(1, 0), {},        RandomSource(cfg.seed),
                 cfg.hand_map,      cfg.collapse_mode, cfg.omega,
                 cfg.collapse_threshold};
  const BlochVector b = bloch_from_pure(s.register_state);
  s.trajectory.push_back({0.0, b.x(), b.y(), b.z(), std::nullopt});
  return s;
}

inline bool collapse_due(const SessionState& s) {
  return s.rot_accumulator >= s.collapse_threshold;
}

/// Rotates the register by Ry(w dx dt), then Rx(-w dy dt), then Rz(w rot dt),
/// and records the new Bloch point. A swapped hand map exchanges the dx and
/// dy channels.
inline SessionState session_tick(SessionState s, const JoystickInput& in) {
  in.validate();
  const bool swapped = s.hand_map == HandMap::Swapped;
  const double reflect = swapped ? in.dy : in.dx;
  const double affect = swapped ? in.dx : in.dy;

  const std::pair<const char*, double> turns[] = {
      {"Ry", s.omega * reflect * in.dt},
      {"Rx", -s.omega * affect * in.dt},
      {"Rz", s.omega * in.rot * in.dt},
  };
  for (const auto& [axis, angle] : turns) {
    if (angle != 0.0) {
      s.register_state = apply_gate(s.register_state, rotation_gate(axis, angle), {0});
    }
  }
  const double z_turn = s.omega * in.rot * in.dt;
  s.rot_accumulator += std::abs(z_turn);
  s.rot_signed += z_turn;
  s.t += in.dt;
  const BlochVector b = bloch_from_pure(s.register_state);
  s.trajectory.push_back({s.t, b.x(), b.y(), b.z(), std::nullopt});
  return s;
}

/// Commits the register to |0> or |1>. Born mode samples the z measurement;
/// forced mode picks |0> for net counter-clockwise rotation and |1> for
/// clockwise. The latest sample is moved to the collapsed point and marked.
inline std::pair<SessionState, MeasurementRecord> trigger_collapse(
    SessionState s) {
  if (!collapse_due(s)) {
    throw Error("collapse threshold not reached");
  }
  MeasurementRecord rec = [&] {
    if (s.collapse_mode == CollapseMode::Born) {
      return measure_qubit(s.register_state, 0, s.rng);
    }
    const std::size_t outcome = s.rot_signed >= 0.0 ? 0 : 1;
    return MeasurementRecord{outcome, double(outcome),
                             std::norm(s.register_state[outcome]),
                             basis_state(1, outcome)};
  }();
  s.register_state = rec.post_state;
  s.rot_accumulator = 0.0;
  s.rot_signed = 0.0;
  const BlochVector b = bloch_from_pure(s.register_state);
  TrajectorySample& last = s.trajectory.back();
  last.x = b.x();
  last.y = b.y();
  last.z = b.z();
  last.collapsed = int(rec.outcome_index);
  return {std::move(s), std::move(rec)};
}

struct ScriptPoint {
  BlochVector target;
  double duration;  // travel time to the next point; hold time for the last
};

/// Constant-speed great-circle path through the script's targets, sampled
/// every `dt` seconds from t = 0.
inline Trajectory predict_trajectory(const std::vector<ScriptPoint>& script,
                                     double dt) {
  if (script.empty()) throw Error("script has no points");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("dt must be positive");
  std::vector<std::array<double, 3>> unit;
  std::vector<double> starts;
  double total = 0.0;
  for (const auto& p : script) {
    const double len = p.target.length();
    if (std::abs(len - 1.0) > tol::kPurityLength) {
      throw Error("script targets must lie on the sphere surface");
    }
    if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
      throw Error("script durations must be positive");
    }
    unit.push_back({p.target.x() / len, p.target.y() / len, p.target.z() / len});
    starts.push_back(total);
    total += p.duration;
  }
  for (std::size_t i = 1; i < unit.size(); ++i) {
    const auto& a = unit[i - 1];
    const auto& b = unit[i];
    if (a[0] * b[0] + a[1] * b[1] + a[2] * b[2] <= -1.0 + tol::kConstruct) {
      throw Error("consecutive script targets are antipodal");
    }
  }

  const auto slerp = [](const std::array<double, 3>& a,
                        const std::array<double, 3>& b, double f) {
    const double cx = a[1] * b[2] - a[2] * b[1];
    const double cy = a[2] * b[0] - a[0] * b[2];
    const double cz = a[0] * b[1] - a[1] * b[0];
    const double omega = std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz),
                                    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
    std::array<double, 3> out;
    if (omega < 1e-12) {
      out = a;
    } else {
      const double wa = std::sin((1.0 - f) * omega) / std::sin(omega);
      const double wb = std::sin(f * omega) / std::sin(omega);
      for (int k = 0; k < 3; ++k) out[k] = wa * a[k] + wb * b[k];
    }
    const double n = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
    for (double& v : out) v /= n;
    return out;
  };

  const auto steps = static_cast<std::size_t>(std::floor(total / dt + 1e-9));
  Trajectory out;
  out.reserve(steps + 1);
  std::size_t seg = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = double(k) * dt;
    while (seg + 1 < script.size() && t >= starts[seg + 1]) ++seg;
    std::array<double, 3> p = unit[seg];
    if (seg + 1 < script.size()) {
      const double f = (t - starts[seg]) / script[seg].duration;
      p = slerp(unit[seg], unit[seg + 1], std::clamp(f, 0.0, 1.0));
    }
    out.push_back({t, p[0], p[1], p[2], std::nullopt});
  }
  return out;
}

struct DeviationReport {
  double mean_dev;
  double max_dev;
  std::vector<double> per_sample;
  std::size_t n;
};

/// Angle between two Bloch points. Falls back to the chord distance d mapped
/// through arccos(1 - d^2/2) when either point is at the origin.
inline double bloch_angle(const TrajectorySample& a, const TrajectorySample& b) {
  const double na = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
  const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
  if (na > 1e-12 && nb > 1e-12) {
    // atan2 form stays accurate near 0 and pi where arccos loses digits.
    const double cx = a.y * b.z - a.z * b.y;
    const double cy = a.z * b.x - a.x * b.z;
    const double cz = a.x * b.y - a.y * b.x;
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz) / (na * nb),
                      (a.x * b.x + a.y * b.y + a.z * b.z) / (na * nb));
  }
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  const double d2 = dx * dx + dy * dy + dz * dz;
  return std::acos(std::clamp(1.0 - d2 / 2.0, -1.0, 1.0));
}

/// Scores a human path against the model path. Each model sample is paired
/// with the human sample nearest in time (the earlier one on ties).
inline DeviationReport compare_trajectories(const Trajectory& model,
                                            const Trajectory& human) {
  if (model.empty() || human.empty()) {
    throw Error("cannot compare empty trajectories");
  }
  for (std::size_t i = 1; i < human.size(); ++i) {
    if (human[i].t < human[i - 1].t) {
      throw Error("human trajectory timestamps must be ordered");
    }
  }
  DeviationReport r{0.0, 0.0, {}, model.size()};
  r.per_sample.reserve(model.size());
  double sum = 0.0;
  for (const auto& m : model) {
    const auto it = std::lower_bound(
        human.begin(), human.end(), m.t,
        [](const TrajectorySample& s, double t) { return s.t < t; });
    auto best = it == human.end() ? std::prev(it) : it;
    if (it != human.begin() && it != human.end() &&
        m.t - std::prev(it)->t <= it->t - m.t) {
      best = std::prev(it);
    }
    const double dev = bloch_angle(m, *best);
    r.per_sample.push_back(dev);
    sum += dev;
    r.max_dev = std::max(r.max_dev, dev);
  }
  r.mean_dev = std::min(sum / double(model.size()), r.max_dev);
  return r;
}

}  // namespace qaffect
