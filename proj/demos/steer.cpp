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

// Steers a register by hand-written stick input toward the points of a
// model script, then scores the path against the predicted one.

#include <cstdio>
#include <numbers>

#include "qaffect/affect.hpp"
#include "qaffect/session.hpp"

int main() {
  using namespace qaffect;

  // Model: from |0> down to +x in one second, then over to +y.
  const std::vector<ScriptPoint> script{{BlochVector(0, 0, 1), 1.0},
                                        {BlochVector(1, 0, 0), 1.0},
                                        {BlochVector(0, 1, 0), 0.5}};
  const Trajectory model = predict_trajectory(script, 0.05);

  SessionState s = make_session({.collapse_threshold = std::numbers::pi});
  for (int k = 0; k < 20; ++k) s = session_tick(std::move(s), {1.0, 0.0, 0.0, 0.05});
  for (int k = 0; k < 10; ++k) s = session_tick(std::move(s), {0.0, 0.0, 1.0, 0.1});
  if (collapse_due(s)) {
    auto [next, rec] = trigger_collapse(std::move(s));
    std::printf("collapsed to |%zu>\n", rec.outcome_index);
    s = std::move(next);
  }

  const PsychReadout r = readout(s.register_state);
  std::printf("final point (%.3f, %.3f, %.3f)\n", s.trajectory.back().x,
              s.trajectory.back().y, s.trajectory.back().z);
  std::printf("reflection %.3f  valence %.3f  balance %.3f\n", r.reflection_depth,
              r.valence, r.processing_balance);
  for (ReadoutLabel l : classify(r)) std::printf("  %s\n", std::string(to_string(l)).c_str());

  const DeviationReport d = compare_trajectories(model, s.trajectory);
  std::printf("mean deviation %.4f rad, max %.4f rad over %zu samples\n", d.mean_dev,
              d.max_dev, d.n);
}
