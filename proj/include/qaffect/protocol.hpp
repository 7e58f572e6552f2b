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

// Message handling for one steering session, independent of transport.
//
// client -> server
//   {"type":"joystick","dx":f,"dy":f,"rot":f,"dt":f}
//   {"type":"config","hand_map":"normal|swapped","collapse_mode":"born|forced","seed":u64}
//   {"type":"finish"}
// server -> client
//   {"type":"state","t":f,"x":f,"y":f,"z":f,"readout":{..},"amplitudes":[..]}
//   {"type":"collapse","outcome":0|1,"t":f}
//   {"type":"score","mean_dev":f,"max_dev":f}
//   {"type":"error","message":s}

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qaffect/affect.hpp"
#include "qaffect/io.hpp"
#include "qaffect/session.hpp"

namespace qaffect {

inline std::string_view to_string(HandMap h) {
  return h == HandMap::Normal ? "normal" : "swapped";
}
inline std::string_view to_string(CollapseMode m) {
  return m == CollapseMode::Born ? "born" : "forced";
}
inline HandMap hand_map_from_string(std::string_view s) {
  if (s == "normal") return HandMap::Normal;
  if (s == "swapped") return HandMap::Swapped;
  throw Error("hand_map must be 'normal' or 'swapped'");
}
inline CollapseMode collapse_mode_from_string(std::string_view s) {
  if (s == "born") return CollapseMode::Born;
  if (s == "forced") return CollapseMode::Forced;
  throw Error("collapse_mode must be 'born' or 'forced'");
}

class SessionProtocol {
 public:
  /// `model` is the predicted path scored against on finish, if any.
  explicit SessionProtocol(const SessionConfig& cfg,
                           std::shared_ptr<const Trajectory> model = nullptr)
      : session_(make_session(cfg)), model_(std::move(model)) {}

  /// Greeting sent when a client connects: the starting state.
  std::vector<json> open() const { return {state_message()}; }

  /// Handles one inbound text frame. Malformed frames produce an error
  /// message and leave the session untouched.
  std::vector<json> handle(std::string_view text) {
    try {
      json msg;
      try {
        msg = json::parse(text);
      } catch (const json::parse_error&) {
        throw Error("message is not valid JSON");
      }
      if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
        throw Error("message needs a string 'type'");
      }
      if (finished_) throw Error("session already finished");
      const auto type = msg["type"].get<std::string>();
      if (type == "joystick") return on_joystick(msg);
      if (type == "config") return on_config(msg);
      if (type == "finish") return on_finish();
      throw Error("unknown message type '" + type + "'");
    } catch (const Error& e) {
      return {json{{"type", "error"}, {"message", e.what()}}};
    }
  }

  bool finished() const { return finished_; }
  const SessionState& session() const { return session_; }
  const std::vector<int>& collapse_outcomes() const { return collapses_; }

 private:
  std::vector<json> on_joystick(const json& msg) {
    const auto read = [&](const char* key, bool required) {
      if (!msg.contains(key)) {
        if (required) throw Error(std::string("joystick: missing '") + key + "'");
        return 0.0;
      }
      return detail::number(msg[key], std::string("joystick ") + key);
    };
    JoystickInput in{read("dx", false), read("dy", false), read("rot", false),
                     read("dt", true)};
    in.validate();  // before the state is moved into session_tick
    session_ = session_tick(std::move(session_), in);
    std::vector<json> out;
    std::optional<json> collapse;
    if (collapse_due(session_)) {
      auto [next, rec] = trigger_collapse(std::move(session_));
      session_ = std::move(next);
      collapses_.push_back(int(rec.outcome_index));
      collapse = json{{"type", "collapse"},
                      {"outcome", rec.outcome_index},
                      {"t", session_.t}};
    }
    out.push_back(state_message());
    if (collapse) out.push_back(std::move(*collapse));
    return out;
  }

  std::vector<json> on_config(const json& msg) {
    // Validate everything before applying anything.
    std::optional<HandMap> hand;
    std::optional<CollapseMode> mode;
    std::optional<std::uint64_t> seed;
    if (msg.contains("hand_map")) {
      hand = hand_map_from_string(detail::field<std::string>(msg, "hand_map", "config"));
    }
    if (msg.contains("collapse_mode")) {
      mode = collapse_mode_from_string(
          detail::field<std::string>(msg, "collapse_mode", "config"));
    }
    if (msg.contains("seed")) {
      if (!msg["seed"].is_number_unsigned()) {
        throw Error("config: seed must be an unsigned integer");
      }
      seed = msg["seed"].get<std::uint64_t>();
    }
    if (hand) session_.hand_map = *hand;
    if (mode) session_.collapse_mode = *mode;
    if (seed) session_.rng = RandomSource(*seed);
    return {};
  }

  std::vector<json> on_finish() {
    finished_ = true;
    if (!model_) return {};
    const DeviationReport r = compare_trajectories(*model_, session_.trajectory);
    return {json{{"type", "score"}, {"mean_dev", r.mean_dev}, {"max_dev", r.max_dev}}};
  }

  json state_message() const {
    const TrajectorySample& s = session_.trajectory.back();
    json amps = json::array();
    for (const Amp& a : session_.register_state.amplitudes()) {
      amps.push_back(amplitude_json(a));
    }
    return {{"type", "state"},
            {"t", s.t},
            {"x", s.x},
            {"y", s.y},
            {"z", s.z},
            {"readout", readout_json(readout(session_.register_state))},
            {"amplitudes", std::move(amps)}};
  }

  SessionState session_;
  std::shared_ptr<const Trajectory> model_;
  std::vector<int> collapses_;
  bool finished_ = false;
};

struct ReplayResult {
  Trajectory trajectory;
  std::vector<int> collapse_outcomes;
  std::vector<json> messages;  // everything the server would have sent
};

/// Feeds a recorded client log (one JSON message per line) through a fresh
/// session.
inline ReplayResult replay_log(const SessionConfig& cfg, std::istream& log,
                               std::shared_ptr<const Trajectory> model = nullptr) {
  SessionProtocol proto(cfg, std::move(model));
  ReplayResult r;
  r.messages = proto.open();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(log, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    for (auto& m : proto.handle(line)) {
      if (m["type"] == "error") {
        throw Error("log line " + std::to_string(lineno) + ": " +
                    m["message"].get<std::string>());
      }
      r.messages.push_back(std::move(m));
    }
  }
  r.trajectory = proto.session().trajectory;
  r.collapse_outcomes = proto.collapse_outcomes();
  return r;
}

}  // namespace qaffect
