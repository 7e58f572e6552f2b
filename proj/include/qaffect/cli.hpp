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

// Command-line front end. Exit codes: 0 success, 1 domain error (bad file,
// broken invariant), 2 usage error.

#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qaffect/affect.hpp"
#include "qaffect/io.hpp"
#include "qaffect/network.hpp"
#include "qaffect/protocol.hpp"
#include "qaffect/server.hpp"
#include "qaffect/session.hpp"

namespace qaffect {

inline constexpr unsigned short kDefaultPort = 8080;
inline constexpr const char* kPortEnv = "QAFFECT_PORT";

namespace cli {

inline std::string ket(bool bit) { return bit ? "|1>" : "|0>"; }

inline void print_traits_table(std::ostream& out, bool as_json) {
  const auto rows = traits_table();
  if (as_json) {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"good", int(r.good)},
                   {"bad", int(r.bad)},
                   {"interaction", int(r.result.interaction)},
                   {"tendency", std::string(to_string(r.result.tendency))}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << std::left << std::setw(8) << "Good" << std::setw(8) << "Bad"
      << std::setw(14) << "Interaction" << "Action tendency\n";
  for (const auto& r : rows) {
    out << std::setw(8) << ket(r.good) << std::setw(8) << ket(r.bad)
        << std::setw(14) << ket(r.result.interaction)
        << to_string(r.result.tendency) << '\n';
  }
}

inline void print_satisfaction_table(std::ostream& out, bool as_json) {
  const auto rows = satisfaction_table();
  if (as_json) {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"involvement", int(r.involvement)},
                   {"distance", int(r.distance)},
                   {"satisfaction", state_json(r.verdict.state)},
                   {"remark", std::string(to_string(r.verdict.label))}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << std::left << std::setw(13) << "Involvement" << std::setw(10)
      << "Distance" << std::setw(34) << "Satisfaction" << "Remarks\n";
  for (const auto& r : rows) {
    out << std::setw(13) << ket(r.involvement) << std::setw(10)
        << ket(r.distance) << std::setw(34) << format_ket(r.verdict.state)
        << to_string(r.verdict.label) << '\n';
  }
}

inline void print_hri_table(std::ostream& out, bool as_json) {
  const auto rows = hri_table();
  if (as_json) {
    json j = json::array();
    for (const auto& r : rows) {
      json probs = json::object();
      for (std::size_t i = 0; i < r.result.outcomes.size(); ++i) {
        if (r.result.outcomes[i] > 1e-12) {
          probs[basis_label(i, 2)] = r.result.outcomes[i];
        }
      }
      j.push_back({{"human", int(r.human)},
                   {"robot", int(r.robot)},
                   {"state", state_json(r.result.entangled)},
                   {"outcomes", std::move(probs)}});
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << std::left << std::setw(15) << "|Human Robot>" << std::setw(32)
      << "Entangled state" << "Outcome probabilities\n";
  for (const auto& r : rows) {
    std::ostringstream probs;
    for (std::size_t i = 0; i < r.result.outcomes.size(); ++i) {
      if (r.result.outcomes[i] > 1e-12) {
        probs << basis_label(i, 2) << ": " << r.result.outcomes[i] << "  ";
      }
    }
    out << std::setw(15)
        << ("|" + std::to_string(r.human) + std::to_string(r.robot) + ">")
        << std::setw(32) << format_ket(r.result.entangled, 6) << probs.str()
        << '\n';
  }
}

/// Samples every qubit of `state` in order, returning the bit string.
inline std::string sample_register(const PureState& state, RandomSource& rng) {
  PureState s = state;
  std::string bits;
  for (unsigned q = 0; q < state.n_qubits(); ++q) {
    auto rec = measure_qubit(s, q, rng);
    bits.push_back(rec.outcome_index ? '1' : '0');
    s = std::move(rec.post_state);
  }
  return bits;
}

inline void write_text(const std::string& path, std::ostream& fallback,
                       const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

}  // namespace cli

/// Runs the command line given without the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Affective-reflective qubit simulator", "qaffect"};
  app.require_subcommand(1);

  // bloch
  double theta = 0.0, phi = 0.0, threshold = kDefaultClassifyThreshold;
  bool degrees = false;
  auto* bloch = app.add_subcommand("bloch", "Angles to Bloch point, readout and labels");
  bloch->add_option("--theta", theta, "Polar angle")->required();
  bloch->add_option("--phi", phi, "Azimuth")->required();
  bloch->add_flag("--degrees", degrees, "Angles are in degrees");
  bloch->add_option("--threshold", threshold, "Classification threshold")
      ->capture_default_str();

  // circuit run
  std::string circuit_file, input_label;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  auto* circuit = app.add_subcommand("circuit", "Circuit tools");
  circuit->require_subcommand(1);
  auto* circuit_run = circuit->add_subcommand("run", "Run a JSON circuit");
  circuit_run->add_option("file", circuit_file, "Circuit JSON")->required();
  circuit_run->add_option("--input", input_label, "Input basis label, e.g. 00");
  circuit_run->add_option("--shots", shots, "Sample the output this many times");
  circuit_run->add_option("--seed", seed, "Random seed")->capture_default_str();

  // table
  std::string table_kind;
  bool table_json = false;
  auto* table = app.add_subcommand("table", "Regenerate an appraisal truth table");
  table->add_option("kind", table_kind, "traits | satisfaction | hri")
      ->required()
      ->check(CLI::IsMember({"traits", "satisfaction", "hri"}));
  table->add_flag("--json", table_json, "Emit JSON");

  // network check
  std::string network_file, metric = "dissatisfaction";
  double danger_threshold = 0.5;
  auto* network = app.add_subcommand("network", "Transition network tools");
  network->require_subcommand(1);
  auto* network_check = network->add_subcommand("check", "Report dangerous states");
  network_check->add_option("file", network_file, "Network JSON")->required();
  network_check->add_option("--metric", metric)->capture_default_str();
  network_check->add_option("--threshold", danger_threshold)->capture_default_str();

  // predict
  std::string script_file, output_file;
  double dt_override = 0.0;
  auto* predict = app.add_subcommand("predict", "Model trajectory from a script");
  predict->add_option("script", script_file, "Script JSON")->required();
  predict->add_option("--dt", dt_override, "Sample interval (overrides the script)");
  predict->add_option("-o,--output", output_file, "CSV path (default stdout)");

  // compare
  std::string model_csv, human_csv;
  auto* compare = app.add_subcommand("compare", "Score a human path against a model path");
  compare->add_option("model", model_csv, "Model trajectory CSV")->required();
  compare->add_option("human", human_csv, "Human trajectory CSV")->required();

  // session flags shared by serve and replay
  SessionConfig cfg;
  std::string model_script, hand = "normal", mode = "born";
  const auto session_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--omega", cfg.omega, "Angular speed per unit deflection (rad/s)")
        ->capture_default_str();
    sub->add_option("--collapse-threshold", cfg.collapse_threshold,
                    "Accumulated rotation that commits a choice (rad)")
        ->capture_default_str();
    sub->add_option("--model", model_script, "Model script JSON to score against");
    sub->add_option("--hand-map", hand)->check(CLI::IsMember({"normal", "swapped"}));
    sub->add_option("--collapse-mode", mode)->check(CLI::IsMember({"born", "forced"}));
  };

  // serve
  unsigned short port = 0;
  std::string address = "0.0.0.0", static_dir;
  auto* serve = app.add_subcommand("serve", "Start the WebSocket session service");
  auto* port_opt = serve->add_option("--port", port, "Listen port (default 8080, or $QAFFECT_PORT)");
  serve->add_option("--address", address)->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Directory of browser assets to serve");
  session_flags(serve);

  // replay
  std::string log_file;
  auto* replay = app.add_subcommand("replay", "Replay a recorded client log to a trajectory CSV");
  replay->add_option("log", log_file, "Log of client messages, one JSON per line")->required();
  replay->add_option("-o,--output", output_file, "CSV path (default stdout)");
  session_flags(replay);

  std::vector<const char*> argv{"qaffect"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (bloch->parsed()) {
      if (degrees) {
        theta *= std::numbers::pi / 180.0;
        phi *= std::numbers::pi / 180.0;
      }
      const PureState s = pure_from_angles(theta, phi);
      const PsychReadout r = readout(s);
      const json j{{"state", state_json(s)},
                   {"bloch", bloch_json(bloch_from_pure(s))},
                   {"readout", readout_json(r)},
                   {"labels", labels_json(classify(r, threshold))}};
      out << j.dump(2) << '\n';
    } else if (circuit_run->parsed()) {
      const Circuit c = circuit_from_json(load_json_file(circuit_file));
      const PureState in = input_label.empty() ? basis_state(c.n_qubits(), 0)
                                               : basis_from_label(input_label);
      const PureState result = run_circuit(c, in);
      json j{{"input", basis_label(*basis_index(in), in.n_qubits())}};
      if (shots > 0) {
        RandomSource rng(seed);
        std::map<std::string, std::size_t> hist;
        for (std::size_t i = 0; i < shots; ++i) ++hist[cli::sample_register(result, rng)];
        j["shots"] = shots;
        j["seed"] = seed;
        j["histogram"] = hist;
      } else {
        json probs = json::object();
        const auto p = probabilities(result);
        for (std::size_t i = 0; i < p.size(); ++i) {
          probs[basis_label(i, result.n_qubits())] = p[i];
        }
        j["state"] = state_json(result);
        j["ket"] = format_ket(result);
        j["probabilities"] = std::move(probs);
      }
      out << j.dump(2) << '\n';
    } else if (table->parsed()) {
      if (table_kind == "traits") cli::print_traits_table(out, table_json);
      if (table_kind == "satisfaction") cli::print_satisfaction_table(out, table_json);
      if (table_kind == "hri") cli::print_hri_table(out, table_json);
    } else if (network_check->parsed()) {
      const auto net = network_from_json(load_json_file(network_file));
      out << danger_json(detect_danger(net, metric, danger_threshold)).dump(2) << '\n';
    } else if (predict->parsed()) {
      const ModelScript script = script_from_json(load_json_file(script_file));
      std::ostringstream csv;
      write_trajectory_csv(
          csv, predict_trajectory(script.points, dt_override > 0.0 ? dt_override : script.dt));
      cli::write_text(output_file, out, csv.str());
    } else if (compare->parsed()) {
      const auto r = compare_trajectories(load_trajectory_csv(model_csv),
                                          load_trajectory_csv(human_csv));
      out << deviation_json(r).dump(2) << '\n';
    } else if (serve->parsed() || replay->parsed()) {
      cfg.hand_map = hand_map_from_string(hand);
      cfg.collapse_mode = collapse_mode_from_string(mode);
      make_session(cfg);  // validates omega and threshold up front
      std::shared_ptr<const Trajectory> model;
      if (!model_script.empty()) {
        const ModelScript s = script_from_json(load_json_file(model_script));
        model = std::make_shared<const Trajectory>(predict_trajectory(s.points, s.dt));
      }
      if (replay->parsed()) {
        std::ifstream log(log_file);
        if (!log) throw Error("cannot open '" + log_file + "'");
        const ReplayResult r = replay_log(cfg, log, model);
        std::ostringstream csv;
        write_trajectory_csv(csv, r.trajectory);
        cli::write_text(output_file, out, csv.str());
        for (const auto& m : r.messages) {
          if (m["type"] == "score") err << m.dump() << '\n';
        }
      } else {
        if (port_opt->count() == 0) {
          port = kDefaultPort;
          if (const char* env = std::getenv(kPortEnv)) {
            try {
              const int v = std::stoi(env);
              if (v < 0 || v > 65535) throw std::out_of_range(env);
              port = static_cast<unsigned short>(v);
            } catch (const std::exception&) {
              err << "invalid " << kPortEnv << " value '" << env << "'\n";
              return 2;
            }
          }
        }
        SessionServer server(ServerOptions{cfg, model, static_dir});
        const unsigned short bound = server.listen(address, port);
        out << "listening on " << address << ':' << bound << std::endl;
        server.run();
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const boost::system::system_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qaffect
