/*
 *   Copyright 2026 The dilatox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line driver: dilatox <task> [--config file] [overrides].

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dilatox/cli/config.hpp"
#include "dilatox/cli/report.hpp"
#include "dilatox/cli/run.hpp"

namespace {

using namespace dilatox;
using namespace dilatox::cli;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigParseError, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilatation structures: axiom checks, tangent limits, fixed points, normal forms"};
  std::string task_pos, task_flag, config_path, model_flag, schedule_flag, out_path, format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::size_t> samples;
  std::optional<int> grid;
  bool timing = false;

  app.add_option("command", task_pos, "check-axioms | tangent | menelaos | normalize");
  app.add_option("--task", task_flag, "same as the positional task");
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--model", model_flag, "kind:key=val,... e.g. euclidean:dim=2,p=inf");
  app.add_option("--seed", seed, "PRNG seed (default: config, then DILATOX_SEED, then 0)");
  app.add_option("--tol", tol, "check tolerance");
  app.add_option("--samples", samples, "sample count");
  app.add_option("--grid", grid, "grid side for the A3/A4 checks");
  app.add_option("--schedule", schedule_flag, "eps0:ratio:steps");
  app.add_option("--out", out_path, "report path (default: stdout)");
  app.add_option("--format", format, "json | csv");
  app.add_flag("--timing", timing, "add wall_time_s to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config_text(read_file(config_path));
    if (!task_pos.empty() && !task_flag.empty() && task_pos != task_flag)
      throw Error(ErrorCode::ConfigParseError, "positional task and --task disagree");
    if (!task_pos.empty()) cfg.task = parse_task(task_pos);
    if (!task_flag.empty()) cfg.task = parse_task(task_flag);
    if (!model_flag.empty()) cfg.model = parse_model_flag(model_flag);
    if (!schedule_flag.empty()) cfg.schedule = parse_schedule_flag(schedule_flag);
    if (seed) cfg.seed = seed;
    if (!cfg.seed) cfg.seed = seed_from_env().value_or(0);
    if (tol) {
      if (!(*tol > 0.0)) throw Error(ErrorCode::ConfigParseError, "--tol must be positive");
      cfg.tol = tol;
    }
    if (samples) cfg.samples = *samples;
    if (grid) cfg.grid = *grid;
    if (cfg.samples == 0 || cfg.grid < 1) throw Error(ErrorCode::ConfigParseError, "--samples and --grid must be positive");
    const Format fmt = parse_format(format);

    Report rep = run(cfg);
    if (timing)
      rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string bytes = emit(rep, fmt);
    if (out_path.empty()) std::cout << bytes << std::flush;
    else write_atomic(out_path, bytes);
    if (!rep.pass) std::cerr << "dilatox: checks failed\n";
    return exit_code(rep);
  } catch (const Error& e) {
    std::cerr << "dilatox: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "dilatox: " << e.what() << "\n";
    return 2;
  }
}
