// Copyright 2026 The MABN Authors.
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


#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <optional>

#include "CLI11.hpp"
#include "mabn/config.h"
#include "mabn/errors.h"
#include "mabn/exposure.h"
#include "mabn/harness.h"

namespace mabn::cli {
namespace {

struct ConfigSource {
  std::string config_path;
  std::string preset;
  std::optional<std::string> alpha;
  std::optional<std::string> algo;
  std::optional<std::string> horizon;
  std::optional<std::string> reps;
  std::optional<std::string> seed;
  std::optional<std::string> threads;
  std::optional<std::string> out;
  std::vector<std::string> sets;
};

void add_source_options(CLI::App* cmd, ConfigSource& src, bool require_one) {
  auto* config = cmd->add_option("--config", src.config_path, "configuration document (JSON)");
  auto* preset = cmd->add_option("--preset", src.preset, "named preset");
  config->excludes(preset);
  preset->excludes(config);
  if (require_one) {
    cmd->callback([cmd] {
      if (cmd->count("--config") + cmd->count("--preset") != 1) {
        throw CLI::ValidationError("exactly one of --config or --preset is required");
      }
    });
  }
}

void add_run_options(CLI::App* cmd, ConfigSource& src) {
  cmd->add_option("--alpha", src.alpha, "single EXP3-N-CS variant with this alpha");
  cmd->add_option("--algo", src.algo, "standard, uniform or exp3_n_cs");
  cmd->add_option("--horizon", src.horizon, "rounds per replication");
  cmd->add_option("--reps", src.reps, "number of replications");
  cmd->add_option("--seed", src.seed, "master seed");
  cmd->add_option("--threads", src.threads, "worker threads");
  cmd->add_option("--out", src.out, "output directory");
  cmd->add_option("--set", src.sets, "override key=value (repeatable)");
}

void apply_overrides(RunConfig& c, const ConfigSource& src) {
  if (src.horizon) apply_override(c, "horizon", *src.horizon);
  if (src.reps) apply_override(c, "reps", *src.reps);
  if (src.seed) apply_override(c, "seed", *src.seed);
  if (src.threads) apply_override(c, "threads", *src.threads);
  if (src.alpha) {
    if (src.algo && *src.algo != "exp3_n_cs") {
      throw ConfigError("algo", "--alpha only applies to exp3_n_cs");
    }
    apply_override(c, "alpha", *src.alpha);
  } else if (src.algo) {
    apply_override(c, "algo", *src.algo);
  }
  for (const std::string& kv : src.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(kv, "overrides must have the form key=value");
    }
    apply_override(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (src.out) {
    c.output.directory = *src.out;
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    c.output.directory = env;
  }
}

RunConfig resolve(const ConfigSource& src, const std::string& fallback_preset = {}) {
  RunConfig c;
  if (!src.config_path.empty()) {
    c = load_config(src.config_path);
  } else {
    c = preset_instance(src.preset.empty() ? fallback_preset : src.preset);
  }
  apply_overrides(c, src);
  return c;
}

// Errors raised while resolving a configuration count as configuration
// errors (exit 2); the same errors during a run are runtime failures.
template <typename Fn>
int config_stage(std::ostream& err, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StructureError& e) {
    err << "configuration error: network: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConditionViolation& e) {
    err << "configuration error: mapping: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    err << "configuration error: witness_budget: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IsolatedUnitError& e) {
    err << "configuration error: mapping: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

template <typename Fn>
int runtime_stage(std::ostream& err, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

void print_summaries(std::ostream& out, const std::vector<VariantSummary>& summaries) {
  for (const auto& s : summaries) {
    out << s.schedule.label() << ": regret " << format_double(s.mean_final_regret())
        << " (se " << format_double(s.se_final_regret()) << "), max ATE error "
        << format_double(s.mean_max_ate_error()) << ", widest pair (" << s.widest_pair.i
        << "," << s.widest_pair.j << ")\n";
  }
}

int run_config(const RunConfig& config, const std::string& directory, std::ostream& out,
               std::ostream& err) {
  std::optional<Experiment> experiment;
  if (int rc = config_stage(err, [&] { experiment.emplace(prepare_experiment(config)); })) {
    return rc;
  }
  return runtime_stage(err, [&] {
    out << "|U_E| = " << experiment->index.size() << ", writing " << directory << '\n';
    print_summaries(out, run_experiment(*experiment, directory));
  });
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Adversarial bandits with network interference"};
  app.name("mabn");
  app.require_subcommand(1);

  ConfigSource run_src;
  auto* run = app.add_subcommand("run", "run a configuration and export CSVs");
  add_source_options(run, run_src, true);
  add_run_options(run, run_src);

  app.add_subcommand("presets", "list preset names");

  ConfigSource validate_src;
  auto* validate_cmd =
      app.add_subcommand("validate", "check a configuration without writing files");
  add_source_options(validate_cmd, validate_src, true);
  add_run_options(validate_cmd, validate_src);
  bool print_resolved = false;
  validate_cmd->add_flag("--print", print_resolved, "print the resolved configuration");

  ConfigSource arms_src;
  auto* arms = app.add_subcommand("arms", "list the legitimate exposure super arms");
  add_source_options(arms, arms_src, true);
  arms->add_option("--set", arms_src.sets, "override key=value (repeatable)");

  ConfigSource repro_src;
  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce", "run the figure experiments");
  reproduce->add_option("figure", figure, "fig2 or appendixF")
      ->required()
      ->check(CLI::IsMember({"fig2", "appendixF"}));
  reproduce->add_option("--horizon", repro_src.horizon, "rounds per replication");
  reproduce->add_option("--reps", repro_src.reps, "number of replications");
  reproduce->add_option("--seed", repro_src.seed, "master seed");
  reproduce->add_option("--threads", repro_src.threads, "worker threads");
  reproduce->add_option("--out", repro_src.out, "output directory");
  reproduce->add_option("--set", repro_src.sets, "override key=value (repeatable)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  if (app.got_subcommand("presets")) {
    for (const auto& name : preset_names()) out << name << '\n';
    return kExitOk;
  }

  if (app.got_subcommand(run)) {
    RunConfig config;
    if (int rc = config_stage(err, [&] { config = resolve(run_src); })) return rc;
    return run_config(config, config.output.directory, out, err);
  }

  if (app.got_subcommand(validate_cmd)) {
    return config_stage(err, [&] {
      const RunConfig config = resolve(validate_src);
      const Experiment e = prepare_experiment(config);
      out << "ok: " << config.topology.n_units << " units, "
          << e.clustering.cluster_count() << " clusters, |U_E| = " << e.index.size()
          << ", " << config.schedules.size() << " variant(s), horizon " << config.horizon
          << ", " << config.replications << " replication(s)\n";
      if (print_resolved) out << to_json(config) << '\n';
    });
  }

  if (app.got_subcommand(arms)) {
    return config_stage(err, [&] {
      const Experiment e = prepare_experiment(resolve(arms_src));
      out << dump_arms(e.index);
    });
  }

  // reproduce
  std::vector<std::string> presets;
  if (figure == "fig2") {
    presets = {"main_scaled"};
  } else {
    presets = {"instance1", "instance2", "instance3", "instance4"};
  }
  std::vector<RunConfig> configs;
  if (int rc = config_stage(err, [&] {
        for (const auto& name : presets) {
          ConfigSource src = repro_src;
          src.preset = name;
          configs.push_back(resolve(src));
        }
      })) {
    return rc;
  }
  for (const RunConfig& config : configs) {
    std::string directory = config.output.directory;
    if (configs.size() > 1) directory += "/" + config.preset;
    if (int rc = run_config(config, directory, out, err)) return rc;
  }
  return kExitOk;
}

}  // namespace mabn::cli
