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

#include "mabn/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mabn/errors.h"
#include "mabn/random.h"

namespace mabn {
namespace {

namespace fs = std::filesystem;

ExposureMapping build_mapping(const MappingSpec& spec,
                              const Clustering& clustering) {
  switch (spec.kind) {
    case MappingKind::kPerUnitArm:
      return ExposureMapping::per_unit_arm(spec.arm_count);
    case MappingKind::kGlobalSwitchback:
      return ExposureMapping::global_switchback(spec.arm_count);
    case MappingKind::kClusterIndexArm:
      return ExposureMapping::cluster_index_arm(spec.arm_count, clustering);
    case MappingKind::kNeighborFractionThreshold:
      return ExposureMapping::neighbor_fraction_threshold(spec.arm_count,
                                                          spec.threshold);
  }
  throw ConfigError("mapping.kind", "unknown mapping kind");
}

std::vector<ArmPair> tracked_pairs(const Experiment& e) {
  return e.config.tracked_pairs.empty() ? all_pairs(e.index.size())
                                        : e.config.tracked_pairs;
}

bool is_log_point(std::int64_t t, std::int64_t stride, std::int64_t horizon) {
  return t % stride == 0 || t == horizon;
}

std::string alpha_field(const std::optional<double>& alpha) {
  return alpha ? format_double(*alpha) : std::string();
}

std::optional<double> schedule_alpha(const MadSchedule& s) {
  if (s.kind() == MadSchedule::Kind::kPowerLaw) return s.alpha();
  return std::nullopt;
}

// Appends to a file opened once per variant.
class CsvSink {
 public:
  CsvSink() = default;
  void open(const std::string& path, const char* header) {
    path_ = path;
    fs::create_directories(fs::path(path).parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError(path, "cannot open for writing");
    out_ << header << '\n';
    check();
  }
  bool is_open() const { return out_.is_open(); }
  void write(const std::string& chunk) {
    if (!out_.is_open()) return;
    out_ << chunk;
    check();
  }
  void close() {
    if (!out_.is_open()) return;
    out_.close();
    if (!out_) throw IoError(path_, "write failed");
  }

 private:
  void check() {
    if (!out_) throw IoError(path_, "write failed");
  }
  std::string path_;
  std::ofstream out_;
};

// Runs `count` replications starting at `first`, at most `threads` at a time,
// and hands the records to `sink` in rep order.
void run_batch(const Experiment& e, const MadSchedule& schedule, int first,
               int count, const ReplicationOptions& options,
               const std::function<void(RunRecord&)>& sink) {
  const int threads = std::max(1, e.config.threads);
  for (int start = first; start < first + count; start += threads) {
    const int n = std::min(threads, first + count - start);
    std::vector<RunRecord> records(n);
    if (n == 1) {
      records[0] = run_replication(e, schedule, start, options);
    } else {
      std::vector<std::exception_ptr> errors(n);
      std::vector<std::thread> workers;
      workers.reserve(n);
      for (int k = 0; k < n; ++k) {
        workers.emplace_back([&, k] {
          try {
            records[k] = run_replication(e, schedule, start + k, options);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
      for (auto& w : workers) w.join();
      for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
    }
    for (auto& r : records) sink(r);
  }
}

std::string probs_csv_rows(const RunRecord& record, std::size_t n_arms) {
  std::string out;
  const std::size_t rounds = record.rounds.size();
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t s = 0; s < n_arms; ++s) {
      out += std::to_string(record.rep);
      out += ',';
      out += std::to_string(r + 1);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += format_double(record.alg_probs[r * n_arms + s]);
      out += ',';
      out += format_double(record.mad_probs[r * n_arms + s]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace

Experiment prepare_experiment(const RunConfig& config) {
  validate(config);
  Network network = build_network(config.topology.n_units, config.topology.edges);
  Clustering clustering = build_clustering(network, config.topology.clusters);
  ExposureMapping mapping = build_mapping(config.mapping, clustering);
  LegitimateArmIndex index = enumerate_legitimate_arms(
      mapping, network, clustering, config.witness_budget);
  for (const ArmPair& p : config.tracked_pairs) {
    if (p.j >= index.size()) {
      throw ConfigError("cs.pairs", "pair (" + std::to_string(p.i) + "," +
                                        std::to_string(p.j) +
                                        ") exceeds the legitimate set size " +
                                        std::to_string(index.size()));
    }
  }
  if (config.environment.kind == EnvironmentSpec::Kind::kAdversarialTrace) {
    for (const auto& row : config.environment.trace) {
      if (row.size() != index.size()) {
        throw ConfigError("environment.means",
                          "rows must have one mean per legitimate arm (" +
                              std::to_string(index.size()) + ")");
      }
    }
  }
  return Experiment{config, std::move(network), std::move(clustering),
                    std::move(mapping), std::move(index)};
}

double GroundTruth::mean(std::int64_t t, std::size_t arm) const {
  if (t < 1 || t > rounds || arm >= n_arms) {
    throw StateError("ground truth does not cover round " + std::to_string(t));
  }
  return means[static_cast<std::size_t>(t - 1) * n_arms + arm];
}

double GroundTruth::cumulative_mean(std::int64_t t, std::size_t arm) const {
  if (t < 1 || t > rounds || arm >= n_arms) {
    throw StateError("ground truth does not cover round " + std::to_string(t));
  }
  return cumulative[static_cast<std::size_t>(t - 1) * n_arms + arm];
}

double GroundTruth::true_ate(std::int64_t t, std::size_t i,
                             std::size_t j) const {
  if (i == j) return 0.0;
  return (cumulative_mean(t, i) - cumulative_mean(t, j)) / static_cast<double>(t);
}

RunRecord run_replication(const Experiment& e, const MadSchedule& schedule,
                          int rep_index, const ReplicationOptions& options) {
  const RunConfig& cfg = e.config;
  const std::size_t n = e.index.size();
  const std::int64_t horizon = cfg.horizon;
  const auto rep = static_cast<std::uint64_t>(rep_index);

  EnvironmentSpec env_spec = cfg.environment;
  {
    RandomStream seeder =
        replication_stream(cfg.master_seed, rep, StreamPurpose::kEnvironment);
    env_spec.seed = seeder();
  }
  Environment env(env_spec, e.index, e.network);
  Exp3NCsPolicy policy(n, schedule, cfg.importance_clip);
  InferenceTracker tracker(n);
  RandomStream policy_rng =
      replication_stream(cfg.master_seed, rep, StreamPurpose::kPolicy);
  RandomStream sampling_rng =
      replication_stream(cfg.master_seed, rep, StreamPurpose::kSampling);
  RandomStream reward_rng =
      replication_stream(cfg.master_seed, rep, StreamPurpose::kReward);

  const std::vector<ArmPair> tracked = tracked_pairs(e);
  const std::vector<ArmPair> cs_pairs = options.cs_pairs.value_or(tracked);
  const std::int64_t cs_stride = std::max<std::int64_t>(1, options.cs_stride);

  RunRecord record;
  record.rep = rep_index;
  record.schedule = schedule;
  record.rounds.reserve(static_cast<std::size_t>(horizon));
  if (options.log_probabilities) {
    record.alg_probs.reserve(static_cast<std::size_t>(horizon) * n);
    record.mad_probs.reserve(static_cast<std::size_t>(horizon) * n);
  }

  std::int64_t t = 1;
  try {
    for (; t <= horizon; ++t) {
      policy.begin_round(t);
      const auto mad = policy.mad_probs();
      const std::size_t arm = policy.select(policy_rng);
      const RealArm& real = sample_real_arm(e.index, arm, sampling_rng);
      const double reward = env.realize_reward(t, arm, real, reward_rng);
      if (options.log_probabilities) {
        const auto alg = policy.alg_probs();
        record.alg_probs.insert(record.alg_probs.end(), alg.begin(), alg.end());
        record.mad_probs.insert(record.mad_probs.end(), mad.begin(), mad.end());
      }
      RoundRow row;
      row.t = t;
      row.m = policy.state().block_index;
      row.arm = arm;
      row.delta_t = policy.current_delta();
      row.pi_mad_selected = mad[arm];
      row.reward = reward;
      row.expected_reward_selected = env.expected_reward(t, arm);
      tracker.update(arm, reward, mad);
      policy.observe(arm, reward);
      record.rounds.push_back(row);

      if (is_log_point(t, cs_stride, horizon)) {
        record.width_times.push_back(t);
        for (const ArmPair& p : tracked) {
          const PairInferenceState s = tracker.pair(p.i, p.j);
          record.width_snapshots.push_back(cs_width(s.variance_proxy, t, cfg.cs));
        }
        for (const ArmPair& p : cs_pairs) {
          const PairInferenceState s = tracker.pair(p.i, p.j);
          const CsInterval ci = cs_interval(s, cfg.cs);
          CsRow cs;
          cs.t = t;
          cs.pair = p;
          cs.tau_hat_bar = ci.center;
          cs.width = ci.width;
          cs.true_tau_bar = env.true_ate(t, p.i, p.j);
          cs.covered = std::abs(ci.center - cs.true_tau_bar) <= ci.width;
          record.cs_rows.push_back(cs);
        }
      }
    }
  } catch (const Error& err) {
    throw ReplicationError(t, err.what());
  }

  GroundTruth& truth = record.truth;
  truth.n_arms = n;
  truth.rounds = horizon;
  truth.means.resize(static_cast<std::size_t>(horizon) * n);
  truth.cumulative.resize(truth.means.size());
  for (std::int64_t r = 1; r <= horizon; ++r) {
    const auto m = env.means_at(r);
    const auto c = env.cumulative_means(r);
    std::copy(m.begin(), m.end(), truth.means.begin() + (r - 1) * n);
    std::copy(c.begin(), c.end(), truth.cumulative.begin() + (r - 1) * n);
  }

  record.comparator_arm = hindsight_best_arm(truth);
  const auto expected =
      cumulative_regret(record, truth, RegretMode::kExpected, cfg.per_round_comparator);
  const auto realized =
      cumulative_regret(record, truth, RegretMode::kRealized, cfg.per_round_comparator);
  for (std::int64_t r = 1; r <= horizon; ++r) {
    RoundRow& row = record.rounds[r - 1];
    if (cfg.per_round_comparator) {
      const auto m = env.means_at(r);
      row.best_expected_reward = *std::max_element(m.begin(), m.end());
    } else {
      row.best_expected_reward = truth.mean(r, record.comparator_arm);
    }
    row.cum_regret_expected = expected[r - 1];
    row.cum_regret_realized = realized[r - 1];
  }

  record.estimates.reserve(tracked.size());
  for (const ArmPair& p : tracked) {
    const PairInferenceState s = tracker.pair(p.i, p.j);
    const CsInterval ci = cs_interval(s, cfg.cs);
    record.estimates.push_back({p, ci.center, truth.true_ate(horizon, p.i, p.j), ci.width});
  }
  return record;
}

std::size_t hindsight_best_arm(const GroundTruth& truth) {
  if (truth.rounds < 1) throw StateError("ground truth is empty");
  std::size_t best = 0;
  for (std::size_t s = 1; s < truth.n_arms; ++s) {
    if (truth.cumulative_mean(truth.rounds, s) >
        truth.cumulative_mean(truth.rounds, best)) {
      best = s;
    }
  }
  return best;
}

std::vector<double> cumulative_regret(const RunRecord& record,
                                      const GroundTruth& truth, RegretMode mode,
                                      bool per_round_comparator) {
  const auto horizon = static_cast<std::int64_t>(record.rounds.size());
  if (truth.rounds < horizon) {
    throw StateError("ground truth covers " + std::to_string(truth.rounds) +
                     " rounds but the record has " + std::to_string(horizon));
  }
  // The comparator is fixed at the record's horizon.
  std::size_t best = 0;
  for (std::size_t s = 1; s < truth.n_arms; ++s) {
    if (truth.cumulative_mean(horizon, s) > truth.cumulative_mean(horizon, best)) {
      best = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(horizon));
  double total = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const RoundRow& row = record.rounds[t - 1];
    double benchmark = truth.mean(t, best);
    if (per_round_comparator) {
      benchmark = truth.mean(t, 0);
      for (std::size_t s = 1; s < truth.n_arms; ++s) {
        benchmark = std::max(benchmark, truth.mean(t, s));
      }
    }
    const double earned = mode == RegretMode::kExpected ? truth.mean(t, row.arm)
                                                        : row.reward;
    total += benchmark - earned;
    out[t - 1] = total;
  }
  return out;
}

double max_ate_error(const RunRecord& record, const GroundTruth& truth) {
  const std::size_t n = truth.n_arms;
  const std::size_t needed = n * (n - 1) / 2;
  std::vector<bool> seen(n * n, false);
  std::size_t covered = 0;
  for (const PairEstimate& p : record.estimates) {
    if (!seen[p.pair.i * n + p.pair.j]) {
      seen[p.pair.i * n + p.pair.j] = true;
      ++covered;
    }
  }
  if (covered != needed) {
    throw StateError("max ATE error needs every pair tracked; " +
                     std::to_string(covered) + " of " + std::to_string(needed) +
                     " are");
  }
  const auto horizon = static_cast<std::int64_t>(record.rounds.size());
  double worst = 0.0;
  for (const PairEstimate& p : record.estimates) {
    worst = std::max(worst,
                     std::abs(p.estimate - truth.true_ate(horizon, p.pair.i, p.pair.j)));
  }
  return worst;
}

double pareto_product(double regret_final, double max_ate_error_mean) {
  if (regret_final < 0.0 || max_ate_error_mean < 0.0) {
    throw ParameterError("pareto product needs nonnegative inputs");
  }
  return max_ate_error_mean * std::sqrt(regret_final);
}

double VariantSummary::mean_final_regret() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.final_regret_expected);
  return mean_se(v).mean;
}

double VariantSummary::se_final_regret() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.final_regret_expected);
  return mean_se(v).se;
}

double VariantSummary::mean_max_ate_error() const {
  return mean_se(max_ate_errors()).mean;
}

std::vector<double> VariantSummary::max_ate_errors() const {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.max_ate_error);
  return v;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw ParameterError("quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

MeanSe mean_se(const std::vector<double>& values) {
  if (values.empty()) throw ParameterError("mean of an empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

VariantSummary run_variant(const Experiment& e, const MadSchedule& schedule,
                           const VariantRunOptions& options) {
  const RunConfig& cfg = e.config;
  const std::int64_t horizon = cfg.horizon;
  const std::vector<ArmPair> tracked = tracked_pairs(e);
  const bool write = !options.directory.empty();

  VariantSummary summary;
  summary.schedule = schedule;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    if (is_log_point(t, cfg.output.rounds_stride, horizon)) summary.regret_times.push_back(t);
  }
  std::vector<double> regret_sum(summary.regret_times.size(), 0.0);
  std::vector<double> regret_sumsq(summary.regret_times.size(), 0.0);
  std::vector<double> width_sum;
  std::vector<std::vector<double>> final_widths;  // rep x pair

  CsvSink rounds_out, cs_out, probs_out;
  if (write) {
    rounds_out.open(options.directory + "/rounds.csv", kRoundsHeader);
    cs_out.open(options.directory + "/cs.csv", kCsHeader);
    if (cfg.output.log_probabilities) {
      probs_out.open(options.directory + "/probs.csv", "rep,t,arm,pi_alg,pi_mad");
    }
  }

  ReplicationOptions rep_options;
  rep_options.cs_stride = cfg.output.cs_stride;
  rep_options.log_probabilities = cfg.output.log_probabilities;
  const bool cs_in_first_pass = write && cfg.output.cs_export == CsExport::kAll;
  if (!cs_in_first_pass) rep_options.cs_pairs = std::vector<ArmPair>{};

  const auto n_arms = e.index.size();
  run_batch(e, schedule, 0, cfg.replications, rep_options, [&](RunRecord& r) {
    if (options.on_record) options.on_record(r);
    if (write) {
      rounds_out.write(rounds_csv_rows(r, cfg.output.rounds_stride));
      if (cs_in_first_pass) cs_out.write(cs_csv_rows(r));
      if (cfg.output.log_probabilities) probs_out.write(probs_csv_rows(r, n_arms));
    }
    for (std::size_t k = 0; k < summary.regret_times.size(); ++k) {
      const double v = r.rounds[summary.regret_times[k] - 1].cum_regret_expected;
      regret_sum[k] += v;
      regret_sumsq[k] += v * v;
    }
    if (summary.width_times.empty()) summary.width_times = r.width_times;
    if (width_sum.empty()) width_sum.assign(r.width_snapshots.size(), 0.0);
    for (std::size_t k = 0; k < width_sum.size(); ++k) width_sum[k] += r.width_snapshots[k];

    SummaryRow row;
    row.algo = schedule.algorithm_name();
    row.alpha = schedule_alpha(schedule);
    row.rep = r.rep;
    row.final_regret_expected = r.rounds.back().cum_regret_expected;
    double worst = 0.0;
    std::vector<double> widths;
    widths.reserve(r.estimates.size());
    for (const PairEstimate& p : r.estimates) {
      worst = std::max(worst, std::abs(p.estimate - p.truth));
      widths.push_back(p.width);
    }
    row.max_ate_error = worst;
    final_widths.push_back(std::move(widths));
    summary.rows.push_back(row);
  });

  // Widest pair: largest mean final width (lowest index on ties).
  const double reps = static_cast<double>(cfg.replications);
  std::size_t widest = 0;
  double widest_mean = -1.0;
  for (std::size_t p = 0; p < tracked.size(); ++p) {
    double sum = 0.0;
    for (const auto& w : final_widths) sum += w[p];
    if (sum / reps > widest_mean) {
      widest_mean = sum / reps;
      widest = p;
    }
  }
  summary.widest_pair = tracked[widest];
  for (std::size_t k = 0; k < summary.rows.size(); ++k) {
    SummaryRow& row = summary.rows[k];
    row.widest_pair_i = summary.widest_pair.i;
    row.widest_pair_j = summary.widest_pair.j;
    row.final_width = final_widths[k][widest];
    row.pareto_product =
        pareto_product(std::max(0.0, row.final_regret_expected), row.max_ate_error);
  }

  for (std::size_t k = 0; k < summary.regret_times.size(); ++k) {
    const double mean = regret_sum[k] / reps;
    double se = 0.0;
    if (cfg.replications > 1) {
      const double var = std::max(0.0, (regret_sumsq[k] - reps * mean * mean) / (reps - 1.0));
      se = std::sqrt(var / reps);
    }
    summary.regret_mean.push_back(mean);
    summary.regret_se.push_back(se);
  }
  for (std::size_t k = 0; k < summary.width_times.size(); ++k) {
    summary.width_mean.push_back(width_sum[k * tracked.size() + widest] / reps);
  }

  if (write && cfg.output.cs_export == CsExport::kWidest) {
    // Replications are deterministic, so a second pass reproduces them and
    // records the widest pair only.
    ReplicationOptions second = rep_options;
    second.cs_pairs = std::vector<ArmPair>{summary.widest_pair};
    second.log_probabilities = false;
    run_batch(e, schedule, 0, cfg.replications, second,
              [&](RunRecord& r) { cs_out.write(cs_csv_rows(r)); });
  }
  rounds_out.close();
  cs_out.close();
  probs_out.close();
  return summary;
}

std::vector<VariantSummary> run_experiment(const Experiment& e,
                                           const std::string& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError(directory, ec.message());
  std::vector<std::string> warnings;
  if (e.config.horizon < static_cast<std::int64_t>(e.index.size())) {
    warnings.push_back("horizon " + std::to_string(e.config.horizon) +
                       " is below |U_E| = " + std::to_string(e.index.size()));
  }
  std::vector<VariantSummary> summaries;
  const bool flat = e.config.schedules.size() == 1;
  for (const MadSchedule& s : e.config.schedules) {
    VariantRunOptions opts;
    opts.directory = flat ? directory : directory + "/" + s.label();
    summaries.push_back(run_variant(e, s, opts));
  }
  write_file(directory + "/summary.csv", summary_csv(summaries));
  write_file(directory + "/trajectory.csv", trajectory_csv(summaries));
  write_file(directory + "/manifest.json", manifest_json(e, summaries, warnings));
  return summaries;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string rounds_csv_rows(const RunRecord& r, std::int64_t stride) {
  std::string out;
  const auto horizon = static_cast<std::int64_t>(r.rounds.size());
  for (const RoundRow& row : r.rounds) {
    if (!is_log_point(row.t, stride, horizon)) continue;
    out += std::to_string(r.rep);
    out += ',';
    out += std::to_string(row.t);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.arm);
    for (double v : {row.delta_t, row.pi_mad_selected, row.reward,
                     row.expected_reward_selected, row.best_expected_reward,
                     row.cum_regret_expected, row.cum_regret_realized}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string cs_csv_rows(const RunRecord& r) {
  std::string out;
  for (const CsRow& row : r.cs_rows) {
    out += std::to_string(r.rep);
    out += ',';
    out += std::to_string(row.t);
    out += ',';
    out += std::to_string(row.pair.i);
    out += ',';
    out += std::to_string(row.pair.j);
    out += ',';
    out += format_double(row.tau_hat_bar);
    out += ',';
    out += format_double(row.width);
    out += ',';
    out += format_double(row.true_tau_bar);
    out += row.covered ? ",1\n" : ",0\n";
  }
  return out;
}

std::string summary_csv(const std::vector<VariantSummary>& summaries) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& s : summaries) {
    for (const SummaryRow& row : s.rows) {
      out += row.algo + "," + alpha_field(row.alpha) + "," + std::to_string(row.rep) +
             "," + format_double(row.final_regret_expected) + "," +
             format_double(row.max_ate_error) + "," +
             std::to_string(row.widest_pair_i) + "," +
             std::to_string(row.widest_pair_j) + "," +
             format_double(row.final_width) + "," +
             format_double(row.pareto_product) + "\n";
    }
  }
  return out;
}

std::string trajectory_csv(const std::vector<VariantSummary>& summaries) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const auto& s : summaries) {
    const std::string prefix =
        s.schedule.algorithm_name() + "," + alpha_field(schedule_alpha(s.schedule)) + ",";
    for (std::size_t k = 0; k < s.regret_times.size(); ++k) {
      out += prefix + "regret," + std::to_string(s.regret_times[k]) + "," +
             format_double(s.regret_mean[k]) + "," + format_double(s.regret_se[k]) + "\n";
    }
    for (std::size_t k = 0; k < s.width_times.size(); ++k) {
      out += prefix + "width," + std::to_string(s.width_times[k]) + "," +
             format_double(s.width_mean[k]) + ",\n";
    }
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw IoError("summary.csv", "header does not match the summary schema");
  }
  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 9) {
      throw IoError("summary.csv", "line " + std::to_string(line_no) +
                                       " has " + std::to_string(f.size()) +
                                       " fields, expected 9");
    }
    try {
      SummaryRow row;
      row.algo = f[0];
      if (!f[1].empty()) row.alpha = std::strtod(f[1].c_str(), nullptr);
      row.rep = std::stoi(f[2]);
      row.final_regret_expected = std::strtod(f[3].c_str(), nullptr);
      row.max_ate_error = std::strtod(f[4].c_str(), nullptr);
      row.widest_pair_i = std::stoul(f[5]);
      row.widest_pair_j = std::stoul(f[6]);
      row.final_width = std::strtod(f[7].c_str(), nullptr);
      row.pareto_product = std::strtod(f[8].c_str(), nullptr);
      rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw IoError("summary.csv", "line " + std::to_string(line_no) + " is malformed");
    }
  }
  return rows;
}

std::string manifest_json(const Experiment& e,
                          const std::vector<VariantSummary>& summaries,
                          const std::vector<std::string>& warnings) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["code_version"] = kCodeVersion;
  doc["config"] = Json::parse(to_json(e.config));
  doc["seeds"] = {
      {"master_seed", e.config.master_seed},
      {"derivation",
       "std::seed_seq over (master_seed, rep_index, purpose) as 32-bit halves; "
       "purposes: policy=1, sampling=2, reward=3, environment=4"}};
  Json arms = Json::array();
  for (const auto& a : e.index.arms()) arms.push_back(a.cluster_profile);
  doc["legitimate_arms"] = {{"count", e.index.size()},
                            {"cluster_profiles", arms},
                            {"candidates_searched", e.index.candidates_searched()}};
  Json variants = Json::array();
  for (const auto& s : summaries) {
    Json v;
    v["label"] = s.schedule.label();
    v["algo"] = s.schedule.algorithm_name();
    if (auto a = schedule_alpha(s.schedule)) v["alpha"] = *a; else v["alpha"] = nullptr;
    v["widest_pair"] = {s.widest_pair.i, s.widest_pair.j};
    variants.push_back(v);
  }
  doc["variants"] = variants;
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::error_code ec;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  if (ec) throw IoError(path, ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.close();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace mabn
