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

// Replication driver, objective metrics and CSV export.

#ifndef MABN_HARNESS_H_
#define MABN_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mabn/config.h"
#include "mabn/environment.h"
#include "mabn/exposure.h"
#include "mabn/inference.h"
#include "mabn/network.h"
#include "mabn/policy.h"

namespace mabn {

inline constexpr const char* kCodeVersion = "mabn 1.0.0";

// Network, clustering, mapping and U_E resolved from a RunConfig. Immutable
// and shared by every replication.
struct Experiment {
  RunConfig config;
  Network network;
  Clustering clustering;
  ExposureMapping mapping;
  LegitimateArmIndex index;
};

// Throws ConfigError for invalid configurations; enumeration errors
// (ConditionViolation, BudgetExceeded, IsolatedUnitError) propagate.
Experiment prepare_experiment(const RunConfig& config);

struct RoundRow {
  std::int64_t t = 0;
  int m = 0;
  std::size_t arm = 0;
  double delta_t = 0.0;
  double pi_mad_selected = 0.0;
  double reward = 0.0;
  double expected_reward_selected = 0.0;
  double best_expected_reward = 0.0;
  double cum_regret_expected = 0.0;
  double cum_regret_realized = 0.0;
};

struct CsRow {
  std::int64_t t = 0;
  ArmPair pair;
  double tau_hat_bar = 0.0;
  double width = 0.0;
  double true_tau_bar = 0.0;
  bool covered = false;
};

struct PairEstimate {
  ArmPair pair;
  double estimate = 0.0;  // Delta_hat_T
  double truth = 0.0;     // tau_bar_T
  double width = 0.0;     // C_hat_T
};

// Ground-truth means retained for the whole run.
struct GroundTruth {
  std::size_t n_arms = 0;
  std::int64_t rounds = 0;
  std::vector<double> means;       // round-major
  std::vector<double> cumulative;  // prefix sums, same layout

  double mean(std::int64_t t, std::size_t arm) const;
  double cumulative_mean(std::int64_t t, std::size_t arm) const;
  double true_ate(std::int64_t t, std::size_t i, std::size_t j) const;
};

struct RunRecord {
  int rep = 0;
  MadSchedule schedule = MadSchedule::uniform();
  std::vector<RoundRow> rounds;         // exactly T rows
  std::vector<CsRow> cs_rows;           // snapshots of the requested pairs
  std::vector<PairEstimate> estimates;  // every tracked pair at T
  std::size_t comparator_arm = 0;       // best fixed arm in hindsight
  GroundTruth truth;
  // Filled only when logging probabilities: T x |U_E|, round-major.
  std::vector<double> alg_probs;
  std::vector<double> mad_probs;
  // Running mean-width snapshots of every tracked pair at the CS log points,
  // pair-major within each point. Used for the widest-pair trajectory.
  std::vector<std::int64_t> width_times;
  std::vector<double> width_snapshots;
};

struct ReplicationOptions {
  // Pairs whose CS rows are recorded at the log points; nullopt = all tracked.
  std::optional<std::vector<ArmPair>> cs_pairs;
  std::int64_t cs_stride = 1;
  bool log_probabilities = false;
};

// Runs rounds 1..T of one schedule. Fully determined by
// (config, master_seed, rep_index). Module errors are rethrown as ReplicationError
// carrying the round index.
RunRecord run_replication(const Experiment& experiment,
                          const MadSchedule& schedule, int rep_index,
                          const ReplicationOptions& options = {});

enum class RegretMode { kExpected, kRealized };

// Best fixed arm in hindsight over rounds 1..T (lowest index on ties).
std::size_t hindsight_best_arm(const GroundTruth& truth);

// Cumulative regret at every t against the horizon-T comparator (or the
// per-round best mean when per_round_comparator is set). Throws StateError
// when ground truth does not cover the record.
std::vector<double> cumulative_regret(const RunRecord& record,
                                      const GroundTruth& truth, RegretMode mode,
                                      bool per_round_comparator = false);

// max over tracked pairs of |Delta_hat_T - tau_bar_T|. Throws StateError
// unless every pair i < j of U_E is tracked.
double max_ate_error(const RunRecord& record, const GroundTruth& truth);

// e * sqrt(R). Throws ParameterError for negative inputs.
double pareto_product(double regret_final, double max_ate_error_mean);

struct SummaryRow {
  std::string algo;
  std::optional<double> alpha;  // EXP3-N-CS only
  int rep = 0;
  double final_regret_expected = 0.0;
  double max_ate_error = 0.0;
  std::size_t widest_pair_i = 0;
  std::size_t widest_pair_j = 0;
  double final_width = 0.0;
  double pareto_product = 0.0;  // max_ate_error * sqrt(max(regret, 0))
};

struct VariantSummary {
  MadSchedule schedule = MadSchedule::uniform();
  std::vector<SummaryRow> rows;  // one per replication, rep order
  ArmPair widest_pair;
  // Regret trajectory statistics at `regret_times`.
  std::vector<std::int64_t> regret_times;
  std::vector<double> regret_mean;
  std::vector<double> regret_se;
  // Mean width of the widest pair at `width_times`.
  std::vector<std::int64_t> width_times;
  std::vector<double> width_mean;

  double mean_final_regret() const;
  double se_final_regret() const;
  double mean_max_ate_error() const;
  std::vector<double> max_ate_errors() const;
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};

// Linear-interpolated quartiles (type 7). Throws ParameterError on empty input.
Quartiles quartiles(std::vector<double> values);

// Sample mean and standard error (sample sd / sqrt(n)).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(const std::vector<double>& values);

struct VariantRunOptions {
  // Directory for this variant's rounds.csv / cs.csv / probs.csv. Empty
  // disables CSV output.
  std::string directory;
  // Called once per finished replication, in rep order.
  std::function<void(const RunRecord&)> on_record;
};

// Runs all replications of one schedule (in parallel when config.threads > 1),
// aggregates them in rep order and optionally writes the per-variant CSVs.
VariantSummary run_variant(const Experiment& experiment,
                           const MadSchedule& schedule,
                           const VariantRunOptions& options = {});

// Every variant of the configuration, written under `directory` as
//   summary.csv, trajectory.csv, manifest.json, <label>/{rounds,cs}.csv.
// A configuration with a single schedule writes rounds.csv and cs.csv at the
// top level instead. Throws IoError.
std::vector<VariantSummary> run_experiment(const Experiment& experiment,
                                           const std::string& directory);

// ----------------------------------------------------------------- export

// CSV headers, byte-exact.
inline constexpr const char* kRoundsHeader =
    "rep,t,m,arm,delta_t,pi_mad_selected,reward,expected_reward_selected,"
    "best_expected_reward,cum_regret_expected,cum_regret_realized";
inline constexpr const char* kCsHeader =
    "rep,t,pair_i,pair_j,tau_hat_bar,width,true_tau_bar,covered";
inline constexpr const char* kSummaryHeader =
    "algo,alpha,rep,final_regret_expected,max_ate_error,widest_pair_i,"
    "widest_pair_j,final_width,pareto_product";
inline constexpr const char* kTrajectoryHeader =
    "algo,alpha,kind,t,mean,se";

// 17 significant digits.
std::string format_double(double value);

std::string rounds_csv_rows(const RunRecord& record, std::int64_t stride);
std::string cs_csv_rows(const RunRecord& record);
std::string summary_csv(const std::vector<VariantSummary>& summaries);
std::string trajectory_csv(const std::vector<VariantSummary>& summaries);

// Parses summary.csv back into rows. Throws IoError on schema mismatch.
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

std::string manifest_json(const Experiment& experiment,
                          const std::vector<VariantSummary>& summaries,
                          const std::vector<std::string>& warnings);

// Writes `content` to `path` (creating parent directories). Throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace mabn

#endif  // MABN_HARNESS_H_
