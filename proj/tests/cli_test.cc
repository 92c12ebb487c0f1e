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


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "support.h"

namespace mabn {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::scratch_dir;
using testing::split_lines;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliTest, Presets) {
  const Result r = run({"presets"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(split_lines(r.out).size(), 6u);
  EXPECT_EQ(split_lines(r.out)[1], "main_scaled");
}

TEST(CliTest, RunWritesCsvsAndManifest) {
  const std::string dir = scratch_dir("cli_run");
  const Result r = run({"run", "--preset", "main_scaled", "--alpha", "0.1", "--horizon",
                        "10000", "--reps", "100", "--seed", "42", "--out", dir + "/"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"rounds.csv", "cs.csv", "summary.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir + "/" + f)) << f;
  }
  EXPECT_EQ(split_lines(read_file(dir + "/summary.csv")).size(), 101u);
}

TEST(CliTest, AlphaOutOfDomain) {
  const Result r = run({"run", "--preset", "main_scaled", "--alpha", "0.7"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("alpha"), std::string::npos);
  EXPECT_NE(r.err.find("[0, 0.5)"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  const Result flag = run({"run", "--preset", "main", "--frobnicate", "1"});
  EXPECT_EQ(flag.code, 2);
  EXPECT_NE(flag.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"run"}).code, 2);
  EXPECT_EQ(run({"run", "--preset", "main", "--config", "x.json"}).code, 2);
  EXPECT_EQ(run({"reproduce", "fig9"}).code, 2);
  EXPECT_EQ(run({"presets", "validate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliTest, ConfigErrorsNameTheKey) {
  const Result bad_preset = run({"validate", "--preset", "nope"});
  EXPECT_EQ(bad_preset.code, 2);
  EXPECT_NE(bad_preset.err.find("preset"), std::string::npos);
  const Result bad_set = run({"validate", "--preset", "main", "--set", "horizon=-3"});
  EXPECT_EQ(bad_set.code, 2);
  EXPECT_NE(bad_set.err.find("horizon"), std::string::npos);
  EXPECT_EQ(run({"validate", "--preset", "main", "--set", "novalue"}).code, 2);
  EXPECT_EQ(run({"run", "--preset", "main", "--algo", "standard", "--alpha", "0.2"}).code, 2);
  EXPECT_EQ(run({"validate", "--config", "/nonexistent.json"}).code, 2);
}

TEST(CliTest, ValidateWritesNothing) {
  const std::string dir = scratch_dir("cli_validate");
  fs::remove_all(dir);
  const Result r = run({"validate", "--preset", "instance4", "--out", dir, "--print"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("|U_E| = 8"), std::string::npos);
  EXPECT_NE(r.out.find("\"preset\": \"instance4\""), std::string::npos);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(CliTest, Arms) {
  const Result r = run({"arms", "--preset", "instance1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0\n1\n2\n3\n4\n");
}

TEST(CliTest, IdenticalInvocationsAreByteIdentical) {
  const std::string dir = scratch_dir("cli_det");
  const std::vector<std::string> args = {"run",  "--preset", "instance4", "--horizon", "300",
                                         "--reps", "4",      "--out",     dir};
  const auto snapshot = [&] {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file()) {
        files[fs::relative(entry.path(), dir).string()] = read_file(entry.path().string());
      }
    }
    return files;
  };
  ASSERT_EQ(run(args).code, 0);
  const auto first = snapshot();
  fs::remove_all(dir);
  ASSERT_EQ(run(args).code, 0);
  const auto second = snapshot();
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, second);
}

TEST(CliTest, ConfigFileWithOverrides) {
  const std::string dir = scratch_dir("cli_config");
  std::ofstream(dir + "/run.json") << R"({
    "network": {"n_units": 2, "edges": [[1, 2]], "clusters": [[1], [2]]},
    "mapping": {"kind": "per_unit_arm", "arms": 2},
    "environment": {"kind": "unit_fixed_means", "base": [0.2, 0.3],
                    "own_effect": [0.5, 0.1], "spillover": [0.1, 0.2]},
    "schedules": [{"kind": "exp3_n_cs", "alpha": 0.3}],
    "horizon": 100, "replications": 2
  })";
  const Result r = run({"run", "--config", dir + "/run.json", "--set", "horizon=50", "--out",
                        dir + "/out"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(split_lines(read_file(dir + "/out/rounds.csv")).size(), 101u);
}

TEST(CliTest, OutputDirectoryFromEnvironment) {
  const std::string dir = scratch_dir("cli_env");
  ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
  const Result r = run({"run", "--preset", "instance1", "--horizon", "20", "--reps", "1",
                        "--algo", "uniform"});
  ::unsetenv(cli::kOutputDirEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir + "/summary.csv"));
}

TEST(CliTest, RuntimeFailureExitsOne) {
  const std::string dir = scratch_dir("cli_fail");
  std::ofstream(dir + "/file") << "x";
  const Result r = run({"run", "--preset", "instance1", "--horizon", "5", "--reps", "1",
                        "--out", dir + "/file/sub"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("file/sub"), std::string::npos);
}

TEST(CliTest, ReproduceInstancePresets) {
  const std::string dir = scratch_dir("cli_instances");
  const Result r = run({"reproduce", "appendixF", "--reps", "2", "--horizon", "60", "--out", dir});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* inst : {"instance1", "instance2", "instance3", "instance4"}) {
    EXPECT_EQ(split_lines(read_file(dir + "/" + inst + "/summary.csv")).size(), 15u) << inst;
  }
}

TEST(CliTest, ReproduceFigure) {
  const std::string dir = scratch_dir("cli_fig2");
  const Result r = run({"reproduce", "fig2", "--reps", "2", "--horizon", "100", "--out", dir});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(split_lines(read_file(dir + "/summary.csv")).size(), 15u);
  EXPECT_TRUE(fs::exists(dir + "/exp3ncs_a0.49/rounds.csv"));
  EXPECT_TRUE(fs::exists(dir + "/uniform/cs.csv"));
}

}  // namespace
}  // namespace mabn
