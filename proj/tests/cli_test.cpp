// Copyright 2026 The pepsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the pepsq binary end to end. PEPSQ_CLI_PATH is set by the build.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pepsq/io.hpp"

namespace pepsq {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult pepsq_cli(const std::string &args) {
  const std::string cmd = std::string(PEPSQ_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.out += buf;
  r.status = pclose(pipe);
  return r;
}

std::vector<std::string> lines_of(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pepsq_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  // A short optimization at g = 0 written to dir_/ckpt.
  std::string checkpoint() {
    const CliResult r = pepsq_cli("optimize --g 0 --restarts 1 --max-evals 200 --out " + path("ckpt"));
    EXPECT_EQ(r.status, 0) << r.out;
    return path("ckpt/checkpoint_g0.json");
  }

  fs::path dir_;
};

TEST_F(CliTest, EdWritesCsv) {
  const CliResult r = pepsq_cli("ed --rows 2 --cols 2 --g-min 0 --g-max 1 --steps 4");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "g,energy,loop_abs");
  EXPECT_EQ(lines[1].substr(0, 2), "0,");
  EXPECT_EQ(lines[5].substr(0, 2), "1,");
  const CliResult single = pepsq_cli("ed --rows 3 --cols 3 --g 0 --out " + path("ed.csv"));
  ASSERT_EQ(single.status, 0) << single.out;
  std::ifstream in(path("ed.csv"));
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "g,energy,loop_abs\n0,-4,1\n");
}

TEST_F(CliTest, OptimizeIsDeterministic) {
  const std::string a = checkpoint();
  const Checkpoint first = load_checkpoint(a);
  EXPECT_EQ(first.layout_id, "ms-zigzag-3x3");
  EXPECT_EQ(first.theta.size(), 144u);
  EXPECT_EQ(first.seed, 0u);
  fs::rename(a, path("first.json"));
  checkpoint();
  EXPECT_EQ(detail::read_file(path("first.json")), detail::read_file(a));
}

TEST_F(CliTest, CompileReportsRegisterSize) {
  const std::string ckpt = checkpoint();
  const CliResult r = pepsq_cli("compile " + ckpt + " --out " + path("prog.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("n_qubits: 5"), std::string::npos);
  EXPECT_NE(r.out.find("qubit-efficient: true"), std::string::npos);
  const GateProgram prog = load_program(path("prog.json"));
  EXPECT_EQ(prog.n_qubits, 5);
  EXPECT_EQ(prog.measure_count(), 9);
}

TEST_F(CliTest, RunAppendsRows) {
  const std::string ckpt = checkpoint();
  const std::string csv = path("run.csv");
  ASSERT_EQ(pepsq_cli("run " + ckpt + " --shots 200 --seed 1 --out " + csv).status, 0);
  const CliResult noisy = pepsq_cli("run " + ckpt + " --shots 200 --noise-p 0.02 --mode shots --out " + csv +
                              " --shot-log " + path("shots.csv"));
  ASSERT_EQ(noisy.status, 0) << noisy.out;
  const auto lines = lines_of(detail::read_file(csv));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "g,ed_value,tn_value,circuit_mean,circuit_stderr,shots,seed");
  EXPECT_EQ(lines[1].substr(0, 4), "0,1,");
  EXPECT_EQ(lines[1].substr(lines[1].size() - 6), ",200,1");
  const auto shots = lines_of(detail::read_file(path("shots.csv")));
  EXPECT_EQ(shots.size(), 201u);
}

TEST_F(CliTest, ErrorsExitNonZero) {
  EXPECT_NE(pepsq_cli("run " + path("missing.json")).status, 0);
  const std::string ckpt = checkpoint();
  const CliResult r = pepsq_cli("run " + ckpt + " --mode exact --noise-p 0.1");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("not supported"), std::string::npos);
  EXPECT_NE(pepsq_cli("run " + ckpt + " --noise-p 2").status, 0);
  EXPECT_NE(pepsq_cli("ed --rows 4 --cols 4").status, 0);
  EXPECT_NE(pepsq_cli("").status, 0);
}

}  // namespace
}  // namespace pepsq
