#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "unit/helpers.hpp"

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ACCFLOW_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string small_evolve =
    "--mode evolve --n-rho 24 --n-phi 24 --t-end 0.02 --lambda -10 --upsilon -7617.9 "
    "--psi1 -0.5 --psi2 0.5 --stride 5";

}  // namespace

TEST(Cli, HelpAndMissingMode) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("--no-such-flag"), 1);
}

TEST(Cli, ZonalRunWritesOutputs) {
  const auto dir = testutil::scratch_dir("cli_zonal");
  ASSERT_EQ(run_cli("--mode zonal --out " + dir.string()), 0);
  for (const char* f : {"profile.csv", "profile.svg", "spectrum.csv", "summary.json"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
}

TEST(Cli, ValidationFailures) {
  const auto dir = testutil::scratch_dir("cli_invalid");
  EXPECT_EQ(run_cli("--mode evolve --dt -1 --out " + dir.string()), 1);
  std::ofstream(dir / "bad.ini") << "[band]\nfoo = 1\n";
  EXPECT_EQ(run_cli("--config " + (dir / "bad.ini").string()), 1);
  EXPECT_EQ(run_cli("--config " + (dir / "absent.ini").string() + " --mode zonal"), 3);
}

TEST(Cli, CflViolationIsNumerical) {
  const auto dir = testutil::scratch_dir("cli_cfl");
  EXPECT_EQ(run_cli(small_evolve + " --dt 1 --out " + dir.string()), 2);
}

TEST(Cli, UnwritableOutputIsIo) {
  const auto dir = testutil::scratch_dir("cli_io");
  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(run_cli("--mode zonal --out " + (dir / "file" / "sub").string()), 3);
}

TEST(Cli, SeededRerunsAreBitIdentical) {
  const auto a = testutil::scratch_dir("cli_rerun_a"), b = testutil::scratch_dir("cli_rerun_b");
  ASSERT_EQ(run_cli(small_evolve + " --seed 9 --out " + a.string()), 0);
  ASSERT_EQ(run_cli(small_evolve + " --seed 9 --out " + b.string()), 0);
  const auto da = slurp(a / "diagnostics.csv");
  EXPECT_FALSE(da.empty());
  EXPECT_EQ(da, slurp(b / "diagnostics.csv"));
}

TEST(Cli, SweepWritesSubdirectories) {
  const auto dir = testutil::scratch_dir("cli_sweep");
  ASSERT_EQ(run_cli("--mode zonal --threads 2 --sweep lambda=-3000,-1000 --out " + dir.string()), 0);
  int subdirs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) subdirs += e.is_directory();
  EXPECT_EQ(subdirs, 2);
}
