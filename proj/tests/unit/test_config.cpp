#include <gtest/gtest.h>

#include <fstream>

#include "accflow/config.hpp"
#include "accflow/errors.hpp"
#include "accflow/runner.hpp"
#include "unit/helpers.hpp"

using namespace acc;

namespace {

const char* figure_one = R"(# westward jets
[band]
theta1_deg = -60
theta2_deg = -50
psi1 = -5
psi2 = -25
omega = 4650
lambda = -3000
upsilon = 30000

[grid]
profile_points = 400

[run]
mode = zonal   # profile, spectrum, cross-check
output_dir = out/fig1
)";

}  // namespace

TEST(Config, ModeIsRequired) {
  const auto s = parse_config_text("");
  try {
    s.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mode"), std::string::npos);
  }
}

TEST(Config, FigureOneFile) {
  const auto s = parse_config_text(figure_one);
  ASSERT_TRUE(s.mode.has_value());
  EXPECT_EQ(*s.mode, RunMode::zonal);
  EXPECT_NEAR(rad_to_deg(s.config.theta1), -60.0, 1e-12);
  EXPECT_EQ(s.config.psi2, -25.0);
  EXPECT_EQ(s.config.lambda, -3000.0);
  EXPECT_EQ(s.output_dir, "out/fig1");
  EXPECT_NO_THROW(s.validate());
}

TEST(Config, RejectsNonPositiveStep) {
  auto s = parse_config_text("[run]\nmode = evolve\ndt = -1\n");
  EXPECT_THROW(s.validate(), ValidationError);
  s = parse_config_text("[run]\nmode = evolve\ndt = auto\n");
  EXPECT_FALSE(s.dt.has_value());
  EXPECT_NO_THROW(s.validate());
}

TEST(Config, UnknownKeyReportsLine) {
  try {
    parse_config_text("[band]\nlambda = 1\nfoo = 2\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("band.foo"), std::string::npos);
  }
}

TEST(Config, MalformedValuesReportLine) {
  try {
    parse_config_text("[grid]\n\nn_rho = lots\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_config_text("[run]\nmode = sideways\n"), ParseError);
  EXPECT_THROW(parse_config_text("[band]\nlambda = 1\nlambda = 2\n"), ParseError);
  EXPECT_THROW(parse_config_text("[band\nlambda = 1\n"), ParseError);
}

TEST(Config, InvalidBandsAreRejected) {
  auto s = parse_config_text("[run]\nmode = zonal\n[band]\ntheta1_deg = -50\ntheta2_deg = -60\n");
  EXPECT_THROW(s.validate(), ValidationError);
  s = parse_config_text("[run]\nmode = zonal\n[band]\ntheta1_deg = -90\n");
  EXPECT_THROW(s.validate(), Error);
  s = parse_config_text("[run]\nmode = evolve\ncfl = 0.95\n");
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(Config, TextRoundTrip) {
  auto s = parse_config_text(figure_one);
  s.dt = 1.0 / 3.0;
  s.seed = 7;
  s.write_checkpoints = false;
  const auto back = parse_config_text(to_config_text(s));
  EXPECT_EQ(to_config_text(back), to_config_text(s));
  EXPECT_EQ(*back.dt, 1.0 / 3.0);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_FALSE(back.write_checkpoints);
}

TEST(Config, FileErrors) {
  EXPECT_THROW(parse_config_file("/nonexistent/accflow.ini"), IoError);
  const auto dir = testutil::scratch_dir("config");
  std::ofstream(dir / "bad.ini") << "[run]\nbogus = 1\n";
  try {
    parse_config_file(dir / "bad.ini");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.ini"), std::string::npos);
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Config, SweepExpansion) {
  auto base = parse_config_text(figure_one);
  const auto specs = expand_sweep(base, "lambda=-3000,-1000,0");
  ASSERT_EQ(specs.size(), 3u);
  EXPECT_EQ(specs[1].config.lambda, -1000.0);
  EXPECT_NE(specs[0].output_dir, specs[1].output_dir);
  EXPECT_EQ(specs[0].output_dir.parent_path(), base.output_dir);
  EXPECT_EQ(expand_sweep(base, "band.upsilon=1,2").size(), 2u);
  EXPECT_THROW(expand_sweep(base, "lambda"), Error);
  EXPECT_THROW(expand_sweep(base, "nosuch=1,2"), Error);
}
