#include "minl/experiment.hpp"

#include <gtest/gtest.h>
#include <cstdio>
#include <fstream>

using namespace minl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec fig6_spec(ExperimentKind kind, const std::string& out) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.params = preset_params("fig6");
  spec.output_path = out;
  spec.threads = 2;
  return spec;
}

}  // namespace

TEST(FormatNumber, TwelveSignificantDigitsAndScientificBelowThreshold) {
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(format_number(0.300785), "0.300785");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_NE(format_number(5e-5).find("e-05"), std::string::npos);
  EXPECT_EQ(format_number(0.0), "0");
  // Round trip at 12 significant digits.
  const double x = -1.2493873660829993;
  EXPECT_NEAR(std::stod(format_number(x)), x, 1e-11);
}

TEST(Presets, AllResolve) {
  for (const char* name : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"})
    EXPECT_FALSE(preset_params(name).empty()) << name;
  EXPECT_THROW(preset_params("fig99"), std::invalid_argument);
}

TEST(RunSimulate, Fig6SummaryAndSidecar) {
  const std::string out = "exp_sim_fig6";
  auto spec = fig6_spec(ExperimentKind::simulate, out);
  const auto summary = run(spec);
  EXPECT_EQ(summary.exit_code, 0);
  EXPECT_NE(summary.line.find("S1 = -1.249"), std::string::npos) << summary.line;
  EXPECT_NE(summary.line.find("P_det = 0.30"), std::string::npos) << summary.line;

  const std::string csv = slurp(out + ".csv");
  EXPECT_NE(csv.find("var_C1"), std::string::npos);
  EXPECT_NE(csv.find("#"), std::string::npos);  // self-describing header

  const auto j = nlohmann::json::parse(slurp(out + ".json"));
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["cutoff_n_max"], 14);
  EXPECT_TRUE(j.contains("version"));
  EXPECT_TRUE(j.contains("wall_time_seconds"));
}

TEST(RunSimulate, Deterministic) {
  auto spec = fig6_spec(ExperimentKind::simulate, "exp_det_a");
  run(spec);
  spec.output_path = "exp_det_b";
  run(spec);
  EXPECT_EQ(slurp("exp_det_a.csv"), slurp("exp_det_b.csv"));
}

TEST(RunXiSweep, EmitsCurve) {
  auto spec = fig6_spec(ExperimentKind::xi_sweep, "exp_xi");
  spec.params["xi_points"] = "73";
  const auto summary = run(spec);
  EXPECT_EQ(summary.exit_code, 0);
  EXPECT_NE(summary.line.find("min S1 = -1.24"), std::string::npos) << summary.line;
  // 73 data rows + header + comments.
  const std::string csv = slurp("exp_xi.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 73 + 1 + 1);
}

TEST(RunPhotonDist, NormalizedLowOrderWeight) {
  auto spec = fig6_spec(ExperimentKind::photon_dist, "exp_pnd");
  spec.cutoff = FockCutoff(14);
  const auto summary = run(spec);
  EXPECT_EQ(summary.exit_code, 0);
  EXPECT_NE(summary.line.find("sum = "), std::string::npos);
  EXPECT_NE(summary.line.find("P_det = 0.30"), std::string::npos) << summary.line;
}

TEST(LossSweep, MonotoneAndOrdered) {
  InterferometerConfig base;
  base.T = {0.68, 0.82, 0.38, 1.0};
  base.phi = 3.0 * kPi / 2.0;
  base.alpha_in = 1.0;
  base.event = {DetectorKind::pnr, DetectionOutcome::ch4_only};
  base.cutoff = FockCutoff(10);
  const std::vector<double> grid{0.0, 0.025, 0.05};
  const auto S = loss_sweep(base, kPi / 2, grid, grid, 2);

  // Monotone degradation along both axes.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i > 0) EXPECT_GE(S(i, j), S(i - 1, j) - 1e-9);
      if (j > 0) EXPECT_GE(S(i, j), S(i, j - 1) - 1e-9);
    }
  // Losses before detection are the more damaging ones.
  for (int k = 1; k < 3; ++k) EXPECT_GT(S(k, 0), S(0, k));
}

TEST(RunOracleCheck, AllPass) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::oracle_check;
  spec.params["configs"] = "6";
  spec.cutoff = FockCutoff(14);
  spec.output_path = "exp_oracle";
  spec.seed = 9;
  const auto summary = run(spec);
  EXPECT_EQ(summary.exit_code, 0) << summary.line;
  const std::string csv = slurp("exp_oracle.csv");
  EXPECT_NE(csv.find("no_detection_variance_A2"), std::string::npos);
  EXPECT_EQ(csv.find(",0\n"), std::string::npos);  // no failed rows
}

TEST(RunWigner, TmsvSource) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::wigner;
  spec.params = preset_params("fig7");
  spec.params["source"] = "tmsv";
  spec.params["grid_points"] = "15";
  spec.params["inner_points"] = "31";
  spec.params["range"] = "5";
  spec.cutoff = FockCutoff(10);
  spec.output_path = "exp_wig";
  const auto summary = run(spec);
  EXPECT_EQ(summary.exit_code, 0);
  EXPECT_NE(summary.line.find("X1X2"), std::string::npos);
}

TEST(RunSpec, InvalidDetectorRejected) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::simulate;
  spec.params["detector"] = "bogus";
  spec.output_path = "exp_bad";
  EXPECT_THROW(run(spec), std::invalid_argument);
}
