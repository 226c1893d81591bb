// Acceptance suite: one test per acceptance criterion, each printing a
// [PASS]/[FAIL] line with the measured values. Criteria 6.1 and 6.2 assert
// the published loss-ladder numbers verbatim; with the canonical
// beam-splitter loss model at the documented placement they are not
// reproducible (see the loss-model notes in the README) and fail honestly.

#include <gtest/gtest.h>

#include "minl/closedform.hpp"
#include "minl/experiment.hpp"
#include "minl/optimize.hpp"
#include "minl/wigner.hpp"

using namespace minl;

namespace {

void report(const std::string& criterion, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", criterion.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

struct Criterion4Result {
  std::string name;
  std::array<double, 4> T;
  DetectionEvent event;
  double phi, xi;
  double S_at_14 = 0.0;
};
std::vector<Criterion4Result> g_c4_results;

double evaluate_S(const std::array<double, 4>& T, const DetectionEvent& ev,
                  double phi, double xi, cplx alpha, FockCutoff cutoff,
                  double* p_out = nullptr) {
  InterferometerConfig cfg;
  cfg.T = T;
  cfg.phi = phi;
  cfg.alpha_in = alpha;
  cfg.event = ev;
  cfg.cutoff = cutoff;
  const auto run = run_interferometer(cfg);
  if (p_out) *p_out = run.p_det;
  auto [v1, v2] = two_mode_variance(moments(run.rho_out), QuadraturePhase{xi});
  return squeezing_db(v1);
}

double lossy_S(double Rb, double Ra, FockCutoff cutoff) {
  InterferometerConfig cfg;
  cfg.T = {0.68, 0.82, 0.38, 1.0};
  cfg.phi = 3.0 * kPi / 2.0;
  cfg.alpha_in = 1.0;
  cfg.event = {DetectorKind::pnr, DetectionOutcome::ch4_only};
  cfg.cutoff = cutoff;
  cfg.losses = equal_split_losses(Rb, Ra);
  const auto run = run_interferometer(cfg);
  auto [v1, v2] = two_mode_variance(moments(run.rho_out), QuadraturePhase{kPi / 2});
  return squeezing_db(v1);
}

}  // namespace

TEST(Acceptance, C01_NullResult) {
  // T2 = T3 = 1, no detection: min over a 25^3 grid of (T1, T4, phi) of the
  // C1 variance is exactly the 1/4 shot-noise floor, independent of xi and
  // alpha. The null circuit involves only modes 1,2, so the grid runs on the
  // two-mode elements directly; equality with the full pipeline is asserted
  // on sampled cells below. alpha = 2 exceeds the default cutoff's comfort
  // zone (the coherent constructor flags it), so that case runs at n_max 20.
  EXPECT_TRUE(coherent_state(2.0, FockCutoff(14)).flags().cutoff_warning);

  bool all_pass = true;
  std::ostringstream detail;
  for (double alpha : {0.0, 1.0, 2.0}) {
    const FockCutoff cutoff(alpha > 1.6 ? 20 : 14);
    const auto input = tensor(fock_state({1}, cutoff),
                              coherent_state(alpha, cutoff));
    std::array<double, 3> mins{1e9, 1e9, 1e9};
    const std::array<double, 3> xis{0.0, kPi / 4, kPi / 2};
    for (int i = 0; i < 25; ++i)
      for (int j = 0; j < 25; ++j) {
        auto mid = apply_beamsplitter(
            input, BeamSplitter::from_transmissivity(i / 24.0, {0, 1}));
        mid = apply_beamsplitter(
            mid, BeamSplitter::from_transmissivity(j / 24.0, {0, 1}));
        // phi enters only through the phase element; sweep it on top.
        for (int k = 0; k < 25; ++k) {
          const double phi = 2.0 * kPi * k / 24.0;
          const auto m = moments(apply_phase(mid, {phi, 1}));
          for (int x = 0; x < 3; ++x)
            mins[x] = std::min(
                mins[x], two_mode_variance(m, QuadraturePhase{xis[x]}).first);
        }
      }
    for (int x = 0; x < 3; ++x) {
      if (std::abs(mins[x] - 0.25) > 1e-6) all_pass = false;
      detail << "alpha=" << alpha << ",xi=" << xis[x] << ": min="
             << format_number(mins[x]) << "; ";
    }
  }
  // Equality of the two-mode shortcut with the full pipeline, sampled cells.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double max_dev = 0.0;
  for (int s = 0; s < 10; ++s) {
    InterferometerConfig cfg;
    cfg.T = {uni(rng), 1.0, 1.0, uni(rng)};
    cfg.phi = 2 * kPi * uni(rng);
    cfg.alpha_in = 1.0;
    cfg.event = {DetectorKind::pnr, DetectionOutcome::none};
    cfg.cutoff = FockCutoff(14);
    const auto run = run_interferometer(cfg);
    const double v_pipe =
        two_mode_variance(moments(run.rho_out), QuadraturePhase{0.7}).first;
    auto two = apply_beamsplitter(
        tensor(fock_state({1}, cfg.cutoff), coherent_state(1.0, cfg.cutoff)),
        BeamSplitter::from_transmissivity(cfg.T[0], {0, 1}));
    two = apply_beamsplitter(two, BeamSplitter::from_transmissivity(cfg.T[3], {0, 1}));
    two = apply_phase(two, {cfg.phi, 1});
    const double v_two =
        two_mode_variance(moments(two), QuadraturePhase{0.7}).first;
    max_dev = std::max(max_dev, std::abs(v_pipe - v_two));
  }
  if (max_dev > 1e-12) all_pass = false;
  detail << "two-mode-vs-pipeline dev=" << format_number(max_dev);
  report("criterion 1 (null result, min variance = 0.25 +- 1e-6)", all_pass,
         detail.str());
  EXPECT_TRUE(all_pass) << detail.str();
}

TEST(Acceptance, C02_MaximalSqueezingAnchor) {
  double p = 0.0;
  const double S = evaluate_S({0.68, 0.82, 0.38, 1.0},
                              {DetectorKind::pnr, DetectionOutcome::ch4_only},
                              3.0 * kPi / 2.0, kPi / 2.0, 1.0, FockCutoff(14), &p);
  const bool pass = std::abs(S - (-1.25)) <= 0.02 && std::abs(p - 0.30) <= 0.01;
  std::ostringstream d;
  d << "S1 = " << format_number(S) << " dB (target -1.25 +- 0.02), P_det = "
    << format_number(p) << " (target 0.30 +- 0.01)";
  report("criterion 2 (maximum squeezing anchor)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C03_SpecialCaseClosedForm) {
  // 20 x 20 grid in (T, alpha in [0, 2]); T1 = 1/2, T2 = T3 = T, T4 = 1.
  // n_max 24 keeps the alpha = 2 coherent tail below the 1e-9 tolerance.
  const FockCutoff cutoff(24);
  double max_dv = 0.0, max_dp = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double T = 0.05 + 0.9 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double alpha = 2.0 * j / 19.0;
      InterferometerConfig cfg;
      cfg.T = {0.5, T, T, 1.0};
      cfg.phi = 2.0 * kPi * ((i * 20 + j) % 17) / 17.0;
      cfg.alpha_in = alpha;
      cfg.event = {DetectorKind::pnr, DetectionOutcome::ch4_only};
      cfg.cutoff = cutoff;
      const auto run = run_interferometer(cfg);
      max_dp = std::max(
          max_dp, std::abs(run.p_det - special_case_probability(T, alpha)));
      const double xi = 2.0 * kPi * ((i + 3 * j) % 13) / 13.0;
      auto [v1, v2] = two_mode_variance(moments(run.rho_out), QuadraturePhase{xi});
      const auto [pcf, xcf] = special_case_phases(cfg.phi, xi);
      auto [e1, e2] = special_case_variance(T, alpha, pcf, xcf);
      max_dv = std::max({max_dv, std::abs(v1 - e1), std::abs(v2 - e2)});
    }
  }
  const bool pass = max_dv < 1e-9 && max_dp < 1e-9;
  std::ostringstream d;
  d << "max |dvar| = " << format_number(max_dv) << ", max |dP| = "
    << format_number(max_dp) << " (tolerance 1e-9)";
  report("criterion 3 (special-case closed forms on 20x20 grid)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C04_OptimizerReproducesOptima) {
  struct Target {
    std::string name;
    DetectionEvent event;
    double phi, xi;
    double S_target, tol;
  };
  // Phases per the published optimum phi = pi/2, xi = pi/2 +- pi; the
  // equally deep mirror valley at (3pi/2, pi/2) hosts the published
  // operating point. The click single-detector value corresponds to the
  // detector on the coherent-state side (channel 3); the photon-side
  // channel optimizes further (about -1.19 dB) and is exercised by the
  // unit suites.
  const std::vector<Target> targets = {
      {"pnr_single", {DetectorKind::pnr, DetectionOutcome::ch4_only},
       kPi / 2, 3 * kPi / 2, -1.25, 0.03},
      {"pnr_both", {DetectorKind::pnr, DetectionOutcome::both},
       3 * kPi / 2, kPi / 2, -0.96, 0.05},
      {"click_single", {DetectorKind::click, DetectionOutcome::ch3_only},
       3 * kPi / 2, kPi / 2, -1.11, 0.05},
      {"click_both", {DetectorKind::click, DetectionOutcome::both},
       3 * kPi / 2, kPi / 2, -0.86, 0.05},
  };
  bool all_pass = true;
  std::ostringstream d;
  g_c4_results.clear();
  for (const auto& t : targets) {
    OptimizationProblem prob;
    prob.event = t.event;
    prob.alpha_in = 1.0;
    prob.phi0 = t.phi;
    prob.xi0 = t.xi;
    prob.P_crit = 0.1;
    prob.starts = 16;
    prob.budget = 2000;
    prob.cutoff = FockCutoff(12);
    prob.threads = 2;
    const auto res = maximize_squeezing(prob);
    double S = 1e9;
    if (res.converged) {
      S = evaluate_S(res.best_T, t.event, t.phi, t.xi, 1.0, FockCutoff(14));
      g_c4_results.push_back({t.name, res.best_T, t.event, t.phi, t.xi, S});
    }
    const bool pass = res.converged && std::abs(S - t.S_target) <= t.tol;
    all_pass &= pass;
    d << t.name << ": S = " << format_number(S) << " dB (target "
      << format_number(t.S_target) << " +- " << format_number(t.tol) << "); ";
  }
  report("criterion 4 (optimizer reproduces published optima)", all_pass, d.str());
  EXPECT_TRUE(all_pass) << d.str();
}

TEST(Acceptance, C05_OptimalPhaseLocation) {
  // 13 x 13 smoke grid; the cells at (pi/2, 3pi/2) (and its mirror) must
  // carry the grid minimum of about -1.25 dB.
  HeatmapOptions opt;
  opt.P_crit = 0.1;
  opt.starts = 3;
  opt.budget = 450;
  opt.cutoff = FockCutoff(10);
  opt.threads = 2;
  std::vector<double> phis, xis;
  for (int i = 0; i < 13; ++i) phis.push_back(2.0 * kPi * i / 12.0);
  xis = phis;
  const auto res = phase_heatmap(1.0, {DetectorKind::pnr, DetectionOutcome::ch4_only},
                                 phis, xis, opt);
  double grid_min = 1e9;
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 13; ++j) grid_min = std::min(grid_min, res.S_dB(i, j));
  // phi = pi/2 is index 3, xi = 3pi/2 is index 9 on this grid.
  const double S_target_cell = res.S_dB(3, 9);
  const bool pass = std::abs(grid_min - (-1.25)) <= 0.05 &&
                    std::abs(S_target_cell - grid_min) <= 0.02;
  std::ostringstream d;
  d << "grid min = " << format_number(grid_min) << " dB; cell at (pi/2, 3pi/2) = "
    << format_number(S_target_cell) << " dB";
  report("criterion 5 (optimal-phase location on 13x13 smoke grid)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C06_LossLadder) {
  const FockCutoff cutoff(12);
  struct Cell {
    double Rb, Ra, target;
  };
  const std::vector<Cell> cells = {
      {0.05, 0.05, -1.00}, {0.05, 0.0, -1.01}, {0.0, 0.05, -1.21}};
  bool all_pass = true;
  std::ostringstream d;
  for (const auto& c : cells) {
    const double S = lossy_S(c.Rb, c.Ra, cutoff);
    const bool pass = std::abs(S - c.target) <= 0.03;
    all_pass &= pass;
    d << "(Rb=" << c.Rb << ", Ra=" << c.Ra << "): S = " << format_number(S)
      << " dB (target " << format_number(c.target) << " +- 0.03)"
      << (pass ? "" : " <- not reproducible with the beam-splitter loss model")
      << "; ";
  }
  // Qualitative ordering: losses before detection hurt strictly more than
  // equal losses after detection, across the swept grid.
  bool ordering = true;
  for (double R : {0.02, 0.05, 0.08}) {
    if (!(lossy_S(R, 0.0, cutoff) > lossy_S(0.0, R, cutoff))) ordering = false;
  }
  all_pass &= ordering;
  d << "before-worse-than-after ordering: " << (ordering ? "holds" : "violated");
  report("criterion 6 (loss ladder)", all_pass, d.str());
  EXPECT_TRUE(all_pass) << d.str();
}

TEST(Acceptance, C07_TmsvCrossCheck) {
  const double z = 0.143;
  const FockCutoff cutoff(14);
  PureState psi(2, cutoff);
  double w = std::sqrt(1.0 - z * z);
  for (int n = 0; n < cutoff.dim(); ++n) {
    psi.amplitudes()[n * cutoff.dim() + n] = w;
    w *= z;
  }
  const auto m = moments(DensityOperator(psi.normalized()));
  double best = 1e9;
  for (int i = 0; i <= 1440; ++i)
    best = std::min(best,
                    two_mode_variance(m, QuadraturePhase{2 * kPi * i / 1440.0}).first);
  const double S = squeezing_db(best);
  const double analytic = 10.0 * std::log10(std::exp(-2.0 * std::atanh(z)));
  const bool pass = std::abs(S - (-1.25)) <= 0.02 && std::abs(S - analytic) <= 0.005;
  std::ostringstream d;
  d << "min S = " << format_number(S) << " dB, analytic "
    << format_number(analytic) << " dB";
  report("criterion 7 (TMSV cross-check, z = 0.143)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C08_OracleEquivalenceSuite) {
  // 100 random configurations, alpha in [0, 1.6]. Closed forms are exact in
  // the infinite-dimensional space; n_max 18 keeps the simulator's coherent
  // truncation below the 1e-9 / 1e-7 comparison tolerances.
  const FockCutoff cutoff(18);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double pnr_gap = 0.0, click_gap = 0.0;
  int compared = 0;
  for (int it = 0; it < 100; ++it) {
    InterferometerConfig cfg;
    cfg.T = {uni(rng), uni(rng), uni(rng), uni(rng)};
    cfg.phi = 2.0 * kPi * uni(rng);
    cfg.alpha_in = 1.6 * uni(rng);
    cfg.cutoff = cutoff;
    const double xi = 2.0 * kPi * uni(rng);

    {  // A1/A2
      InterferometerConfig nd = cfg;
      nd.T[1] = nd.T[2] = 1.0;
      nd.event = {DetectorKind::pnr, DetectionOutcome::none};
      const auto run = run_interferometer(nd);
      const auto psi =
          build_state(no_detection_state(nd.T[0], nd.T[3], nd.phi, nd.alpha_in), cutoff);
      const double fid =
          (psi.amplitudes().adjoint() * run.rho_out.matrix() * psi.amplitudes())(0)
              .real();
      pnr_gap = std::max(pnr_gap, 1.0 - fid);
      auto [v1, v2] = two_mode_variance(moments(run.rho_out), QuadraturePhase{xi});
      pnr_gap = std::max(
          pnr_gap, std::abs(v1 - no_detection_variance(nd.T[0], nd.T[3], nd.phi)));
    }
    for (auto variant : {DetectionOutcome::ch4_only, DetectionOutcome::both}) {
      InterferometerConfig pr = cfg;
      pr.event = {DetectorKind::pnr, variant};
      const auto cf = pnr_state(pr, variant);
      if (cf.P < 1e-8) continue;
      const auto run = run_interferometer(pr);
      const auto psi = build_state(cf, cutoff);
      const double fid =
          (psi.amplitudes().adjoint() * run.rho_out.matrix() * psi.amplitudes())(0)
              .real();
      pnr_gap = std::max(pnr_gap, 1.0 - fid);
      pnr_gap = std::max(pnr_gap, std::abs(run.p_det - pnr_probability(pr, variant)));
      const auto ms = moments(run.rho_out);
      const auto mc = pnr_moments(cf);
      pnr_gap = std::max(
          {pnr_gap, std::abs(ms.a - mc.a), std::abs(ms.b - mc.b),
           std::abs(ms.a2 - mc.a2), std::abs(ms.b2 - mc.b2), std::abs(ms.ab - mc.ab),
           std::abs(ms.ab_dag - mc.ab_dag), std::abs(ms.aa_dag - mc.aa_dag),
           std::abs(ms.bb_dag - mc.bb_dag)});
      ++compared;
    }
    for (auto variant : {DetectionOutcome::ch4_only, DetectionOutcome::both}) {
      InterferometerConfig ck = cfg;
      ck.event = {DetectorKind::click, variant};
      const auto cf = click_probability(ck, variant);
      if (cf.P < 1e-8) continue;
      const auto run = run_interferometer(ck);
      click_gap = std::max(click_gap, std::abs(run.p_det - cf.P));
      if (variant == DetectionOutcome::ch4_only && it % 5 == 0) {
        double p_state = 0.0;
        const auto rho_cf = click_state(ck, variant, cutoff, &p_state);
        click_gap = std::max(
            click_gap,
            (rho_cf.matrix() - run.rho_out.matrix()).cwiseAbs().maxCoeff());
      }
    }
  }
  const bool pass = pnr_gap < 1e-9 && click_gap < 1e-7 && compared > 100;
  std::ostringstream d;
  d << "max PNR/analytic gap = " << format_number(pnr_gap)
    << " (tol 1e-9), max click gap = " << format_number(click_gap)
    << " (tol 1e-7), " << compared << " PNR comparisons";
  report("criterion 8 (oracle equivalence, 100 random configs)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C09_PovmCompletenessAndPnrDeficit) {
  const FockCutoff cutoff(14);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double click_dev = 0.0, pnr_dev = 0.0;
  for (int it = 0; it < 5; ++it) {
    const std::array<double, 4> T{uni(rng), uni(rng), uni(rng), 1.0};
    auto psi = tensor(tensor(fock_state({1}, cutoff),
                             coherent_state(0.4 + uni(rng), cutoff)),
                      fock_state({0, 0}, cutoff));
    psi = apply_beamsplitter(psi, BeamSplitter::from_transmissivity(T[0], {0, 1}));
    psi = apply_outcoupling(psi, T[1], T[2]);

    double click_sum = 0.0, pnr_sum = 0.0;
    for (auto oc : {DetectionOutcome::both, DetectionOutcome::ch4_only,
                    DetectionOutcome::ch3_only, DetectionOutcome::none}) {
      click_sum += click_povm(psi, {DetectorKind::click, oc}).second;
      pnr_sum += pnr_project(psi, {DetectorKind::pnr, oc}).second;
    }
    click_dev = std::max(click_dev, std::abs(click_sum - 1.0));

    // Deficit = probability of >= 2 photons in either detector mode,
    // computed directly from the amplitude marginal.
    const int d = cutoff.dim();
    double multi = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int n3 = 0; n3 < d; ++n3)
          for (int n4 = 0; n4 < d; ++n4)
            if (n3 >= 2 || n4 >= 2)
              multi += std::norm(
                  psi.amplitudes()[((static_cast<std::size_t>(a) * d + b) * d + n3) *
                                       d +
                                   n4]);
    pnr_dev = std::max(pnr_dev, std::abs((1.0 - pnr_sum) - multi));
  }
  const bool pass = click_dev < 1e-9 && pnr_dev < 1e-9;
  std::ostringstream d;
  d << "max |click sum - 1| = " << format_number(click_dev)
    << ", max |PNR deficit - P(n>=2)| = " << format_number(pnr_dev);
  report("criterion 9 (POVM completeness, PNR sub-normalization)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C10_WignerAnchors) {
  const FockCutoff cutoff(12);
  const auto vac = DensityOperator(PureState::vacuum(2, cutoff));
  const double w0 = wigner_point(vac, {0, 0, 0, 0});
  const bool vac_ok = std::abs(w0 - 4.0) <= 1e-8;

  PureState tm(2, cutoff);
  double wz = std::sqrt(1.0 - 0.143 * 0.143);
  for (int n = 0; n < cutoff.dim(); ++n) {
    tm.amplitudes()[n * cutoff.dim() + n] = wz;
    wz *= 0.143;
  }
  WignerGridSpec spec;
  spec.points = 81;
  spec.inner_points = 81;
  spec.range = 6.0;
  const auto rho_tmsv = DensityOperator(tm.normalized());
  const double cov_x = grid_moments(reduced_wigner(rho_tmsv, WignerPair::X1X2, spec)).cov;
  const double cov_p = grid_moments(reduced_wigner(rho_tmsv, WignerPair::P1P2, spec)).cov;
  const bool tmsv_ok = cov_x * cov_p < 0.0;

  InterferometerConfig cfg;
  cfg.T = {0.68, 0.82, 0.38, 1.0};
  cfg.phi = 3.0 * kPi / 2.0;
  cfg.alpha_in = 1.0;
  cfg.event = {DetectorKind::pnr, DetectionOutcome::ch4_only};
  cfg.cutoff = cutoff;
  const auto rho6 = run_interferometer(cfg).rho_out;
  const auto mx = grid_moments(reduced_wigner(rho6, WignerPair::X1X2, spec));
  const auto mp = grid_moments(reduced_wigner(rho6, WignerPair::P1P2, spec));
  // The coherent displacement of this state sits in the P quadratures under
  // the resolved beam-splitter phase convention (the published figure's axes
  // are rotated relative to its own Wigner definition); the displaced
  // cross-quadrature reduction is the P1P2 one.
  const double disp_p = std::hypot(mp.mean1, mp.mean2);
  const double disp_x = std::hypot(mx.mean1, mx.mean2);
  const bool disp_ok = std::max(disp_p, disp_x) > 0.1;

  const bool pass = vac_ok && tmsv_ok && disp_ok;
  std::ostringstream d;
  d << "vacuum W(0) = " << format_number(w0) << "; TMSV covs = ("
    << format_number(cov_x) << ", " << format_number(cov_p)
    << "); heralded-state centroid displacement: X1X2 = " << format_number(disp_x)
    << ", P1P2 = " << format_number(disp_p) << " (threshold 0.1 on the displaced pair)";
  report("criterion 10 (Wigner anchors)", pass, d.str());
  EXPECT_TRUE(pass) << d.str();
}

TEST(Acceptance, C11_CutoffConvergence) {
  // dB values of criteria 2, 4 and 6 move by less than 1e-4 dB when n_max
  // goes from 14 to 16 (re-evaluated at the fixed parameter points; the
  // optimizer's T vectors come from criterion 4).
  bool all_pass = true;
  std::ostringstream d;
  const auto s2_14 = evaluate_S({0.68, 0.82, 0.38, 1.0},
                                {DetectorKind::pnr, DetectionOutcome::ch4_only},
                                3 * kPi / 2, kPi / 2, 1.0, FockCutoff(14));
  const auto s2_16 = evaluate_S({0.68, 0.82, 0.38, 1.0},
                                {DetectorKind::pnr, DetectionOutcome::ch4_only},
                                3 * kPi / 2, kPi / 2, 1.0, FockCutoff(16));
  all_pass &= std::abs(s2_14 - s2_16) < 1e-4;
  d << "anchor: |dS| = " << format_number(std::abs(s2_14 - s2_16)) << "; ";

  if (g_c4_results.empty()) {
    d << "optimizer points unavailable (criterion 4 skipped); ";
  }
  for (const auto& r : g_c4_results) {
    const double s16 = evaluate_S(r.T, r.event, r.phi, r.xi, 1.0, FockCutoff(16));
    all_pass &= std::abs(r.S_at_14 - s16) < 1e-4;
    d << r.name << ": |dS| = " << format_number(std::abs(r.S_at_14 - s16)) << "; ";
  }

  for (auto [rb, ra] : {std::pair{0.05, 0.05}, std::pair{0.05, 0.0},
                        std::pair{0.0, 0.05}}) {
    const double s14 = lossy_S(rb, ra, FockCutoff(14));
    const double s16 = lossy_S(rb, ra, FockCutoff(16));
    all_pass &= std::abs(s14 - s16) < 1e-4;
    d << "loss(" << rb << "," << ra << "): |dS| = "
      << format_number(std::abs(s14 - s16)) << "; ";
  }
  report("criterion 11 (cutoff convergence 14 -> 16, < 1e-4 dB)", all_pass, d.str());
  EXPECT_TRUE(all_pass) << d.str();
}
