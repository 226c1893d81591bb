#pragma once

// Constrained minimization of a joint-quadrature variance over the four
// beam-splitter transmissivities, subject to a heralding-probability floor:
// multi-start Adam on unconstrained angles (T_i = cos^2 theta_i) with a
// smooth exterior penalty ramped in stages and a final feasibility repair.

#include <atomic>
#include <functional>
#include <thread>

#include "minl/circuit.hpp"
#include "minl/squeeze.hpp"

namespace minl {

enum class Objective { C1, C2 };

struct OptimizationProblem {
  Objective objective = Objective::C1;
  DetectionEvent event;
  cplx alpha_in = 1.0;
  double phi0 = 0.0;
  double xi0 = 0.0;
  double P_crit = 0.1;
  int starts = 16;
  int budget = 2000;  // objective evaluations per start
  std::uint64_t seed = 0;
  FockCutoff cutoff;
  int threads = 1;
};

struct TracePoint {
  int iteration;
  double objective;
  double p_det;
};

struct OptimizationResult {
  SqueezingReport best;
  std::array<double, 4> best_T{1.0, 1.0, 1.0, 1.0};
  std::vector<TracePoint> trace;
  bool converged = false;
  int starts_used = 0;
  // Best infeasible point diagnostics when no feasible point was found.
  double best_infeasible_p = 0.0;
  std::array<double, 4> best_infeasible_T{1.0, 1.0, 1.0, 1.0};
};

namespace detail {

struct EvalResult {
  double var = 1.0;
  double p = 0.0;
};

inline EvalResult evaluate_point(const OptimizationProblem& prob,
                                 const std::array<double, 4>& T) {
  InterferometerConfig cfg;
  cfg.T = T;
  cfg.phi = prob.phi0;
  cfg.alpha_in = prob.alpha_in;
  cfg.event = prob.event;
  cfg.cutoff = prob.cutoff;
  try {
    auto res = run_interferometer(cfg);
    const Moments m = moments(res.rho_out);
    auto [v1, v2] = two_mode_variance(m, QuadraturePhase{prob.xi0});
    return {prob.objective == Objective::C1 ? v1 : v2, res.p_det};
  } catch (const heralding_error&) {
    return {1.0, 0.0};
  }
}

inline std::array<double, 4> T_of_theta(const std::array<double, 4>& th) {
  std::array<double, 4> T;
  for (int i = 0; i < 4; ++i) {
    const double c = std::cos(th[i]);
    T[i] = c * c;
  }
  return T;
}

// Halton sequence point in [0, pi/2]^4, bases 2,3,5,7.
inline std::array<double, 4> halton_theta(std::uint64_t index) {
  static constexpr int bases[4] = {2, 3, 5, 7};
  std::array<double, 4> th{};
  for (int k = 0; k < 4; ++k) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index;
    while (i > 0) {
      f /= bases[k];
      r += f * (i % bases[k]);
      i /= bases[k];
    }
    th[k] = r * kPi / 2.0;
  }
  return th;
}

struct StartOutcome {
  bool feasible = false;
  double var = 1.0;
  double p = 0.0;
  std::array<double, 4> T{1, 1, 1, 1};
  std::vector<TracePoint> trace;
  double best_infeasible_p = 0.0;
  std::array<double, 4> best_infeasible_T{1, 1, 1, 1};
};

inline StartOutcome run_single_start(const OptimizationProblem& prob,
                                     std::array<double, 4> theta) {
  StartOutcome out;
  int evals = 0;
  auto eval_T = [&](const std::array<double, 4>& T) {
    ++evals;
    return evaluate_point(prob, T);
  };
  auto penalized = [&](const EvalResult& e, double w) {
    const double gap = std::max(0.0, prob.P_crit - e.p);
    return e.var + w * gap * gap;
  };
  auto consider = [&](const EvalResult& e, const std::array<double, 4>& T) {
    if (e.p >= prob.P_crit - 1e-9) {
      if (!out.feasible || e.var < out.var ||
          (std::abs(e.var - out.var) <= 1e-12 && e.p > out.p)) {
        out.feasible = true;
        out.var = e.var;
        out.p = e.p;
        out.T = T;
      }
    } else if (e.p > out.best_infeasible_p) {
      out.best_infeasible_p = e.p;
      out.best_infeasible_T = T;
    }
  };

  const double h = 1e-4;      // central-difference step in theta
  const int stages = 3;
  double lr = 0.08;
  std::array<double, 4> m{}, v{};
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  int step_count = 0;

  for (int stage = 0; stage < stages; ++stage) {
    const double w = 100.0 * std::pow(10.0, stage);
    m = {}; v = {};
    const int stage_budget = prob.budget * (stage + 1) / stages;
    while (evals + 9 <= stage_budget) {
      const auto T0 = T_of_theta(theta);
      const EvalResult e0 = eval_T(T0);
      consider(e0, T0);
      out.trace.push_back({step_count, e0.var, e0.p});
      std::array<double, 4> grad{};
      for (int k = 0; k < 4; ++k) {
        auto tp = theta, tm = theta;
        tp[k] += h;
        tm[k] -= h;
        const double fp = penalized(eval_T(T_of_theta(tp)), w);
        const double fm = penalized(eval_T(T_of_theta(tm)), w);
        grad[k] = (fp - fm) / (2.0 * h);
      }
      ++step_count;
      for (int k = 0; k < 4; ++k) {
        m[k] = b1 * m[k] + (1.0 - b1) * grad[k];
        v[k] = b2 * v[k] + (1.0 - b2) * grad[k] * grad[k];
        const double mh = m[k] / (1.0 - std::pow(b1, step_count));
        const double vh = v[k] / (1.0 - std::pow(b2, step_count));
        theta[k] -= lr * mh / (std::sqrt(vh) + eps);
      }
    }
    lr *= 0.5;
  }

  // Feasibility repair: if the final point is slightly infeasible, walk along
  // the probability gradient until the floor is met.
  {
    const auto T0 = T_of_theta(theta);
    EvalResult e = eval_T(T0);
    consider(e, T0);
    if (e.p < prob.P_crit && e.p > 0.0) {
      std::array<double, 4> gp{};
      for (int k = 0; k < 4; ++k) {
        auto tp = theta, tm = theta;
        tp[k] += h;
        tm[k] -= h;
        gp[k] = (eval_T(T_of_theta(tp)).p - eval_T(T_of_theta(tm)).p) / (2.0 * h);
      }
      double nrm = 0.0;
      for (double g : gp) nrm += g * g;
      nrm = std::sqrt(nrm);
      if (nrm > 1e-12) {
        double step = 1e-3;
        for (int it = 0; it < 40 && step < 2.0; ++it) {
          auto t2 = theta;
          for (int k = 0; k < 4; ++k) t2[k] += step * gp[k] / nrm;
          const auto T2 = T_of_theta(t2);
          const EvalResult e2 = eval_T(T2);
          consider(e2, T2);
          if (e2.p >= prob.P_crit) break;
          step *= 1.6;
        }
      }
    }
  }
  return out;
}

inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Multi-start constrained minimization of the chosen joint-quadrature
/// variance. Deterministic for a fixed seed; restarts may run concurrently
/// and are merged in start order. Ties at equal objective prefer higher
/// detection probability, then lexicographically smaller T.
inline OptimizationResult maximize_squeezing(const OptimizationProblem& prob) {
  if (prob.P_crit <= 0.0 || prob.P_crit > 1.0)
    throw std::invalid_argument("maximize_squeezing: P_crit must be in (0,1]");
  if (prob.starts < 1) throw std::invalid_argument("maximize_squeezing: starts >= 1");

  std::vector<detail::StartOutcome> outcomes(prob.starts);
  detail::parallel_for(prob.starts, prob.threads, [&](int s) {
    // Seed-dependent offset into the Halton sequence keeps the start set
    // deterministic yet distinct across seeds.
    outcomes[s] = detail::run_single_start(
        prob, detail::halton_theta(prob.seed * 64 + 17 + s));
  });

  OptimizationResult res;
  res.starts_used = prob.starts;
  for (const auto& o : outcomes) {
    for (const auto& t : o.trace) res.trace.push_back(t);
    if (o.best_infeasible_p > res.best_infeasible_p) {
      res.best_infeasible_p = o.best_infeasible_p;
      res.best_infeasible_T = o.best_infeasible_T;
    }
    if (!o.feasible) continue;
    const bool better =
        !res.converged || o.var < res.best.var_C1 - 1e-12 ||
        (std::abs(o.var - res.best.var_C1) <= 1e-12 &&
         (o.p > res.best.p_det + 1e-12 ||
          (std::abs(o.p - res.best.p_det) <= 1e-12 && o.T < res.best_T)));
    if (better) {
      res.converged = true;
      res.best_T = o.T;
      res.best.var_C1 = o.var;
      res.best.p_det = o.p;
    }
  }
  if (res.converged) {
    // Recompute the full report at the winning point.
    InterferometerConfig cfg;
    cfg.T = res.best_T;
    cfg.phi = prob.phi0;
    cfg.alpha_in = prob.alpha_in;
    cfg.event = prob.event;
    cfg.cutoff = prob.cutoff;
    auto run = run_interferometer(cfg);
    res.best = make_report(moments(run.rho_out), QuadraturePhase{prob.xi0}, run.p_det);
  }
  return res;
}

struct HeatmapOptions {
  int starts = 4;
  int budget = 600;
  std::uint64_t seed = 0;
  FockCutoff cutoff;
  int threads = 1;
  double P_crit = 0.1;
  Objective objective = Objective::C1;
};

struct HeatmapResult {
  std::vector<double> phi_grid, xi_grid;
  Eigen::MatrixXd S_dB;  // (phi index, xi index)
};

/// Per-cell constrained optimum of S over T on a (phi, xi) grid. Cells are
/// processed in raster order and warm-started from the previous cell's
/// optimum (the landscape is smooth in the phases), keeping the whole map
/// deterministic.
inline HeatmapResult phase_heatmap(cplx alpha, const DetectionEvent& event,
                                   const std::vector<double>& phi_grid,
                                   const std::vector<double>& xi_grid,
                                   const HeatmapOptions& opt = {}) {
  if (phi_grid.empty() || xi_grid.empty())
    throw std::invalid_argument("phase_heatmap: empty grid");
  HeatmapResult out;
  out.phi_grid = phi_grid;
  out.xi_grid = xi_grid;
  out.S_dB.resize(phi_grid.size(), xi_grid.size());
  Eigen::MatrixXd cell_var(phi_grid.size(), xi_grid.size());

  std::vector<std::array<double, 4>> row_best(xi_grid.size(),
                                              {0.5, 0.5, 0.5, 0.5});
  detail::parallel_for(
      static_cast<int>(phi_grid.size()), opt.threads, [&](int i) {
        std::array<double, 4> prev{0.5, 0.5, 0.5, 0.5};
        for (std::size_t j = 0; j < xi_grid.size(); ++j) {
          OptimizationProblem prob;
          prob.objective = opt.objective;
          prob.event = event;
          prob.alpha_in = alpha;
          prob.phi0 = phi_grid[i];
          prob.xi0 = xi_grid[j];
          prob.P_crit = opt.P_crit;
          prob.starts = opt.starts;
          prob.budget = opt.budget;
          prob.seed = opt.seed + 977 * i;
          prob.cutoff = opt.cutoff;
          auto res = maximize_squeezing(prob);
          // Warm start: refine from the previous cell's optimum.
          std::array<double, 4> th;
          for (int k = 0; k < 4; ++k)
            th[k] = std::acos(std::sqrt(std::clamp(prev[k], 0.0, 1.0)));
          OptimizationProblem wprob = prob;
          wprob.budget = opt.budget / 2;
          auto warm = detail::run_single_start(wprob, th);
          double var;
          if (warm.feasible && (!res.converged || warm.var < res.best.var_C1)) {
            var = warm.var;
            prev = warm.T;
          } else if (res.converged) {
            var = res.best.var_C1;
            prev = res.best_T;
          } else {
            var = 1.0;  // infeasible cell
          }
          cell_var(i, j) = var;
          out.S_dB(i, j) = squeezing_db(var);
        }
      });
  return out;
}

struct TradeoffCurve {
  double alpha = 0.0;
  std::vector<double> P_crit;
  std::vector<double> S_dB;
  std::vector<bool> feasible;
};

/// Maximized squeezing as a function of the probability floor, per alpha.
inline std::vector<TradeoffCurve> probability_tradeoff_curve(
    const std::vector<double>& alphas, const DetectionEvent& event,
    const std::vector<double>& P_crit_grid, double phi0, double xi0,
    const HeatmapOptions& opt = {}) {
  if (alphas.empty() || P_crit_grid.empty())
    throw std::invalid_argument("probability_tradeoff_curve: empty grid");
  std::vector<TradeoffCurve> curves(alphas.size());
  detail::parallel_for(static_cast<int>(alphas.size()), opt.threads, [&](int a) {
    TradeoffCurve c;
    c.alpha = alphas[a];
    for (double pc : P_crit_grid) {
      OptimizationProblem prob;
      prob.objective = opt.objective;
      prob.event = event;
      prob.alpha_in = alphas[a];
      prob.phi0 = phi0;
      prob.xi0 = xi0;
      prob.P_crit = pc;
      prob.starts = opt.starts;
      prob.budget = opt.budget;
      prob.seed = opt.seed + 31 * a;
      prob.cutoff = opt.cutoff;
      auto res = maximize_squeezing(prob);
      c.P_crit.push_back(pc);
      c.S_dB.push_back(res.converged ? res.best.S1_dB : 0.0);
      c.feasible.push_back(res.converged);
    }
    curves[a] = std::move(c);
  });
  return curves;
}

}  // namespace minl
