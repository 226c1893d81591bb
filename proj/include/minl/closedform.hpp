#pragma once

// Analytic output states, probabilities, special-case variances and moment
// formulas for the heralded interferometer. This module is the independent
// oracle the Fock simulator is validated against.
//
// Variable dictionary: the paper's appendix formulas (no-detection state and
// variance, the A3 variance expressions, the moment polynomials) are written
// directly in the pipeline variables (phi, xi). Its special-case variance
// expressions use flipped/shifted phases; `special_case_phases` maps pipeline
// (phi, xi) into those variables. The published coefficient lists for the
// post-detection states contain misprints (their norm would depend on phi,
// contradicting the phi-free detection probabilities); the lists here are
// re-derived from the circuit and validated against the simulator, while the
// published probability formulas are implemented verbatim.

#include <array>

#include "minl/circuit.hpp"
#include "minl/squeeze.hpp"

namespace minl {

namespace detail {

struct SplitterAmplitudes {
  double t1, t2, t3, t4, r1, r2, r3, r4;
};

inline SplitterAmplitudes splitter_amplitudes(const std::array<double, 4>& T) {
  SplitterAmplitudes s{};
  s.t1 = std::sqrt(T[0]); s.r1 = std::sqrt(1.0 - T[0]);
  s.t2 = std::sqrt(T[1]); s.r2 = std::sqrt(1.0 - T[1]);
  s.t3 = std::sqrt(T[2]); s.r3 = std::sqrt(1.0 - T[2]);
  s.t4 = std::sqrt(T[3]); s.r4 = std::sqrt(1.0 - T[3]);
  return s;
}

/// Pre-detection structure of the state after BS1, BS2, BS3:
///   (c1 a1+ + c2 a2+ + c3 a3+ + c4 a4+) |b1, b2, b3, b4>.
struct PreDetection {
  std::array<cplx, 4> c;  // single-photon coefficients per mode
  std::array<cplx, 4> b;  // coherent amplitudes per mode
};

inline PreDetection pre_detection(const std::array<double, 4>& T, cplx alpha) {
  const auto s = splitter_amplitudes(T);
  const cplx i(0.0, 1.0);
  PreDetection p;
  p.c = {s.t1 * s.t3, i * s.r1 * s.t2, -s.r1 * s.r2, i * s.t1 * s.r3};
  p.b = {i * s.r1 * s.t3 * alpha, s.t1 * s.t2 * alpha,
         i * s.t1 * s.r2 * alpha, -s.r1 * s.r3 * alpha};
  return p;
}

}  // namespace detail

/// Coefficient bundle of the analytic post-detection states
///   N (gamma0 + gamma1 a1+ + gamma2 a2+) |alpha1, alpha2>,
/// after the full pipeline (BS4 and the phase shifter already folded in).
/// alpha3, alpha4 are the detector-channel coherent amplitudes that set the
/// exponential prefactor of the probability.
struct PnrCoefficients {
  DetectionOutcome variant = DetectionOutcome::ch4_only;
  cplx gamma0, gamma1, gamma2;
  cplx alpha1, alpha2, alpha3, alpha4;
  double N = 0.0;  // normalization of the coefficient polynomial, N^2 = 1/Q
  double P = 0.0;  // heralding probability
};

namespace detail {

/// Norm^2 of (g0 + g1 a1+ + g2 a2+) |a1, a2> for normalized coherent states.
inline double coefficient_norm2(cplx g0, cplx g1, cplx g2, cplx a1, cplx a2) {
  const double q =
      std::norm(g0) + std::norm(g1) * (1.0 + std::norm(a1)) +
      std::norm(g2) * (1.0 + std::norm(a2)) +
      2.0 * (std::conj(g0) * g1 * std::conj(a1)).real() +
      2.0 * (std::conj(g0) * g2 * std::conj(a2)).real() +
      2.0 * (std::conj(g1) * g2 * a1 * std::conj(a2)).real();
  return q;
}

}  // namespace detail

/// Analytic post-detection state for a PNR outcome (single-channel outcomes
/// and the both-channel case). The probability is attached from the verbatim
/// published formulas via pnr_probability().
inline PnrCoefficients pnr_state(const InterferometerConfig& cfg,
                                 DetectionOutcome variant) {
  if (variant == DetectionOutcome::none)
    throw std::invalid_argument("pnr_state: use no_detection_state for the null event");
  const auto p = detail::pre_detection(cfg.T, cfg.alpha_in);
  const auto s = detail::splitter_amplitudes(cfg.T);
  const cplx i(0.0, 1.0);
  cplx g0, g1, g2;
  switch (variant) {
    case DetectionOutcome::ch4_only:
      g0 = p.c[3]; g1 = p.c[0] * p.b[3]; g2 = p.c[1] * p.b[3];
      break;
    case DetectionOutcome::ch3_only:
      g0 = p.c[2]; g1 = p.c[0] * p.b[2]; g2 = p.c[1] * p.b[2];
      break;
    default:  // both
      g0 = p.c[2] * p.b[3] + p.c[3] * p.b[2];
      g1 = p.c[0] * p.b[2] * p.b[3];
      g2 = p.c[1] * p.b[2] * p.b[3];
      break;
  }
  PnrCoefficients out;
  out.variant = variant;
  const cplx e = std::polar(1.0, cfg.phi);
  out.gamma1 = s.t4 * g1 + i * s.r4 * g2;
  out.gamma2 = e * (i * s.r4 * g1 + s.t4 * g2);
  out.gamma0 = g0;
  out.alpha1 = s.t4 * p.b[0] + i * s.r4 * p.b[1];
  out.alpha2 = e * (i * s.r4 * p.b[0] + s.t4 * p.b[1]);
  out.alpha3 = p.b[2];
  out.alpha4 = p.b[3];
  const double q = detail::coefficient_norm2(out.gamma0, out.gamma1, out.gamma2,
                                             out.alpha1, out.alpha2);
  out.N = q > 0.0 ? 1.0 / std::sqrt(q) : 0.0;
  out.P = q * std::exp(-(std::norm(out.alpha3) + std::norm(out.alpha4)));
  return out;
}

/// Published probability of the single-channel PNR event (channel 4).
inline double pnr_probability_single(const std::array<double, 4>& T, cplx alpha_in) {
  const double T1 = T[0], T2 = T[1], T3 = T[2];
  const double R1 = 1.0 - T1, R2 = 1.0 - T2, R3 = 1.0 - T3;
  const double A = std::norm(alpha_in);
  return std::exp(-A * (T1 * R2 + R1 * R3)) * R3 *
         (A * R1 * R1 * T2 +
          T1 * (1.0 + A * R1 * (3.0 * T3 - 2.0 * T2) +
                A * A * R1 * R1 * (T2 - T3) * (T2 - T3)));
}

/// Published probability of the both-channel PNR event.
inline double pnr_probability_both(const std::array<double, 4>& T, cplx alpha_in) {
  const double T1 = T[0], T2 = T[1], T3 = T[2];
  const double R1 = 1.0 - T1, R2 = 1.0 - T2, R3 = 1.0 - T3;
  const double A = std::norm(alpha_in);
  return std::exp(-A * (T1 * R2 + R1 * R3)) * A * R2 * R3 *
         (T1 * T1 +
          R1 * R1 * (1.0 + A * T1 * (3.0 * T2 - 2.0 * T3) +
                     A * A * T1 * T1 * (T2 - T3) * (T2 - T3)) +
          R1 * (-2.0 * T1 + A * T1 * T1 * (-2.0 * T2 + 3.0 * T3)));
}

inline double pnr_probability(const InterferometerConfig& cfg, DetectionOutcome variant) {
  switch (variant) {
    case DetectionOutcome::ch4_only:
      return pnr_probability_single(cfg.T, cfg.alpha_in);
    case DetectionOutcome::both:
      return pnr_probability_both(cfg.T, cfg.alpha_in);
    default:
      throw std::invalid_argument("pnr_probability: published forms cover ch4/both");
  }
}

/// Build the two-mode Fock state (g0 + g1 a1+ + g2 a2+)|alpha1, alpha2>,
/// normalized, from a coefficient bundle.
inline PureState build_state(cplx g0, cplx g1, cplx g2, cplx a1, cplx a2,
                             FockCutoff cutoff) {
  PureState base = tensor(coherent_state(a1, cutoff), coherent_state(a2, cutoff));
  PureState out(2, cutoff);
  out.amplitudes() = g0 * base.amplitudes() +
                     g1 * ladder_apply(base, 0, Ladder::create).amplitudes() +
                     g2 * ladder_apply(base, 1, Ladder::create).amplitudes();
  out.flags() = base.flags();
  return out.normalized();
}

inline PureState build_state(const PnrCoefficients& c, FockCutoff cutoff) {
  return build_state(c.gamma0, c.gamma1, c.gamma2, c.alpha1, c.alpha2, cutoff);
}

/// No-detection output state (T2 = T3 = 1):
///   (gamma01 a1+ + gamma02 a2+) |alpha01, alpha02>.
struct NoDetectionState {
  cplx gamma01, gamma02, alpha01, alpha02;
};

inline NoDetectionState no_detection_state(double T1, double T4, double phi,
                                           cplx alpha_in) {
  const auto s = detail::splitter_amplitudes({T1, 1.0, 1.0, T4});
  const cplx i(0.0, 1.0);
  const cplx e = std::polar(1.0, phi);
  NoDetectionState out;
  out.gamma01 = s.t1 * s.t4 - s.r1 * s.r4;
  out.gamma02 = i * e * (s.t1 * s.r4 + s.r1 * s.t4);
  out.alpha01 = i * alpha_in * (s.t1 * s.r4 + s.r1 * s.t4);
  out.alpha02 = alpha_in * e * (s.t1 * s.t4 - s.r1 * s.r4);
  return out;
}

inline PureState build_state(const NoDetectionState& c, FockCutoff cutoff) {
  return build_state(0.0, c.gamma01, c.gamma02, c.alpha01, c.alpha02, cutoff);
}

/// No-detection variance (xi- and alpha-independent):
///   1/2 + sin(phi) (1/2 (t1 r1 + t4 r4) - t1^2 t4 r4 - t4^2 t1 r1).
inline double no_detection_variance(double T1, double T4, double phi) {
  const auto s = detail::splitter_amplitudes({T1, 1.0, 1.0, T4});
  return 0.5 + std::sin(phi) * (0.5 * (s.t1 * s.r1 + s.t4 * s.r4) -
                                s.t1 * s.t1 * s.t4 * s.r4 -
                                s.t4 * s.t4 * s.t1 * s.r1);
}

/// The special-case variance formulas are written in their own phase
/// variables; this maps the pipeline's (phi, xi) into them.
inline std::pair<double, double> special_case_phases(double phi, double xi) {
  return {-phi, kPi / 2.0 - xi};
}

/// Single-PNR variances of the simplified interferometer (T1 = 1/2,
/// T2 = T3 = T, T4 = 1), with x = T alpha^2, in closed-form phase variables.
inline std::pair<double, double> special_case_variance(double T, double alpha,
                                                       double phi_cf, double xi_cf) {
  const double x = T * alpha * alpha;
  const double pref = 1.0 / ((1.0 + x) * (1.0 + x));
  const double base = 0.25 + x / 2.0 + x * x / 2.0;
  const double b1 = -std::cos(2.0 * xi_cf) + std::cos(2.0 * xi_cf - 2.0 * phi_cf) +
                    2.0 * std::sin(2.0 * xi_cf - phi_cf) + 2.0 * x * std::sin(phi_cf);
  const double b2 = std::cos(2.0 * xi_cf) - std::cos(2.0 * xi_cf - 2.0 * phi_cf) -
                    2.0 * std::sin(2.0 * xi_cf - phi_cf) + 2.0 * x * std::sin(phi_cf);
  return {pref * (base + x / 8.0 * b1), pref * (base + x / 8.0 * b2)};
}

/// Detection probability of the special case. The published expression
/// carries a misprinted coefficient (3T/2); the reduction of the general
/// single-channel probability at T1 = 1/2, T2 = T3 = T gives (1 + T alpha^2):
///   P = (1-T)/2 exp[-alpha^2 (1-T)] (1 + T alpha^2).
inline double special_case_probability(double T, double alpha) {
  const double A = alpha * alpha;
  return 0.5 * (1.0 - T) * std::exp(-A * (1.0 - T)) * (1.0 + A * T);
}

/// Coefficient bundle for the click-detection closed forms. The g / alpha~
/// lists are the pre-detection single-photon coefficients and coherent
/// amplitudes entering the published probability sums.
struct ClickCoefficients {
  DetectionOutcome variant = DetectionOutcome::ch4_only;
  std::array<cplx, 4> g;            // g1..g4 (index k-1): photon coefficients
  std::array<cplx, 4> alpha_tilde;  // sum amplitudes: modes 3, 2, 4, 1
  cplx gamma_tilde3, gamma_tilde4;  // both-channel constants
  double P = 0.0;
  int sum_bound = 30;
  bool tail_warning = false;
};

namespace detail {

/// e^{+|alpha|^2}-scaled probability that the modes in `vacuum` are all in
/// vacuum, for the state (sum_k c_k a_k+)|b1..b4>. Sums the exact Fock-basis
/// expansion over the remaining modes up to `bound` per mode; `tail` receives
/// the relative weight of the outermost shell.
inline double vacuum_projected_sum(const PreDetection& p,
                                   const std::vector<int>& vacuum, int bound,
                                   double* tail = nullptr) {
  std::vector<int> free_modes;
  for (int m = 0; m < 4; ++m)
    if (std::find(vacuum.begin(), vacuum.end(), m) == vacuum.end())
      free_modes.push_back(m);
  const int F = static_cast<int>(free_modes.size());
  std::vector<int> occ(F, 0);
  double total = 0.0, shell = 0.0;
  // Precompute powers b^n / sqrt(n!) per free mode.
  std::vector<std::vector<cplx>> pw(F);
  for (int f = 0; f < F; ++f) {
    pw[f].resize(bound + 1);
    cplx cur = 1.0;
    for (int n = 0; n <= bound; ++n) {
      pw[f][n] = cur / sqrt_factorial(n);
      cur *= p.b[free_modes[f]];
    }
  }
  // Iterate the F-dimensional box [0, bound]^F.
  while (true) {
    cplx amp = 0.0;
    for (int f = 0; f < F; ++f) {
      const int n = occ[f];
      if (n == 0) continue;
      // c_f * n * b_f^{n-1}/sqrt(n!) * prod_{j != f} b_j^{n_j}/sqrt(n_j!)
      cplx term = p.c[free_modes[f]] * double(n) * pw[f][n - 1] /
                  std::sqrt(double(n));
      for (int j = 0; j < F; ++j)
        if (j != f) term *= pw[j][occ[j]];
      amp += term;
    }
    const double w = std::norm(amp);
    total += w;
    bool outer = false;
    for (int f = 0; f < F; ++f) outer |= occ[f] == bound;
    if (outer) shell += w;
    int f = F - 1;
    while (f >= 0 && ++occ[f] > bound) occ[f--] = 0;
    if (f < 0) break;
  }
  if (tail) *tail = total > 0.0 ? shell / total : 0.0;
  return total;
}

}  // namespace detail

/// Published click-detection probabilities, evaluated from the exact
/// vacuum-projected sums over the g / alpha~ coefficient lists. The single
/// case follows the published form verbatim; the both case uses the
/// inclusion-exclusion combination 1 - e^{-A}(S1 + S2 - S3) (the published
/// rendering carries a sign misprint on the middle sum).
inline ClickCoefficients click_probability(const InterferometerConfig& cfg,
                                           DetectionOutcome variant,
                                           int bound = 30) {
  const auto p = detail::pre_detection(cfg.T, cfg.alpha_in);
  ClickCoefficients out;
  out.variant = variant;
  out.sum_bound = bound;
  out.g = {p.c[2], p.c[1], p.c[3], p.c[0]};  // g1..g4 of the published lists
  out.alpha_tilde = {p.b[2], p.b[1], p.b[3], p.b[0]};
  out.gamma_tilde3 = p.c[2] * p.b[3];
  out.gamma_tilde4 = p.c[3] * p.b[2];
  const double A = std::norm(cfg.alpha_in);
  const double eA = std::exp(-A);
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  const double S1 = detail::vacuum_projected_sum(p, {2}, bound, &t1);     // ch3 silent
  const double S3 = detail::vacuum_projected_sum(p, {2, 3}, bound, &t3);  // both silent
  switch (variant) {
    case DetectionOutcome::ch4_only:
      out.P = eA * (S1 - S3);
      break;
    case DetectionOutcome::ch3_only: {
      const double S2 = detail::vacuum_projected_sum(p, {3}, bound, &t2);
      out.P = eA * (S2 - S3);
      break;
    }
    case DetectionOutcome::both: {
      const double S2 = detail::vacuum_projected_sum(p, {3}, bound, &t2);
      out.P = 1.0 - eA * (S1 + S2 - S3);
      break;
    }
    case DetectionOutcome::none:
      out.P = eA * S3;
      break;
  }
  out.tail_warning = std::max({t1, t2, t3}) > 1e-9;
  return out;
}

/// Analytic click-detection output state as a Fock-space mixture:
///  single:  sum_{k>=1} |a4|^{2k-2}/k! |psi_k><psi_k|,
///           |psi_k> = (k gamma0 + gamma1 a1+ + gamma2 a2+)|a1, a2>;
///  both:    double sum with |psi_mn> = (m gt3 + n gt4 + gamma1 a1+ + gamma2 a2+)|..>.
/// Returned normalized, with the exact mixture probability in `p_out`.
inline DensityOperator click_state(const InterferometerConfig& cfg,
                                   DetectionOutcome variant, FockCutoff cutoff,
                                   double* p_out = nullptr, int kmax = 30) {
  const auto p = detail::pre_detection(cfg.T, cfg.alpha_in);
  const auto s = detail::splitter_amplitudes(cfg.T);
  const cplx i(0.0, 1.0);
  const cplx e = std::polar(1.0, cfg.phi);
  const auto rotate = [&](cplx g1, cplx g2) {
    return std::pair<cplx, cplx>(s.t4 * g1 + i * s.r4 * g2,
                                 e * (i * s.r4 * g1 + s.t4 * g2));
  };
  const cplx a1 = s.t4 * p.b[0] + i * s.r4 * p.b[1];
  const cplx a2 = e * (i * s.r4 * p.b[0] + s.t4 * p.b[1]);
  const double pref =
      std::exp(-(std::norm(p.b[2]) + std::norm(p.b[3])));

  DensityOperator rho(2, cutoff);
  double ptot = 0.0;
  auto add = [&](cplx g0, cplx g1, cplx g2, double w) {
    if (w < 1e-300) return;
    PureState base = tensor(coherent_state(a1, cutoff), coherent_state(a2, cutoff));
    Vec v = g0 * base.amplitudes() +
            g1 * ladder_apply(base, 0, Ladder::create).amplitudes() +
            g2 * ladder_apply(base, 1, Ladder::create).amplitudes();
    rho.matrix().noalias() += w * (v * v.adjoint());
    ptot += w * detail::coefficient_norm2(g0, g1, g2, a1, a2);
  };
  if (variant == DetectionOutcome::ch4_only || variant == DetectionOutcome::ch3_only) {
    const bool ch4 = variant == DetectionOutcome::ch4_only;
    const cplx bdet = ch4 ? p.b[3] : p.b[2];
    const cplx g0 = ch4 ? p.c[3] : p.c[2];
    const auto [g1, g2] = rotate(p.c[0] * bdet, p.c[1] * bdet);
    const double bd2 = std::norm(bdet);
    double w = pref;  // |bdet|^{2k-2}/k! at k = 1
    for (int k = 1; k <= kmax; ++k) {
      add(double(k) * g0, g1, g2, w);
      w *= bd2 / double(k + 1);
    }
  } else if (variant == DetectionOutcome::both) {
    const cplx gt3 = p.c[2] * p.b[3], gt4 = p.c[3] * p.b[2];
    const auto [g1, g2] = rotate(p.c[0] * p.b[2] * p.b[3], p.c[1] * p.b[2] * p.b[3]);
    const double b32 = std::norm(p.b[2]), b42 = std::norm(p.b[3]);
    for (int m = 1; m <= kmax; ++m)
      for (int n = 1; n <= kmax; ++n) {
        const double w = pref * std::pow(b32, m - 1) * std::pow(b42, n - 1) /
                         (factorial(m) * factorial(n));
        add(double(m) * gt3 + double(n) * gt4, g1, g2, w);
      }
  } else {
    throw std::invalid_argument("click_state: variant must be a click event");
  }
  if (p_out) *p_out = ptot;
  rho.matrix() /= ptot;
  return rho;
}

/// Moment polynomials of the normalized analytic PNR state (the published
/// appendix expressions, with N^2 = 1/Q from the coefficient bundle).
inline Moments pnr_moments(const PnrCoefficients& cf) {
  const cplx g0 = cf.gamma0, g1 = cf.gamma1, g2 = cf.gamma2;
  const cplx a1 = cf.alpha1, a2 = cf.alpha2;
  const double n2 = cf.N * cf.N;
  const double A1 = std::norm(a1), A2 = std::norm(a2);
  const double G0 = std::norm(g0), G1 = std::norm(g1), G2 = std::norm(g2);
  auto C = [](cplx z) { return std::conj(z); };
  Moments m;
  m.a = n2 * (G0 * a1 + C(g0) * g1 * (A1 + 1.0) + C(g0) * g2 * a1 * C(a2) +
              C(g1) * g0 * a1 * a1 + G1 * a1 * (A1 + 2.0) +
              C(g1) * g2 * a1 * a1 * C(a2) + C(g2) * g0 * a1 * a2 +
              C(g2) * g1 * a2 * (A1 + 1.0) + G2 * a1 * (A2 + 1.0));
  m.b = n2 * (G0 * a2 + C(g0) * g1 * a2 * C(a1) + C(g0) * g2 * (A2 + 1.0) +
              C(g1) * g0 * a1 * a2 + G1 * a2 * (A1 + 1.0) +
              C(g1) * g2 * a1 * (A2 + 1.0) + C(g2) * g0 * a2 * a2 +
              C(g2) * g1 * a2 * a2 * C(a1) + G2 * a2 * (A2 + 2.0));
  m.a2 = n2 * (G0 * a1 * a1 + C(g0) * g1 * a1 * (A1 + 2.0) +
               C(g0) * g2 * a1 * a1 * C(a2) + C(g1) * g0 * a1 * a1 * a1 +
               G1 * a1 * a1 * (A1 + 3.0) + C(g1) * g2 * a1 * a1 * a1 * C(a2) +
               C(g2) * g0 * a2 * a1 * a1 + C(g2) * g1 * a2 * a1 * (A1 + 2.0) +
               G2 * a1 * a1 * (A2 + 1.0));
  m.b2 = n2 * (G0 * a2 * a2 + C(g0) * g1 * a2 * a2 * C(a1) +
               C(g0) * g2 * a2 * (A2 + 2.0) + C(g1) * g0 * a1 * a2 * a2 +
               G1 * (A1 + 1.0) * a2 * a2 + C(g1) * g2 * a1 * a2 * (A2 + 2.0) +
               C(g2) * g0 * a2 * a2 * a2 + C(g2) * g1 * a2 * a2 * a2 * C(a1) +
               G2 * a2 * a2 * (A2 + 3.0));
  m.aa_dag = n2 * (G0 * (A1 + 1.0) +
                   2.0 * (C(g0) * g1 * C(a1) * (A1 + 2.0)).real() +
                   2.0 * (C(g0) * g2 * C(a2) * (A1 + 1.0)).real() +
                   G1 * (A1 * A1 + 4.0 * A1 + 2.0) +
                   2.0 * (C(g1) * g2 * C(a2) * a1 * (A1 + 2.0)).real() +
                   G2 * (A1 + 1.0) * (A2 + 1.0));
  m.bb_dag = n2 * (G0 * (A2 + 1.0) +
                   2.0 * (C(g0) * g1 * C(a1) * (A2 + 1.0)).real() +
                   2.0 * (C(g0) * g2 * C(a2) * (A2 + 2.0)).real() +
                   G1 * (A1 + 1.0) * (A2 + 1.0) +
                   2.0 * (C(g1) * g2 * a1 * C(a2) * (A2 + 2.0)).real() +
                   G2 * (A2 * A2 + 4.0 * A2 + 2.0));
  m.ab = n2 * (G0 * a1 * a2 + g0 * C(g1) * a1 * a1 * a2 + g0 * C(g2) * a1 * a2 * a2 +
               g1 * C(g0) * a2 * (A1 + 1.0) + G1 * a2 * a1 * (A1 + 2.0) +
               g1 * C(g2) * a2 * a2 * (A1 + 1.0) + g2 * C(g0) * a1 * (A2 + 1.0) +
               g2 * C(g1) * a1 * a1 * (A2 + 1.0) + G2 * a1 * a2 * (A2 + 2.0));
  m.ab_dag = n2 * (G0 * a1 * C(a2) + C(g0) * g1 * C(a2) * (A1 + 1.0) +
                   C(g0) * g2 * a1 * C(a2) * C(a2) + C(g1) * g0 * a1 * a1 * C(a2) +
                   G1 * C(a2) * a1 * (A1 + 2.0) +
                   C(g1) * g2 * a1 * a1 * C(a2) * C(a2) +
                   C(g2) * g0 * a1 * (A2 + 1.0) +
                   C(g2) * g1 * (A1 + 1.0) * (A2 + 1.0) +
                   G2 * a1 * C(a2) * (A2 + 2.0));
  return m;
}

}  // namespace minl
