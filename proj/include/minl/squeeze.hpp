#pragma once

// Joint-quadrature operators C1, C2 of a two-mode state, their variances,
// and squeezing relative to the shot-noise level 1/4.

#include "minl/fock.hpp"

namespace minl {

struct QuadraturePhase {
  double xi = 0.0;
};

/// Shot-noise (vacuum) variance of the joint quadratures in this convention.
constexpr double kShotNoise = 0.25;

/// First and second moments of the two mode operators a (mode 0) and b (mode 1).
struct Moments {
  cplx a, b, a2, b2, ab, ab_dag;  // <a>, <b>, <a^2>, <b^2>, <ab>, <a b+>
  double aa_dag, bb_dag;          // <a a+>, <b b+> (real)
};

namespace detail {

// Ladder moments of a two-mode pure state, computed directly on amplitudes.
inline Moments moments_pure(const PureState& psi) {
  if (psi.modes() != 2) throw std::invalid_argument("moments: need 2 modes");
  const double n2 = psi.norm2();
  if (n2 <= 1e-24) throw std::invalid_argument("moments: zero state");
  const auto av = ladder_apply(psi, 0, Ladder::annihilate);
  const auto bv = ladder_apply(psi, 1, Ladder::annihilate);
  const auto& p = psi.amplitudes();
  Moments m;
  m.a = p.dot(av.amplitudes()) / n2;
  m.b = p.dot(bv.amplitudes()) / n2;
  m.a2 = p.dot(ladder_apply(av, 0, Ladder::annihilate).amplitudes()) / n2;
  m.b2 = p.dot(ladder_apply(bv, 1, Ladder::annihilate).amplitudes()) / n2;
  m.ab = p.dot(ladder_apply(av, 1, Ladder::annihilate).amplitudes()) / n2;
  m.ab_dag = bv.amplitudes().dot(av.amplitudes()) / n2;
  m.aa_dag = av.norm2() / n2 + 1.0;
  m.bb_dag = bv.norm2() / n2 + 1.0;
  return m;
}

}  // namespace detail

/// Moment set of a normalized two-mode density operator.
inline Moments moments(const DensityOperator& rho) {
  if (rho.modes() != 2) throw std::invalid_argument("moments: need 2 modes");
  const double tr = rho.trace();
  if (tr <= 1e-24) throw std::invalid_argument("moments: zero-trace operator");
  Moments m;
  m.a = expectation(rho, {a_op(0)}) / tr;
  m.b = expectation(rho, {a_op(1)}) / tr;
  m.a2 = expectation(rho, {a_op(0), a_op(0)}) / tr;
  m.b2 = expectation(rho, {a_op(1), a_op(1)}) / tr;
  m.ab = expectation(rho, {a_op(0), a_op(1)}) / tr;
  m.ab_dag = expectation(rho, {a_op(0), adag_op(1)}) / tr;
  m.aa_dag = (expectation(rho, {a_op(0), adag_op(0)}) / tr).real();
  m.bb_dag = (expectation(rho, {a_op(1), adag_op(1)}) / tr).real();
  return m;
}

inline Moments moments(const PureState& psi) { return detail::moments_pure(psi); }

/// Variances of the joint quadratures C1, C2 at quadrature phase xi:
///   C1 = (e^{-i xi}(a+b) + e^{+i xi}(a+b)^+) / sqrt(8),  C2 its conjugate.
inline std::pair<double, double> two_mode_variance(const Moments& m,
                                                   QuadraturePhase xi) {
  const cplx e2 = std::polar(1.0, -2.0 * xi.xi);
  const cplx e1 = std::polar(1.0, -xi.xi);
  const cplx s2 = m.a2 + m.b2 + 2.0 * m.ab;
  const cplx s1 = m.a + m.b;
  const double var1 =
      0.25 * ((e2 * s2).real() + 2.0 * m.ab_dag.real() + m.aa_dag + m.bb_dag - 1.0) -
      0.5 * (e1 * s1).real() * (e1 * s1).real();
  const double var2 =
      -0.25 * ((e2 * s2).real() - 2.0 * m.ab_dag.real() - m.aa_dag - m.bb_dag + 1.0) -
      0.5 * (e1 * s1).imag() * (e1 * s1).imag();
  return {var1, var2};
}

/// S = 10 log10(var / (1/4)); negative iff squeezed below shot noise.
inline double squeezing_db(double var) {
  if (var <= 0.0) throw std::invalid_argument("squeezing_db: variance must be > 0");
  return 10.0 * std::log10(var / kShotNoise);
}

struct SqueezingReport {
  double var_C1 = kShotNoise;
  double var_C2 = kShotNoise;
  double S1_dB = 0.0;
  double S2_dB = 0.0;
  double p_det = 1.0;
  double xi = 0.0;
};

inline SqueezingReport make_report(const Moments& m, QuadraturePhase xi, double p_det) {
  auto [v1, v2] = two_mode_variance(m, xi);
  return {v1, v2, squeezing_db(v1), squeezing_db(v2), p_det, xi.xi};
}

struct XiSweepPoint {
  double xi;
  double S1_dB;
  double S2_dB;
};

/// S1(xi), S2(xi) curves; both are pi-periodic and shifted by pi/2 copies of
/// each other.
inline std::vector<XiSweepPoint> xi_sweep(const DensityOperator& rho,
                                          const std::vector<double>& xi_grid) {
  const Moments m = moments(rho);
  std::vector<XiSweepPoint> out;
  out.reserve(xi_grid.size());
  for (double xi : xi_grid) {
    auto [v1, v2] = two_mode_variance(m, QuadraturePhase{xi});
    out.push_back({xi, squeezing_db(v1), squeezing_db(v2)});
  }
  return out;
}

}  // namespace minl
