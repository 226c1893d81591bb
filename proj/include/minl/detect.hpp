#pragma once

// Measurement models for the two detector channels: ideal single-photon PNR
// projections and binary click POVMs, with heralding probabilities.

#include "minl/fock.hpp"

namespace minl {

enum class DetectorKind { pnr, click };

/// The four outcomes of Eq.-style two-detector measurement. Channel 3 is the
/// detector fed by the upper out-coupler (transmissivity T2, from mode index 1),
/// channel 4 the one fed by the lower out-coupler (T3, from mode index 0).
enum class DetectionOutcome { both, ch4_only, ch3_only, none };

struct DetectionEvent {
  DetectorKind kind = DetectorKind::pnr;
  DetectionOutcome outcome = DetectionOutcome::none;
};

inline const char* to_string(DetectionOutcome o) {
  switch (o) {
    case DetectionOutcome::both: return "both";
    case DetectionOutcome::ch4_only: return "ch4_only";
    case DetectionOutcome::ch3_only: return "ch3_only";
    case DetectionOutcome::none: return "none";
  }
  return "?";
}

namespace detail {

// Photon numbers registered by the two PNR detectors for an outcome.
inline std::pair<int, int> pnr_counts(DetectionOutcome o) {
  switch (o) {
    case DetectionOutcome::both: return {1, 1};
    case DetectionOutcome::ch4_only: return {0, 1};
    case DetectionOutcome::ch3_only: return {1, 0};
    case DetectionOutcome::none: return {0, 0};
  }
  throw std::invalid_argument("bad outcome");
}

// Whether occupation (n3, n4) belongs to a click outcome.
inline bool click_accepts(DetectionOutcome o, int n3, int n4) {
  switch (o) {
    case DetectionOutcome::both: return n3 >= 1 && n4 >= 1;
    case DetectionOutcome::ch4_only: return n3 == 0 && n4 >= 1;
    case DetectionOutcome::ch3_only: return n3 >= 1 && n4 == 0;
    case DetectionOutcome::none: return n3 == 0 && n4 == 0;
  }
  throw std::invalid_argument("bad outcome");
}

}  // namespace detail

/// Ideal PNR projection onto |n3>|n4> in modes 3,4 (indices 2,3) of a 4-mode
/// pure state. Returns the unnormalized projected 4-mode state and the event
/// probability. Modes 3,4 afterwards hold exactly the detected occupations.
inline std::pair<PureState, double> pnr_project(const PureState& psi,
                                                const DetectionEvent& event) {
  if (psi.modes() != 4) throw std::invalid_argument("pnr_project: need 4 modes");
  if (event.kind != DetectorKind::pnr)
    throw std::invalid_argument("pnr_project: event kind must be pnr");
  const auto [n3, n4] = detail::pnr_counts(event.outcome);
  const int d = psi.dim();
  PureState out(4, psi.cutoff());
  out.flags() = psi.flags();
  double p = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const std::size_t idx = ((static_cast<std::size_t>(a) * d + b) * d + n3) * d + n4;
      const cplx v = psi.amplitudes()[idx];
      out.amplitudes()[idx] = v;
      p += std::norm(v);
    }
  return {std::move(out), p};
}

/// Two-mode restriction of a PNR-projected state: modes 3,4 are in definite
/// Fock states after projection, so the reduction is an exact slice.
inline PureState reduce_after_pnr(const PureState& projected,
                                  const DetectionEvent& event) {
  const auto [n3, n4] = detail::pnr_counts(event.outcome);
  const int d = projected.dim();
  PureState out(2, projected.cutoff());
  out.flags() = projected.flags();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      out.amplitudes()[a * d + b] =
          projected.amplitudes()[((static_cast<std::size_t>(a) * d + b) * d + n3) * d + n4];
  return out;
}

/// Click POVM on modes 3,4 of a 4-mode pure state: applies
/// Pi_event = Pi3^(+/-) x Pi4^(+/-), traces out modes 3,4, and returns the
/// unnormalized reduced density operator together with P_det. The projector
/// is Fock-diagonal, so the reduced state is a sum of slice outer products.
inline std::pair<DensityOperator, double> click_povm(const PureState& psi,
                                                     const DetectionEvent& event) {
  if (psi.modes() != 4) throw std::invalid_argument("click_povm: need 4 modes");
  const int d = psi.dim();
  DensityOperator out(2, psi.cutoff());
  out.flags() = psi.flags();
  double p = 0.0;
  Vec slice(d * d);
  for (int n3 = 0; n3 < d; ++n3)
    for (int n4 = 0; n4 < d; ++n4) {
      if (!detail::click_accepts(event.outcome, n3, n4)) continue;
      double w = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const cplx v =
              psi.amplitudes()[((static_cast<std::size_t>(a) * d + b) * d + n3) * d + n4];
          slice[a * d + b] = v;
          w += std::norm(v);
        }
      if (w < 1e-300) continue;
      p += w;
      out.matrix().noalias() += slice * slice.adjoint();
    }
  return {std::move(out), p};
}

/// Click POVM on a 4-mode density operator (feasible at small cutoffs).
inline std::pair<DensityOperator, double> click_povm(const DensityOperator& rho,
                                                     const DetectionEvent& event) {
  if (rho.modes() != 4) throw std::invalid_argument("click_povm: need 4 modes");
  const int d = rho.dim();
  DensityOperator out(2, rho.cutoff());
  out.flags() = rho.flags();
  for (int n3 = 0; n3 < d; ++n3)
    for (int n4 = 0; n4 < d; ++n4) {
      if (!detail::click_accepts(event.outcome, n3, n4)) continue;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const std::size_t row = ((static_cast<std::size_t>(a) * d + b) * d + n3) * d + n4;
          for (int a2 = 0; a2 < d; ++a2)
            for (int b2 = 0; b2 < d; ++b2) {
              const std::size_t col =
                  ((static_cast<std::size_t>(a2) * d + b2) * d + n3) * d + n4;
              out.matrix()(a * d + b, a2 * d + b2) += rho.matrix()(row, col);
            }
        }
    }
  return {out, out.trace()};
}

/// Divide out the heralding probability: D = Pi_event / P_det.
inline PureState normalize_heralded(const PureState& psi, double p_det) {
  if (p_det <= 1e-12) throw heralding_error("heralding probability ~ 0");
  PureState out = psi;
  out.amplitudes() /= std::sqrt(p_det);
  return out;
}

inline DensityOperator normalize_heralded(const DensityOperator& rho, double p_det) {
  if (p_det <= 1e-12) throw heralding_error("heralding probability ~ 0");
  DensityOperator out = rho;
  out.matrix() /= p_det;
  return out;
}

}  // namespace minl
