#pragma once

// Optical elements and the four-mode interferometer pipeline: beam splitters,
// phase shifter, loss channels, out-coupling pair, and the full heralded run.
//
// Beam splitter convention (fixed globally, all closed forms depend on it):
//   a1+ -> t a1+ + i r a2+,  a2+ -> t a2+ + i r a1+,  t = cos(theta) = sqrt(T).
// This is the transformation generated by exp[i theta (a1 a2+ + a1+ a2)].

#include <array>
#include <optional>

#include "minl/detect.hpp"
#include "minl/fock.hpp"

namespace minl {

struct BeamSplitter {
  double theta = 0.0;
  std::pair<int, int> modes{0, 1};

  BeamSplitter() = default;
  BeamSplitter(double th, std::pair<int, int> m) : theta(th), modes(m) {
    if (modes.first == modes.second)
      throw std::invalid_argument("BeamSplitter: identical mode indices");
  }
  static BeamSplitter from_transmissivity(double T, std::pair<int, int> m) {
    if (T < 0.0 || T > 1.0)
      throw std::invalid_argument("BeamSplitter: T must be in [0,1]");
    return BeamSplitter(std::acos(std::sqrt(T)), m);
  }
  double t() const { return std::cos(theta); }
  double r() const { return std::sin(theta); }
  double T() const { return t() * t(); }
  double R() const { return r() * r(); }
};

struct PhaseShifter {
  double phi = 0.0;
  int mode = 0;
};

enum class LossPosition { before_detection, after_detection };

/// Photon loss modeled as a beam splitter of reflectivity R_loss coupling the
/// mode to a vacuum ancilla that is traced out.
struct LossChannel {
  double R_loss = 0.0;
  int mode = 0;
  LossPosition position = LossPosition::before_detection;

  LossChannel() = default;
  LossChannel(double R, int m, LossPosition pos)
      : R_loss(R), mode(m), position(pos) {
    if (R < 0.0 || R > 1.0)
      throw std::invalid_argument("LossChannel: R_loss must be in [0,1]");
  }
};

namespace detail {

/// Two-mode beam splitter matrix in the truncated Fock basis, stored as
/// dense blocks per total photon number N (the generator conserves N).
/// Blocks with N <= n_max are exactly unitary; higher blocks lose the
/// amplitude that would leave the truncated space.
struct TwoModeKernel {
  int d;
  std::vector<Mat> blocks;  // blocks[N], basis n1 = lo(N)..hi(N), n2 = N - n1

  static int lo(int N, int d) { return std::max(0, N - (d - 1)); }
  static int hi(int N, int d) { return std::min(N, d - 1); }
};

inline TwoModeKernel beamsplitter_kernel(double theta, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const double t = std::cos(theta), r = std::sin(theta);
  const cplx ir(0.0, r);
  TwoModeKernel K;
  K.d = d;
  K.blocks.resize(2 * d - 1);
  // Powers of t and (i r).
  std::vector<double> tp(2 * d, 1.0);
  std::vector<cplx> irp(2 * d, 1.0);
  for (int k = 1; k < 2 * d; ++k) {
    tp[k] = tp[k - 1] * t;
    irp[k] = irp[k - 1] * ir;
  }
  for (int N = 0; N <= 2 * (d - 1); ++N) {
    const int lo = TwoModeKernel::lo(N, d), hi = TwoModeKernel::hi(N, d);
    const int sz = hi - lo + 1;
    Mat B = Mat::Zero(sz, sz);
    for (int n1 = lo; n1 <= hi; ++n1) {
      const int n2 = N - n1;
      const double pref = 1.0 / (sqrt_factorial(n1) * sqrt_factorial(n2));
      // (t a1+ + i r a2+)^n1 (i r a1+ + t a2+)^n2 |0,0>
      for (int j = 0; j <= n1; ++j) {
        for (int k = 0; k <= n2; ++k) {
          const int p = j + k;  // photons ending in mode 1
          const int q = N - p;
          if (p >= d || q >= d) continue;
          const double binom =
              factorial(n1) / (factorial(j) * factorial(n1 - j)) *
              factorial(n2) / (factorial(k) * factorial(n2 - k));
          const cplx coef = binom * tp[j] * irp[n1 - j] * irp[k] * tp[n2 - k] *
                            pref * sqrt_factorial(p) * sqrt_factorial(q);
          B(p - lo, n1 - lo) += coef;
        }
      }
    }
    K.blocks[N] = std::move(B);
  }
  return K;
}

/// Apply the kernel to modes (mi, mj) of a flat amplitude vector.
/// Returns true if amplitude was lost to truncation.
inline bool apply_two_mode(Vec& amp, int modes, FockCutoff cutoff, int mi,
                           int mj, const TwoModeKernel& K) {
  const int d = cutoff.dim();
  const auto strides = mode_strides(modes, d);
  const std::size_t si = strides[mi], sj = strides[mj];
  // Enumerate base indices with n_i = n_j = 0.
  std::vector<int> other;
  for (int m = 0; m < modes; ++m)
    if (m != mi && m != mj) other.push_back(m);
  const std::size_t nbase = pow_size(d, static_cast<int>(other.size()));
  bool truncated = false;
  Vec in(d), out(d);
  for (std::size_t b = 0; b < nbase; ++b) {
    std::size_t base = 0, rem = b;
    for (auto it = other.rbegin(); it != other.rend(); ++it) {
      base += (rem % d) * strides[*it];
      rem /= d;
    }
    for (int N = 0; N <= 2 * (d - 1); ++N) {
      const int lo = TwoModeKernel::lo(N, d), hi = TwoModeKernel::hi(N, d);
      const int sz = hi - lo + 1;
      double in_norm = 0.0;
      for (int n1 = lo; n1 <= hi; ++n1) {
        const cplx v = amp[base + n1 * si + static_cast<std::size_t>(N - n1) * sj];
        in(n1 - lo) = v;
        in_norm += std::norm(v);
      }
      if (in_norm == 0.0) continue;
      out.head(sz).noalias() = K.blocks[N] * in.head(sz);
      if (N > cutoff.n_max &&
          out.head(sz).squaredNorm() < in_norm * (1.0 - 1e-14))
        truncated = true;
      for (int n1 = lo; n1 <= hi; ++n1)
        amp[base + n1 * si + static_cast<std::size_t>(N - n1) * sj] = out(n1 - lo);
    }
  }
  return truncated;
}

/// Loss Kraus operator K_m = (i sqrt(R))^m / sqrt(m!) * t^{n} a^m as a dense
/// single-mode matrix, t = sqrt(1 - R).
inline Mat loss_kraus(double R, int m, FockCutoff cutoff) {
  const int d = cutoff.dim();
  const double t = std::sqrt(1.0 - R);
  Mat K = Mat::Zero(d, d);
  const cplx ir = std::pow(cplx(0.0, std::sqrt(R)), m) / sqrt_factorial(m);
  for (int n = m; n < d; ++n) {
    // a^m |n> = sqrt(n!/(n-m)!) |n-m>, then t^{n-m}
    const double amp = std::sqrt(factorial(n) / factorial(n - m)) *
                       std::pow(t, n - m);
    K(n - m, n) = ir * amp;
  }
  return K;
}

/// Apply a single-mode operator to one mode of a flat amplitude vector.
inline Vec apply_one_mode(const Vec& amp, int modes, FockCutoff cutoff,
                          int mode, const Mat& op) {
  const int d = cutoff.dim();
  const auto strides = mode_strides(modes, d);
  const std::size_t s = strides[mode];
  Vec out = Vec::Zero(amp.size());
  const std::size_t total = amp.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const cplx v = amp[idx];
    if (v == cplx(0.0)) continue;
    const int n = static_cast<int>((idx / s) % d);
    const std::size_t base = idx - static_cast<std::size_t>(n) * s;
    for (int m = 0; m < d; ++m) {
      const cplx c = op(m, n);
      if (c != cplx(0.0)) out[base + static_cast<std::size_t>(m) * s] += c * v;
    }
  }
  return out;
}

}  // namespace detail

/// Apply a beam splitter to a pure state. Norm is preserved within 1e-12
/// unless the input reaches past the per-sector cutoff (truncated flag).
inline PureState apply_beamsplitter(const PureState& psi, const BeamSplitter& bs) {
  const auto [i, j] = bs.modes;
  if (i < 0 || j < 0 || i >= psi.modes() || j >= psi.modes() || i == j)
    throw std::invalid_argument("apply_beamsplitter: invalid mode pair");
  PureState out = psi;
  const auto K = detail::beamsplitter_kernel(bs.theta, psi.cutoff());
  if (detail::apply_two_mode(out.amplitudes(), psi.modes(), psi.cutoff(), i, j, K))
    out.flags().truncated = true;
  return out;
}

inline DensityOperator apply_beamsplitter(const DensityOperator& rho,
                                          const BeamSplitter& bs) {
  const auto [i, j] = bs.modes;
  if (i < 0 || j < 0 || i >= rho.modes() || j >= rho.modes() || i == j)
    throw std::invalid_argument("apply_beamsplitter: invalid mode pair");
  DensityOperator out = rho;
  const auto K = detail::beamsplitter_kernel(bs.theta, rho.cutoff());
  bool trunc = false;
  // U rho U+ column-by-column: B = U rho, then result = (U B+)+.
  auto apply_cols = [&](Mat& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Vec col = m.col(c);
      trunc |= detail::apply_two_mode(col, rho.modes(), rho.cutoff(), i, j, K);
      m.col(c) = col;
    }
  };
  apply_cols(out.matrix());
  Mat adj = out.matrix().adjoint();
  apply_cols(adj);
  out.matrix() = adj.adjoint();
  if (trunc) out.flags().truncated = true;
  return out;
}

/// Multiply the amplitude carrying n photons in the target mode by e^{i n phi}.
inline PureState apply_phase(const PureState& psi, const PhaseShifter& ps) {
  PureState out = psi;
  const int d = psi.dim();
  const auto strides = detail::mode_strides(psi.modes(), d);
  const std::size_t s = strides[ps.mode];
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const int n = static_cast<int>((idx / s) % d);
    out.amplitudes()[idx] *= std::polar(1.0, ps.phi * n);
  }
  return out;
}

inline DensityOperator apply_phase(const DensityOperator& rho, const PhaseShifter& ps) {
  DensityOperator out = rho;
  const int d = rho.dim();
  const auto strides = detail::mode_strides(rho.modes(), d);
  const std::size_t s = strides[ps.mode];
  const auto n_of = [&](std::size_t idx) {
    return static_cast<int>((idx / s) % d);
  };
  for (Eigen::Index r = 0; r < out.matrix().rows(); ++r)
    for (Eigen::Index c = 0; c < out.matrix().cols(); ++c)
      out.matrix()(r, c) *= std::polar(1.0, ps.phi * (n_of(r) - n_of(c)));
  return out;
}

/// Loss channel on a density operator: Kraus sum of the beam-splitter-to-
/// vacuum-ancilla model. Trace preserved; mean photon number scales by 1-R.
inline DensityOperator apply_loss(const DensityOperator& rho, const LossChannel& loss) {
  if (loss.mode < 0 || loss.mode >= rho.modes())
    throw std::out_of_range("apply_loss: invalid mode");
  if (loss.R_loss == 0.0) return rho;
  const int d = rho.dim();
  DensityOperator out(rho.modes(), rho.cutoff());
  out.flags() = rho.flags();
  for (int m = 0; m < d; ++m) {
    const Mat K = detail::loss_kraus(loss.R_loss, m, rho.cutoff());
    // K rho K+ columnwise.
    Mat tmp(rho.matrix().rows(), rho.matrix().cols());
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c)
      tmp.col(c) = detail::apply_one_mode(rho.matrix().col(c), rho.modes(),
                                          rho.cutoff(), loss.mode, K);
    Mat adj = tmp.adjoint();
    for (Eigen::Index c = 0; c < adj.cols(); ++c)
      adj.col(c) = detail::apply_one_mode(adj.col(c), rho.modes(), rho.cutoff(),
                                          loss.mode, K);
    out.matrix() += adj.adjoint();
  }
  return out;
}

/// Out-coupling pair: mode 2 couples to mode 3 with (t2, r2) and mode 1
/// couples to mode 4 with (t3, r3). Requires modes 3,4 of the input vacuum.
inline PureState apply_outcoupling(const PureState& psi, double T2, double T3) {
  if (psi.modes() != 4) throw std::invalid_argument("apply_outcoupling: need 4 modes");
  const int d = psi.dim();
  double occupied = 0.0;
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    const int n4 = static_cast<int>(idx % d);
    const int n3 = static_cast<int>((idx / d) % d);
    if (n3 > 0 || n4 > 0) occupied += std::norm(psi.amplitudes()[idx]);
  }
  if (occupied > 1e-20)
    throw std::invalid_argument("apply_outcoupling: modes 3,4 must be vacuum");
  PureState out = apply_beamsplitter(psi, BeamSplitter::from_transmissivity(T2, {1, 2}));
  return apply_beamsplitter(out, BeamSplitter::from_transmissivity(T3, {0, 3}));
}

/// Full configuration of the four-beam-splitter interferometer run.
struct InterferometerConfig {
  std::array<double, 4> T{1.0, 1.0, 1.0, 1.0};
  double phi = 0.0;
  cplx alpha_in = 0.0;
  std::vector<LossChannel> losses;
  DetectionEvent event;
  FockCutoff cutoff;
  /// Optional replacement for the default |1> x |alpha_in> two-mode input.
  std::optional<PureState> input_override;
};

struct InterferometerResult {
  DensityOperator rho_out;  // normalized two-mode output
  double p_det = 0.0;
  StateFlags flags;
};

namespace detail {

inline std::vector<Vec> kraus_branch(const std::vector<Vec>& branches, int modes,
                                     FockCutoff cutoff, int mode, double R,
                                     double prune = 1e-15) {
  if (R <= 0.0) return branches;
  const int d = cutoff.dim();
  std::vector<Vec> out;
  for (const auto& v : branches) {
    const double vn = v.squaredNorm();
    for (int m = 0; m < d; ++m) {
      Vec b = apply_one_mode(v, modes, cutoff, mode, loss_kraus(R, m, cutoff));
      const double bn = b.squaredNorm();
      if (bn > prune * std::max(vn, 1e-30))
        out.push_back(std::move(b));
      else if (m > 2 && bn < prune)
        break;
    }
  }
  return out;
}

}  // namespace detail

/// Execute the full pipeline:
///   BS1 -> [losses before] -> BS2,BS3 -> detection (P_det) -> reduction to
///   modes 1,2 -> [losses after] -> BS4 -> phase on mode 2.
/// The phase shifter acts after BS4 in evolution order; the paper composes
/// the two in the operator-substitution picture, which reverses the apparent
/// order of its Eq. (1) and is what all its closed forms correspond to.
/// Returns the normalized two-mode output and the detection probability.
inline InterferometerResult run_interferometer(const InterferometerConfig& cfg) {
  for (double T : cfg.T)
    if (T < 0.0 || T > 1.0)
      throw std::invalid_argument("run_interferometer: T out of [0,1]");

  const FockCutoff cutoff = cfg.cutoff;
  const int d = cutoff.dim();

  PureState input2 = cfg.input_override
                         ? *cfg.input_override
                         : tensor(fock_state({1}, cutoff),
                                  coherent_state(cfg.alpha_in, cutoff));
  if (input2.modes() != 2 || !(input2.cutoff() == cutoff))
    throw std::invalid_argument("run_interferometer: input override must be 2-mode");
  PureState psi4 = tensor(input2, fock_state({0, 0}, cutoff));
  StateFlags flags = psi4.flags();

  psi4 = apply_beamsplitter(psi4, BeamSplitter::from_transmissivity(cfg.T[0], {0, 1}));

  std::vector<Vec> branches{psi4.amplitudes()};
  for (const auto& loss : cfg.losses)
    if (loss.position == LossPosition::before_detection)
      branches = detail::kraus_branch(branches, 4, cutoff, loss.mode, loss.R_loss);

  const auto bs2 = detail::beamsplitter_kernel(std::acos(std::sqrt(cfg.T[1])), cutoff);
  const auto bs3 = detail::beamsplitter_kernel(std::acos(std::sqrt(cfg.T[2])), cutoff);

  double p_det = 0.0;
  std::vector<Vec> reduced;  // two-mode branches (unnormalized)
  Mat rho_accum;             // used on the click path
  const bool is_click = cfg.event.kind == DetectorKind::click;
  if (is_click) rho_accum = Mat::Zero(d * d, d * d);

  for (auto& amp : branches) {
    flags.truncated |= detail::apply_two_mode(amp, 4, cutoff, 1, 2, bs2);
    flags.truncated |= detail::apply_two_mode(amp, 4, cutoff, 0, 3, bs3);
    PureState b(4, cutoff);
    b.amplitudes() = std::move(amp);
    if (cfg.event.kind == DetectorKind::pnr) {
      auto [projected, p] = pnr_project(b, cfg.event);
      p_det += p;
      if (p > 1e-300) reduced.push_back(reduce_after_pnr(projected, cfg.event).amplitudes());
    } else {
      auto [rho2, p] = click_povm(b, cfg.event);
      p_det += p;
      rho_accum += rho2.matrix();
    }
  }
  if (p_det <= 1e-12)
    throw heralding_error("run_interferometer: detection probability below 1e-12");

  // Collapse the click path into slice branches so the tail is uniform: the
  // accumulated matrix is a sum of outer products, but we keep it exact by
  // re-extracting branches only on the pure path.
  std::vector<LossChannel> after;
  for (const auto& loss : cfg.losses)
    if (loss.position == LossPosition::after_detection) after.push_back(loss);

  const BeamSplitter bs4 = BeamSplitter::from_transmissivity(cfg.T[3], {0, 1});
  const PhaseShifter ps{cfg.phi, 1};

  DensityOperator rho_out(2, cutoff);
  if (!is_click) {
    std::vector<Vec> two = std::move(reduced);
    for (const auto& loss : after)
      two = detail::kraus_branch(two, 2, cutoff, loss.mode, loss.R_loss);
    const auto k4 = detail::beamsplitter_kernel(bs4.theta, cutoff);
    Mat acc = Mat::Zero(d * d, d * d);
    for (auto& v : two) {
      flags.truncated |= detail::apply_two_mode(v, 2, cutoff, 0, 1, k4);
      const int dd = d;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const int n2 = static_cast<int>(i % dd);
        v[i] *= std::polar(1.0, cfg.phi * n2);
      }
      acc.noalias() += v * v.adjoint();
    }
    rho_out.matrix() = acc;
  } else {
    DensityOperator rho2(2, cutoff);
    rho2.matrix() = std::move(rho_accum);
    for (const auto& loss : after)
      rho2 = apply_loss(rho2, LossChannel(loss.R_loss, loss.mode, loss.position));
    rho2 = apply_beamsplitter(rho2, bs4);
    rho2 = apply_phase(rho2, ps);
    flags = flags.merged(rho2.flags());
    rho_out.matrix() = rho2.matrix();
  }

  rho_out.matrix() /= p_det;
  rho_out.flags() = flags;
  return {std::move(rho_out), p_det, flags};
}

/// Convenience: equal-split loss channels on both arms per the paper's
/// R_top = R_bottom condition, from the summed coefficients.
inline std::vector<LossChannel> equal_split_losses(double Rb_sum, double Ra_sum) {
  std::vector<LossChannel> losses;
  if (Rb_sum > 0.0) {
    losses.emplace_back(Rb_sum / 2.0, 0, LossPosition::before_detection);
    losses.emplace_back(Rb_sum / 2.0, 1, LossPosition::before_detection);
  }
  if (Ra_sum > 0.0) {
    losses.emplace_back(Ra_sum / 2.0, 0, LossPosition::after_detection);
    losses.emplace_back(Ra_sum / 2.0, 1, LossPosition::after_detection);
  }
  return losses;
}

}  // namespace minl
