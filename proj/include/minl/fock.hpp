#pragma once

// Truncated multimode bosonic Fock-space numerics: pure states, density
// operators, ladder operators, tensor products, partial traces, expectations.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "minl/common.hpp"

namespace minl {

/// Per-mode photon-number cutoff. The basis of each mode is |0>..|n_max>.
struct FockCutoff {
  int n_max = 14;

  FockCutoff() = default;
  explicit FockCutoff(int n) : n_max(n) {
    if (n < 1) throw std::invalid_argument("FockCutoff: n_max must be >= 1");
  }
  int dim() const { return n_max + 1; }
  bool operator==(const FockCutoff&) const = default;
};

/// Numerical health flags carried through a pipeline. `truncated` is set when
/// amplitude is dropped at the cutoff boundary (creation on |n_max>, or a
/// beam splitter acting on a total-photon sector that spills past the cutoff).
/// `cutoff_warning` is set at construction time when a coherent state loses
/// more than 1e-6 of its norm to truncation.
struct StateFlags {
  bool truncated = false;
  bool cutoff_warning = false;

  StateFlags merged(const StateFlags& o) const {
    return {truncated || o.truncated, cutoff_warning || o.cutoff_warning};
  }
};

namespace detail {

inline std::vector<std::size_t> mode_strides(int modes, int dim) {
  std::vector<std::size_t> s(modes);
  std::size_t acc = 1;
  for (int m = modes - 1; m >= 0; --m) {
    s[m] = acc;
    acc *= dim;
  }
  return s;
}

inline std::size_t pow_size(int dim, int modes) {
  std::size_t n = 1;
  for (int m = 0; m < modes; ++m) n *= dim;
  return n;
}

}  // namespace detail

/// Pure state of `modes` bosonic modes with a uniform per-mode cutoff.
/// Amplitudes are stored mode-0-major: index = ((n0*d + n1)*d + ...).
/// Unnormalized states are permitted as intermediate post-measurement results.
class PureState {
 public:
  PureState(int modes, FockCutoff cutoff)
      : modes_(modes), cutoff_(cutoff),
        amp_(Vec::Zero(detail::pow_size(cutoff.dim(), modes))) {
    if (modes < 1) throw std::invalid_argument("PureState: modes must be >= 1");
  }

  static PureState vacuum(int modes, FockCutoff cutoff) {
    PureState s(modes, cutoff);
    s.amp_[0] = 1.0;
    return s;
  }

  int modes() const { return modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.dim(); }
  std::size_t size() const { return amp_.size(); }

  Vec& amplitudes() { return amp_; }
  const Vec& amplitudes() const { return amp_; }

  std::size_t index_of(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != modes_)
      throw std::invalid_argument("occupation list length != modes");
    std::size_t idx = 0;
    for (int m = 0; m < modes_; ++m) {
      if (occ[m] < 0 || occ[m] > cutoff_.n_max)
        throw std::out_of_range("occupation exceeds cutoff");
      idx = idx * cutoff_.dim() + occ[m];
    }
    return idx;
  }

  cplx amplitude(std::initializer_list<int> occ) const {
    return amp_[index_of(std::span<const int>(occ.begin(), occ.size()))];
  }
  cplx& amplitude_ref(std::initializer_list<int> occ) {
    return amp_[index_of(std::span<const int>(occ.begin(), occ.size()))];
  }

  double norm2() const { return amp_.squaredNorm(); }

  bool is_normalized(double tol = 1e-12) const {
    return std::abs(norm2() - 1.0) <= tol;
  }

  PureState normalized() const {
    double n2 = norm2();
    if (n2 <= 1e-24) throw heralding_error("cannot normalize a zero state");
    PureState out = *this;
    out.amp_ /= std::sqrt(n2);
    return out;
  }

  StateFlags& flags() { return flags_; }
  const StateFlags& flags() const { return flags_; }

 private:
  int modes_;
  FockCutoff cutoff_;
  Vec amp_;
  StateFlags flags_;
};

/// Density operator over `modes` modes, dimension dim()^modes.
class DensityOperator {
 public:
  DensityOperator(int modes, FockCutoff cutoff)
      : modes_(modes), cutoff_(cutoff) {
    if (modes < 1) throw std::invalid_argument("DensityOperator: modes must be >= 1");
    auto n = detail::pow_size(cutoff.dim(), modes);
    mat_ = Mat::Zero(n, n);
  }

  /// |psi><psi| of a pure state.
  explicit DensityOperator(const PureState& psi)
      : modes_(psi.modes()), cutoff_(psi.cutoff()),
        mat_(psi.amplitudes() * psi.amplitudes().adjoint()),
        flags_(psi.flags()) {}

  int modes() const { return modes_; }
  FockCutoff cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.dim(); }

  Mat& matrix() { return mat_; }
  const Mat& matrix() const { return mat_; }

  double trace() const { return mat_.trace().real(); }

  bool is_hermitian(double tol = 1e-12) const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }

  bool is_normalized(double tol = 1e-12) const {
    return std::abs(trace() - 1.0) <= tol;
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es((mat_ + mat_.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
  }

  double max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es((mat_ + mat_.adjoint()) / 2.0);
    return es.eigenvalues().maxCoeff();
  }

  DensityOperator normalized() const {
    double t = trace();
    if (t <= 1e-24) throw heralding_error("cannot normalize a zero-trace operator");
    DensityOperator out = *this;
    out.mat_ /= t;
    return out;
  }

  StateFlags& flags() { return flags_; }
  const StateFlags& flags() const { return flags_; }

 private:
  int modes_;
  FockCutoff cutoff_;
  Mat mat_;
  StateFlags flags_;
};

/// |n1, n2, ...> basis state.
inline PureState fock_state(const std::vector<int>& occupations, FockCutoff cutoff) {
  if (occupations.empty()) throw std::invalid_argument("fock_state: empty occupation list");
  for (int n : occupations)
    if (n < 0 || n > cutoff.n_max)
      throw std::out_of_range("fock_state: occupation exceeds cutoff");
  PureState s(static_cast<int>(occupations.size()), cutoff);
  s.amplitudes()[s.index_of(occupations)] = 1.0;
  return s;
}

struct CoherentOptions {
  bool renormalize = false;          // keep the truncated norm by default
  double warn_deficit = 1e-6;        // flag cutoff insufficiency above this
};

/// Single-mode coherent state |alpha>, truncated at the cutoff. The truncated
/// norm is kept as-is unless `renormalize` is requested; a norm deficit above
/// `warn_deficit` sets the cutoff_warning flag.
inline PureState coherent_state(cplx alpha, FockCutoff cutoff,
                                CoherentOptions opt = {}) {
  PureState s(1, cutoff);
  const double a2 = std::norm(alpha);
  cplx term = std::exp(-0.5 * a2);
  for (int n = 0; n <= cutoff.n_max; ++n) {
    s.amplitudes()[n] = term;
    term *= alpha / std::sqrt(double(n + 1));
  }
  double deficit = 1.0 - s.norm2();
  if (deficit > opt.warn_deficit) s.flags().cutoff_warning = true;
  if (opt.renormalize) s = s.normalized();
  return s;
}

inline PureState tensor(const PureState& a, const PureState& b) {
  if (!(a.cutoff() == b.cutoff()))
    throw std::invalid_argument("tensor: cutoff mismatch");
  PureState out(a.modes() + b.modes(), a.cutoff());
  const auto na = a.amplitudes().size(), nb = b.amplitudes().size();
  for (Eigen::Index i = 0; i < na; ++i)
    out.amplitudes().segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
  out.flags() = a.flags().merged(b.flags());
  return out;
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.cutoff() == b.cutoff()))
    throw std::invalid_argument("tensor: cutoff mismatch");
  DensityOperator out(a.modes() + b.modes(), a.cutoff());
  const auto na = a.matrix().rows(), nb = b.matrix().rows();
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j)
      out.matrix().block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  out.flags() = a.flags().merged(b.flags());
  return out;
}

/// Reduced density operator over the modes in `keep` (strictly increasing).
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= rho.modes())
      throw std::out_of_range("partial_trace: invalid mode index");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw std::invalid_argument("partial_trace: keep must be strictly increasing");
  }
  const int d = rho.dim();
  const int M = rho.modes();
  std::vector<int> traced;
  for (int m = 0; m < M; ++m)
    if (std::find(keep.begin(), keep.end(), m) == keep.end()) traced.push_back(m);

  DensityOperator out(static_cast<int>(keep.size()), rho.cutoff());
  const auto strides = detail::mode_strides(M, d);
  const std::size_t nkeep = detail::pow_size(d, static_cast<int>(keep.size()));
  const std::size_t ntr = detail::pow_size(d, static_cast<int>(traced.size()));

  auto expand = [&](std::size_t packed, const std::vector<int>& which) {
    std::size_t idx = 0;
    for (auto it = which.rbegin(); it != which.rend(); ++it) {
      idx += (packed % d) * strides[*it];
      packed /= d;
    }
    return idx;
  };

  for (std::size_t i = 0; i < nkeep; ++i) {
    const std::size_t bi = expand(i, keep);
    for (std::size_t j = 0; j < nkeep; ++j) {
      const std::size_t bj = expand(j, keep);
      cplx acc = 0.0;
      for (std::size_t t = 0; t < ntr; ++t) {
        const std::size_t bt = expand(t, traced);
        acc += rho.matrix()(bi + bt, bj + bt);
      }
      out.matrix()(i, j) = acc;
    }
  }
  out.flags() = rho.flags();
  return out;
}

enum class Ladder { annihilate, create };

struct LadderFactor {
  int mode;
  Ladder kind;
};
/// Operator product; factors compose left-to-right as written, i.e. the
/// product {a, b_dag} denotes the operator a * b_dag.
using LadderProduct = std::vector<LadderFactor>;

inline LadderFactor a_op(int mode) { return {mode, Ladder::annihilate}; }
inline LadderFactor adag_op(int mode) { return {mode, Ladder::create}; }

/// Apply a single ladder operator. Creation from level n_max drops the
/// amplitude and sets the truncated flag.
inline PureState ladder_apply(const PureState& psi, int mode, Ladder kind) {
  if (mode < 0 || mode >= psi.modes())
    throw std::out_of_range("ladder_apply: invalid mode");
  const int d = psi.dim();
  const auto strides = detail::mode_strides(psi.modes(), d);
  const std::size_t s = strides[mode];
  PureState out(psi.modes(), psi.cutoff());
  out.flags() = psi.flags();
  const auto& in = psi.amplitudes();
  auto& ov = out.amplitudes();
  const std::size_t total = in.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int n = static_cast<int>((idx / s) % d);
    if (kind == Ladder::annihilate) {
      if (n > 0) ov[idx - s] += std::sqrt(double(n)) * in[idx];
    } else {
      if (n < d - 1)
        ov[idx + s] += std::sqrt(double(n + 1)) * in[idx];
      else if (std::abs(in[idx]) > 0.0)
        out.flags().truncated = true;
    }
  }
  return out;
}

inline PureState apply_product(const PureState& psi, const LadderProduct& op) {
  PureState cur = psi;
  for (auto it = op.rbegin(); it != op.rend(); ++it)
    cur = ladder_apply(cur, it->mode, it->kind);
  return cur;
}

/// <psi| Op |psi> for a ladder-operator product.
inline cplx expectation(const PureState& psi, const LadderProduct& op) {
  const PureState right = apply_product(psi, op);
  return psi.amplitudes().dot(right.amplitudes());
}

/// Tr(rho * Op) for a ladder-operator product.
inline cplx expectation(const DensityOperator& rho, const LadderProduct& op) {
  // Tr(rho * Op): apply Op to each basis column of rho from the left,
  // i.e. compute sum_i <i| rho Op |i> = sum over columns of (Op rho)^T ... we
  // instead use Tr(rho Op) = sum_ij rho_ij Op_ji with Op applied columnwise.
  const int d = rho.dim();
  const int M = rho.modes();
  const auto strides = detail::mode_strides(M, d);
  // Build Op acting on column vectors implicitly: v -> Op v.
  auto apply_vec = [&](Vec v) {
    for (auto it = op.rbegin(); it != op.rend(); ++it) {
      Vec w = Vec::Zero(v.size());
      const std::size_t s = strides[it->mode];
      const std::size_t total = v.size();
      for (std::size_t idx = 0; idx < total; ++idx) {
        const int n = static_cast<int>((idx / s) % d);
        if (it->kind == Ladder::annihilate) {
          if (n > 0) w[idx - s] += std::sqrt(double(n)) * v[idx];
        } else if (n < d - 1) {
          w[idx + s] += std::sqrt(double(n + 1)) * v[idx];
        }
      }
      v = std::move(w);
    }
    return v;
  };
  cplx tr = 0.0;
  for (Eigen::Index j = 0; j < rho.matrix().cols(); ++j) {
    Vec col = apply_vec(rho.matrix().col(j));
    tr += col[j];
  }
  return tr;
}

/// Joint photon-number distribution P[n1][n2] of a two-mode density operator.
inline Eigen::MatrixXd photon_number_distribution(const DensityOperator& rho) {
  if (rho.modes() != 2)
    throw std::invalid_argument("photon_number_distribution: need 2 modes");
  const int d = rho.dim();
  Eigen::MatrixXd p(d, d);
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      p(n1, n2) = rho.matrix()(n1 * d + n2, n1 * d + n2).real();
  return p;
}

}  // namespace minl
