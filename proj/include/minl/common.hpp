#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minl {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Thrown when a requested heralding event has vanishing probability.
struct heralding_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when the Fock cutoff is too small for the requested computation.
struct cutoff_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171, 1.0);
    for (int k = 1; k < 171; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  if (n < static_cast<int>(table.size())) return table[n];
  double v = table.back();
  for (int k = 171; k <= n; ++k) v *= k;
  return v;
}

inline double sqrt_factorial(int n) { return std::sqrt(factorial(n)); }

}  // namespace minl
