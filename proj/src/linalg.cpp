#include "beliaev/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace beliaev {

std::vector<std::complex<double>> DenseMatrix::solve(
    std::vector<std::complex<double>> b) const {
  if (b.size() != n_) throw std::invalid_argument("solve: size mismatch");
  std::vector<std::complex<double>> lu = a_;
  std::vector<std::size_t> piv(n_);
  const std::size_t n = n_;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double best_mag = std::abs(lu[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = std::abs(lu[col * n + r]);
      if (m > best_mag) {
        best_mag = m;
        best = r;
      }
    }
    if (best_mag == 0.0) throw std::runtime_error("solve: singular matrix");
    piv[col] = best;
    if (best != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu[c * n + col], lu[c * n + best]);
      }
      std::swap(b[col], b[best]);
    }
    const std::complex<double> pivot = lu[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const std::complex<double> f = lu[col * n + r] / pivot;
      lu[col * n + r] = f;
      for (std::size_t c = col + 1; c < n; ++c) {
        lu[c * n + r] -= f * lu[c * n + col];
      }
      b[r] -= f * b[col];
    }
  }
  for (std::size_t ri = n; ri-- > 0;) {
    std::complex<double> acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= lu[c * n + ri] * b[c];
    b[ri] = acc / lu[ri * n + ri];
  }
  return b;
}

}  // namespace beliaev
