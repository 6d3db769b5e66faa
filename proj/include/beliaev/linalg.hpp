#pragma once

#include <complex>
#include <vector>

namespace beliaev {

// Dense complex linear algebra used as an independent oracle for the
// Feshbach-Schur identities: column-major square matrix, LU with partial
// pivoting.  Dimensions stay small (a few hundred), no blocking needed.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t n) : n_(n), a_(n * n) {}

  std::complex<double>& operator()(std::size_t i, std::size_t j) {
    return a_[j * n_ + i];
  }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
    return a_[j * n_ + i];
  }
  std::size_t size() const { return n_; }

  // Solves (*this) x = b in place of a copy; throws on singular pivot.
  std::vector<std::complex<double>> solve(
      std::vector<std::complex<double>> b) const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> a_;
};

}  // namespace beliaev
