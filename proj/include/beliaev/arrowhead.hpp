#pragma once

#include <complex>
#include <vector>

namespace beliaev {

// Spectral decomposition of a real symmetric arrowhead matrix
//   [ head   c^T  ]
//   [ c    diag(d)]
// reduced to what the head-vector dynamics needs: eigenvalues lambda_j and
// head weights w_j = |<head basis vector | v_j>|^2.
//
// Equal diagonal entries are deflated first (couplings combine in
// quadrature; the orthogonal complement carries zero head weight), the
// remaining levels are strictly separated and the eigenvalues are the roots
// of the secular function
//   phi(lambda) = lambda - head - sum_g c_g^2/(lambda - d_g),
// one per pole gap plus one below and one above, found by bisection.
// phi is strictly increasing between poles, so bracketing is exact;
// w_j = 1/phi'(lambda_j).
struct ArrowheadSpectrum {
  std::vector<double> levels;   // eigenvalues with nonzero head weight
  std::vector<double> weights;  // w_j, sum_j w_j = 1

  // a(t) = sum_j w_j exp(-i lambda_j t)
  std::complex<double> amplitude(double t) const;

  // Moment identities used as internal consistency checks:
  // sum w = 1, sum w lambda = head, sum w lambda^2 = head^2 + |c|^2.
  double moment(int order) const;
};

ArrowheadSpectrum arrowhead_decompose(double head,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& coupling);

}  // namespace beliaev
