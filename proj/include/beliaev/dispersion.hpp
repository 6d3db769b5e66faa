#pragma once

#include "beliaev/params.hpp"

namespace beliaev {

// Bogoliubov mixing amplitudes at wavenumber k.  sigma^2 - gamma^2 = 1,
// sigma*gamma = B_k/(2 e_k).  Computed through the cancellation-free forms
//   sigma^2 = (sqrt(e^2+B^2) + e) / (2e),   gamma = (B/(2e)) / sigma,
// which stay accurate both at small k (where gamma diverges) and at large k
// (where the naive radical for gamma cancels catastrophically).
struct BogCoeffs {
  double sigma = 0.0;
  double gamma = 0.0;
  double energy = 0.0;  // e_k

  double sum_sq() const { return sigma * sigma + gamma * gamma; }
  double product() const { return sigma * gamma; }
};

// Quasiparticle dispersion e_k = sqrt(k^4/4 + B_k k^2).  e_0 = 0.
double dispersion(const ModelParams& params, double k);

// k = 0 is a singular point of the coefficients and is rejected.
BogCoeffs bog_coeffs(const ModelParams& params, double k);

// Contact-only inverse of the dispersion, k^2 = 2(sqrt(e^2+mu^2) - mu),
// written as k = e sqrt(2/(sqrt(e^2+mu^2)+mu)) to avoid cancellation.
double inverse_dispersion(const ModelParams& params, double e);

// Contact-only f(u) = d k^2 / d e^2 evaluated at e = u, i.e. 1/sqrt(u^2+mu^2).
double jacobian_f(const ModelParams& params, double u);

// Bottom of the 2-quasiparticle spectrum at total wavenumber k:
// inf_p { e_p + e_{|k-p|} }.  Radial convexity reduces the 3-D infimum to the
// collinear configuration; the contact case returns the closed form 2 e_{k/2},
// a generic ratio runs the 1-D minimizer.
double two_qp_bottom(const ModelParams& params, double k);

// Grid scan plus golden-section refinement of the collinear configuration.
// Used as the numerical oracle and for non-contact ratios.
double two_qp_bottom_numeric(const ModelParams& params, double k);

// Bottom of the n-quasiparticle spectrum; n e_{k/n} for convex (contact)
// dispersion, iterated collinear infimal convolution otherwise.
double n_qp_bottom(const ModelParams& params, double k, int n);

// c_crit = inf_{k>0} e_k / k.  Exactly sqrt(mu) for contact; a generic ratio
// is scanned on a log grid and refined.
double critical_velocity(const ModelParams& params);

}  // namespace beliaev
