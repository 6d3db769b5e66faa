#pragma once

#include <array>
#include <complex>
#include <vector>

#include "beliaev/params.hpp"
#include "beliaev/quadrature.hpp"

namespace beliaev {

// Spectral parameter z.  boundary = true marks the on-shell limit e + i0,
// realized by the Sochocki-Plemelj split (principal value + delta line)
// rather than a small finite imaginary part.
struct ComplexEnergy {
  std::complex<double> z{0.0, 0.0};
  bool boundary = false;

  static ComplexEnergy regular(double re, double im) {
    return {{re, im}, false};
  }
  static ComplexEnergy regular(std::complex<double> z) { return {z, false}; }
  static ComplexEnergy on_shell(double e) { return {{e, 0.0}, true}; }
};

// Coordinate systems for the cutoff self-energy integral.
//   cartesian_pw : spherical (p, w=cos theta) with the sharp cutoff indicator,
//   ts           : sum/difference momenta t = p+l, s = p-l, exact cutoff
//                  rectangle t in (k, Lambda), |s| < k (canonical reference),
//   xy           : energy coordinates x = e_p+e_l, y = e_p-e_l over a bounding
//                  box with a membership test (contact dispersion only).
enum class Scheme { cartesian_pw, ts, xy };

const char* scheme_name(Scheme s);

struct QuadratureSpec {
  Scheme scheme = Scheme::ts;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 40000;
  double epsilon = 0.0;  // i*epsilon regularization used by validation scans
  int threads = 1;

  quad::Tol tol() const {
    return {abs_tol, rel_tol, max_subdivisions, threads};
  }
};

struct SigmaResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  Scheme scheme = Scheme::ts;
  long nodes = 0;
  bool converged = false;
};

// Thrown when an adaptive integral fails to reach its tolerance inside the
// subdivision budget.  Callers that prefer inspecting the estimate can use
// the *_result variants which only set the converged flag.
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cutoff self-energy Sigma_k^Lambda(z) of a quasiparticle at wavenumber k,
//   Sigma = (2 pi)^-3 Integral d^3p  h_k^Lambda(p)^2 / (z - e_p - e_l),
// reduced to two dimensions by azimuthal symmetry and evaluated in the
// coordinate system requested by spec.scheme.  Requires Im z != 0 or the
// boundary flag (contact only), k > 0 and Lambda > k.
SigmaResult sigma_cutoff(const ModelParams& params, double k,
                         const ComplexEnergy& z, double lambda,
                         const QuadratureSpec& spec = {});

// Im Sigma_k(e_k + i0) by the delta-line reduction (contact only):
//   -(1/(8 pi k)) Integral_{-e}^{e} h^2(e_k, y) (e^2 - y^2) / (A1 A2) dy.
// Independent of Lambda once the cutoff clears the on-shell manifold
// (t <= 2 k(e_k/2)); Lambda enters validation only, so equal inputs give
// bitwise equal outputs for any admissible Lambda.
double im_sigma_on_shell(const ModelParams& params, double k, double lambda,
                         const quad::Tol& tol = {});
quad::Result<double> im_sigma_on_shell_result(const ModelParams& params,
                                              double k, double lambda,
                                              const quad::Tol& tol = {});

// Re Sigma_k^Lambda(e_k + i0) by principal-value subtraction in the energy
// variable x (contact only).  The log endpoint term is added analytically.
double re_sigma_on_shell_pv(const ModelParams& params, double k, double lambda,
                            const quad::Tol& tol = {});

// Low-momentum damping constant C* in Im Sigma(e_k+i0) = -C* e_k^6/k (1+O(k^2)).
// Two closed-form candidates circulate for the contact case,
//   series chain :  3 vhat0 / (320 pi   mu^4)
//   prefactor/2  :  3 vhat0 / (640 pi^2 mu^4),
// differing by 2 pi.  The quadrature limit k -> 0 arbitrates; value carries
// the winner, both candidates stay visible.
struct BeliaevConstant {
  double value = 0.0;              // resolved constant
  double oracle = 0.0;             // Richardson-extrapolated quadrature limit
  double candidate_320pi = 0.0;   // 3 vhat0 / (320 pi mu^4)
  double candidate_640pi2 = 0.0;  // 3 vhat0 / (640 pi^2 mu^4)
  bool selected_320pi = false;
  double relative_gap = 0.0;       // |oracle - value| / value
};
BeliaevConstant beliaev_constant(const ModelParams& params);

// Closed sub-integrals of the on-shell reduction (sign = +1 selects A1,
// sign = -1 selects A2; both give the same value by y -> -y):
//   Integral_{-e}^{e} (e +- y)/A_+- dy = 2 sqrt(mu^2+e^2) - 2 mu,
//   Integral_{-e}^{e}       1/A_+- dy = asinh(e/mu).
double sub_integral_linear(const ModelParams& params, double e, int sign = +1);
double sub_integral_log(const ModelParams& params, double e, int sign = +1);
// Adaptive-quadrature counterparts, used as cross-checks.
double sub_integral_linear_quad(const ModelParams& params, double e, int sign,
                                const quad::Tol& tol = {});
double sub_integral_log_quad(const ModelParams& params, double e, int sign,
                             const quad::Tol& tol = {});

// Truncated small-e series of the two non-elementary sub-integrals,
//   Integral 1/(A1 A2)        = e/(2 mu^2) - e^3/(6 mu^4) + 19 e^5/(240 mu^6)
//                               - 13 e^7/(280 mu^8) + O(e^9),
//   Integral (e^2-y^2)/(A1 A2) = e^3/(3 mu^2) - e^5/(10 mu^4)
//                               + 11 e^7/(280 mu^6) + O(e^9),
// with x pinned to e.  Oracles only; never used on the evaluation path.
double series_inv_a1a2(const ModelParams& params, double e);
double series_weighted_a1a2(const ModelParams& params, double e);
double quad_inv_a1a2(const ModelParams& params, double e,
                     const quad::Tol& tol = {});
double quad_weighted_a1a2(const ModelParams& params, double e,
                          const quad::Tol& tol = {});

// Exactly integrable bracket of the on-shell reduction,
//   10 mu sqrt((e/mu)^2+1) - 8 mu
//     - 8 mu ((sqrt((e/mu)^2+1)-1)/(e/mu)) asinh(e/mu),
// and its expansion 2 mu + e^2/mu + 5 e^4/(12 mu^3) - 41 e^6/(120 mu^5).
double closed_bracket(const ModelParams& params, double e);
double closed_bracket_expansion(const ModelParams& params, double e);

// Sigma_k^Lambda(0): finite for k > 0, negative, divergent like -1/k as
// k -> 0 and unbounded below as Lambda grows.
quad::Result<double> sigma_at_zero(const ModelParams& params, double k,
                                   double lambda, const quad::Tol& tol = {});

// Sigma_k^Lambda(z) - Sigma_k^Lambda(0) on an increasing Lambda ladder.
// The combined kernel z h^2 (t^2-s^2) / (8k (z - D) D) decays like t^-2, so
// the remainder scales like 1/Lambda; the ladder is Richardson-extrapolated
// against that model.
struct RenormalizedSigma {
  std::complex<double> value{0.0, 0.0};     // extrapolated limit
  double residual = 0.0;                    // |last - previous| ladder gap
  std::vector<std::complex<double>> ladder; // per-Lambda differences
  bool converged = false;                   // gaps shrink monotonically
};
RenormalizedSigma sigma_renormalized(const ModelParams& params, double k,
                                     const ComplexEnergy& z,
                                     const std::vector<double>& lambda_ladder,
                                     const quad::Tol& tol = {});

// Four left-hand sides of the small-s coincidence bounds at (t, s):
//   e_{t/2}/(e_p+e_l) - 1/2,
//   p l/(e_p e_l) - t^2/(4 e_{t/2}^2),
//   sigma_p sigma_l sqrt(e_p e_l) - sigma_{t/2}^2 e_{t/2},
//   gamma_p gamma_l sqrt(e_p e_l) - gamma_{t/2}^2 e_{t/2}.
// All four are exactly zero at s = 0 and O(s^2) at fixed t.
std::array<double, 4> symmetric_point_deviations(const ModelParams& params, double t,
                                      double s);

// Small-k limit of the dominant Sigma(0) block:
//   lhs(k)  = Int_k^Lambda dt Int_{-k}^{k} ds
//             (sigma_p sigma_l - gamma_p gamma_l)^2 p l / (8 k (e_p + e_l)),
// Two closed-form candidates circulate for the k -> 0 limit of lhs,
//   Int_0^Lambda t^2/(64 e_{t/2}) dt  and its double with 32 in place of 64,
// differing by the width of the s integration; the quadrature sequence
// lhs(k) arbitrates (selfcheck names the winner).
struct SigmaZeroLimit {
  double lhs = 0.0;
  double limit_candidate_64 = 0.0;
  double limit_candidate_32 = 0.0;
};
SigmaZeroLimit sigma_zero_limit_check(const ModelParams& params, double lambda,
                              double k, const quad::Tol& tol = {});

}  // namespace beliaev
