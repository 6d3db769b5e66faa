#include "beliaev/vertex.hpp"

#include <cmath>
#include <stdexcept>

#include "beliaev/dispersion.hpp"

namespace beliaev {

A1A2 A1A2::at(double mu, double x, double y) {
  return {std::hypot(x + y, 2.0 * mu), std::hypot(x - y, 2.0 * mu)};
}

double vertex_h(const ModelParams& params, double k, double p, double l) {
  if (!(k > 0.0 && p > 0.0 && l > 0.0)) {
    throw std::domain_error("vertex: k, p, l must all be positive");
  }
  // Tiny relative slack keeps boundary configurations reached through
  // coordinate round-trips from tripping the guard.
  if (std::fabs(p - l) > k * (1.0 + 1e-12) || k > (p + l) * (1.0 + 1e-12)) {
    throw std::domain_error("vertex: triangle constraints violated");
  }
  const BogCoeffs ck = bog_coeffs(params, k);
  const BogCoeffs cp = bog_coeffs(params, p);
  const BogCoeffs cl = bog_coeffs(params, l);
  const double bracket =
      ck.sigma * (cp.sigma * cl.sigma -
                  (cp.gamma * cl.sigma + cp.sigma * cl.gamma)) +
      ck.gamma * ((cp.sigma * cl.gamma + cp.gamma * cl.sigma) -
                  cp.gamma * cl.gamma);
  const double prefactor =
      2.0 * std::sqrt(params.mu * params.vhat0) * params.ratio_at(k);
  return prefactor * bracket;
}

double vertex_h(const ModelParams& params, const std::array<double, 3>& kvec,
                const std::array<double, 3>& pvec) {
  auto norm = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };
  const std::array<double, 3> lvec{kvec[0] - pvec[0], kvec[1] - pvec[1],
                                   kvec[2] - pvec[2]};
  return vertex_h(params, norm(kvec), norm(pvec), norm(lvec));
}

VertexEval vertex_eval(const ModelParams& params, const ShellCoords& coords) {
  return {vertex_h(params, coords.k, coords.p, coords.l), coords};
}

double vertex_h_cutoff(const ModelParams& params, double k, double p, double l,
                       double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("vertex: cutoff must be > 0");
  if (p + l < lambda) return vertex_h(params, k, p, l);
  return 0.0;
}

double integrand_xy_reduced(const ModelParams& params, double k, double x,
                            double y) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "integrand_xy: the algebraic reduction assumes vhat(k) = vhat(0)");
  }
  if (std::fabs(y) > x) {
    throw std::domain_error("integrand_xy: requires |y| <= x");
  }
  const double mu = params.mu;
  const BogCoeffs ck = bog_coeffs(params, k);
  const A1A2 a = A1A2::at(mu, x, y);
  const double a1 = a.a1, a2 = a.a2;
  // Grouped so that y -> -y (which swaps a1 <-> a2) reproduces every
  // intermediate value bitwise: the integrand is exactly even.
  const double prod = a1 * a2;
  const double sum = a1 + a2;
  const double cross = (x + y) * a2 + (x - y) * a1;
  const double xy = (x + y) * (x - y);  // x^2 - y^2
  const double t_ss =
      3.0 * prod + cross - xy - 4.0 * mu * (sum + 2.0 * x) + 8.0 * mu * mu;
  const double t_gg =
      3.0 * prod - cross - xy - 4.0 * mu * (sum - 2.0 * x) + 8.0 * mu * mu;
  const double t_sg = 4.0 * mu * sum - 2.0 * prod + 2.0 * xy - 12.0 * mu * mu;
  const double combo = ck.sigma * ck.sigma * t_ss + ck.gamma * ck.gamma * t_gg +
                       2.0 * ck.sigma * ck.gamma * t_sg;
  return params.mu * params.vhat0 * combo / prod;
}

double integrand_xy_direct(const ModelParams& params, double k, double x,
                           double y) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "integrand_xy: the direct route assumes vhat(k) = vhat(0)");
  }
  const double u = 0.5 * (x + y);
  const double w = 0.5 * (x - y);
  if (!(u > 0.0 && w > 0.0)) {
    throw std::domain_error("integrand_xy_direct: requires |y| < x");
  }
  const double p = inverse_dispersion(params, u);
  const double l = inverse_dispersion(params, w);
  const double h = vertex_h(params, k, p, l);
  const A1A2 a = A1A2::at(params.mu, x, y);
  return h * h * (x + y) * (x - y) / (a.a1 * a.a2);
}

}  // namespace beliaev
