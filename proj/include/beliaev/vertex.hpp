#pragma once

#include <array>

#include "beliaev/coords.hpp"
#include "beliaev/params.hpp"

namespace beliaev {

// Vertex value together with the shell coordinates it was evaluated at.
struct VertexEval {
  double value = 0.0;
  ShellCoords coordinates;
};

// Denominator factors A1 = sqrt((x+y)^2 + 4 mu^2), A2 = sqrt((x-y)^2 + 4 mu^2)
// of the energy-coordinate integrands.  Both are >= 2 mu and swap under
// y -> -y.
struct A1A2 {
  double a1 = 0.0;
  double a2 = 0.0;

  static A1A2 at(double mu, double x, double y);
  double product() const { return a1 * a2; }
};

// Cubic interaction vertex h_k(p, l) for radial momenta obeying the triangle
// constraints,
//   h = 2 sqrt(mu vhat0) r(k) *
//       [ sigma_k (sigma_p sigma_l - gamma_p sigma_l - sigma_p gamma_l)
//       + gamma_k (sigma_p gamma_l + gamma_p sigma_l - gamma_p gamma_l) ].
// Rotation invariance of e and B makes the coefficients depend on the radii
// only, so gamma_{-k} = gamma_k and sigma_{-k} = sigma_k throughout.
// Exactly symmetric in p <-> l.  All three arguments must be positive.
double vertex_h(const ModelParams& params, double k, double p, double l);

// 3-vector adapter: radii are taken from kvec and pvec with l = |kvec - pvec|.
double vertex_h(const ModelParams& params, const std::array<double, 3>& kvec,
                const std::array<double, 3>& pvec);

VertexEval vertex_eval(const ModelParams& params, const ShellCoords& coords);

// Sharp ultraviolet cutoff h * 1{p + l < Lambda} (strict inequality).
double vertex_h_cutoff(const ModelParams& params, double k, double p, double l,
                       double lambda);

// Squared-vertex integrand in energy coordinates (contact only):
//   W(k, x, y) = h^2(x, y) (x^2 - y^2) / (A1 A2).
// The reduced route evaluates the closed algebraic regrouping of the square
// (three brackets weighted by sigma_k^2, gamma_k^2, sigma_k gamma_k); it is
// finite on the closed strip |y| <= x including the corners where h itself
// diverges.  The direct route reconstructs (p, l) through the inverse
// dispersion and squares the vertex; it needs |y| < x strictly.  The two are
// mutual oracles.
double integrand_xy_reduced(const ModelParams& params, double k, double x,
                            double y);
double integrand_xy_direct(const ModelParams& params, double k, double x,
                           double y);

}  // namespace beliaev
