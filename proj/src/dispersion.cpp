#include "beliaev/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beliaev {

namespace {

// Golden-section refinement of a unimodal function on [a, b].
template <class F>
double golden_min(const F& f, double a, double b, double tol_width) {
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol_width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double scan_and_refine(const F& f, double a, double b, int n_grid) {
  double best_x = a, best_f = f(a);
  for (int i = 1; i <= n_grid; ++i) {
    const double x = a + (b - a) * i / n_grid;
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double h = (b - a) / n_grid;
  const double lo = std::max(a, best_x - h);
  const double hi = std::min(b, best_x + h);
  const double xm = golden_min(f, lo, hi, 1e-13 * std::max(1.0, b));
  return std::min(best_f, f(xm));
}

}  // namespace

double dispersion(const ModelParams& params, double k) {
  if (k < 0.0) throw std::domain_error("dispersion: k must be >= 0");
  if (k == 0.0) return 0.0;
  const double b = params.b_coeff(k);
  return k * std::sqrt(0.25 * k * k + b);
}

BogCoeffs bog_coeffs(const ModelParams& params, double k) {
  if (!(k > 0.0)) {
    throw std::domain_error("bog_coeffs: k = 0 is a singular point");
  }
  const double b = params.b_coeff(k);
  const double e = dispersion(params, k);
  if (!(e > 0.0)) {
    throw std::domain_error("bog_coeffs: dispersion vanishes at this k");
  }
  BogCoeffs out;
  out.energy = e;
  const double root = std::hypot(e, b);
  out.sigma = std::sqrt((root + e) / (2.0 * e));
  out.gamma = (b / (2.0 * e)) / out.sigma;
  return out;
}

double inverse_dispersion(const ModelParams& params, double e) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "inverse_dispersion: closed form needs the contact dispersion");
  }
  if (e < 0.0) throw std::domain_error("inverse_dispersion: e must be >= 0");
  const double mu = params.mu;
  return e * std::sqrt(2.0 / (std::hypot(e, mu) + mu));
}

double jacobian_f(const ModelParams& params, double u) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "jacobian_f: closed form needs the contact dispersion");
  }
  if (u < 0.0) throw std::domain_error("jacobian_f: u must be >= 0");
  return 1.0 / std::hypot(u, params.mu);
}

double two_qp_bottom(const ModelParams& params, double k) {
  if (k < 0.0) throw std::domain_error("two_qp_bottom: k must be >= 0");
  if (k == 0.0) return 0.0;
  if (params.is_contact()) return 2.0 * dispersion(params, 0.5 * k);
  // Convexity is not guaranteed for a generic ratio; minimize numerically.
  return two_qp_bottom_numeric(params, k);
}

double two_qp_bottom_numeric(const ModelParams& params, double k) {
  if (k < 0.0) throw std::domain_error("two_qp_bottom: k must be >= 0");
  if (k == 0.0) return 0.0;
  // For radial e the infimum sits on the k-axis; off-axis p only increases
  // both radii.  Beyond p in [0, k] both e_p and e_{p-k} grow, so the
  // interval covers the minimizer.
  auto f = [&](double p) {
    return dispersion(params, p) + dispersion(params, std::fabs(k - p));
  };
  return scan_and_refine(f, 0.0, k, 256);
}

double n_qp_bottom(const ModelParams& params, double k, int n) {
  if (n < 1) throw std::domain_error("n_qp_bottom: n must be >= 1");
  if (k < 0.0) throw std::domain_error("n_qp_bottom: k must be >= 0");
  if (n == 1) return dispersion(params, k);
  if (k == 0.0) return 0.0;
  if (params.is_contact()) return n * dispersion(params, k / n);
  // Iterated collinear infimal convolution b_n = e box b_{n-1}.
  double bottom = 0.0;
  // b_n(k) = min_p e(p) + b_{n-1}(k-p); evaluate recursively by splitting the
  // remaining momentum evenly as the starting guess and scanning around it.
  std::function<double(double, int)> rec = [&](double kk, int m) -> double {
    if (m == 1) return dispersion(params, kk);
    auto f = [&](double p) {
      return dispersion(params, p) + rec(std::fabs(kk - p), m - 1);
    };
    return scan_and_refine(f, 0.0, kk, 64);
  };
  bottom = rec(k, n);
  return bottom;
}

double critical_velocity(const ModelParams& params) {
  const double mu = params.mu;
  if (params.is_contact()) return std::sqrt(mu);
  auto speed = [&](double k) { return dispersion(params, k) / k; };
  // k -> 0 limit is sqrt(mu r(0)) = sqrt(mu); scan a log grid for any dip at
  // finite k.
  double best = std::sqrt(mu);
  const double k_lo = 1e-4, k_hi = 40.0;
  const int n = 600;
  double best_k = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, double(i) / n);
    const double s = speed(k);
    if (s < best) {
      best = s;
      best_k = k;
    }
  }
  if (best_k > 0.0) {
    const double step = std::pow(k_hi / k_lo, 1.0 / n);
    const double lo = best_k / step, hi = best_k * step;
    const double km = golden_min(speed, lo, hi, 1e-12 * hi);
    best = std::min(best, speed(km));
  }
  return best;
}

}  // namespace beliaev
