#include "beliaev/self_energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "beliaev/dispersion.hpp"
#include "beliaev/vertex.hpp"

namespace beliaev {

namespace {

constexpr double kPi = std::numbers::pi;

double sqr(double v) { return v * v; }

// Smallest cutoff that keeps the whole on-shell manifold x = e_k inside the
// integration region: the shell reaches t = 2 k(e_k/2) at y = 0.
double shell_t_max(const ModelParams& params, double k) {
  const double e = dispersion(params, k);
  return 2.0 * inverse_dispersion(params, 0.5 * e);
}

void require_onshell_cutoff(const ModelParams& params, double k,
                            double lambda) {
  if (!(lambda > shell_t_max(params, k))) {
    throw std::domain_error(
        "on-shell self-energy: cutoff clips the energy shell");
  }
}

// h^2 evaluated through sum/difference momenta, finite up to rounding on the
// closed rectangle except the corners (where it stays integrable).
double h_squared_ts(const ModelParams& params, double k, double t, double s) {
  const double p = 0.5 * (t + s);
  const double l = 0.5 * (t - s);
  const double h = vertex_h(params, k, p, l);
  return h * h;
}

struct XYGeometry {
  double x_lo, x_hi, y_hi;
};

XYGeometry xy_bounds(const ModelParams& params, double k, double lambda) {
  XYGeometry g;
  g.x_lo = 2.0 * dispersion(params, 0.5 * k);
  const double ep = dispersion(params, 0.5 * (lambda + k));
  const double el = dispersion(params, 0.5 * (lambda - k));
  g.x_hi = ep + el;
  g.y_hi = ep - el;
  return g;
}

// Admissible y interval(s) at fixed x, resolved to region boundaries so that
// no indicator jump ever lands inside a quadrature cell (an embedded-rule
// error estimate cannot see a step that falls between its nodes).  At fixed
// x the sum momentum t(x, |y|) decreases monotonically while s(x, |y|)
// increases, so each constraint has at most one root in |y|:
//   outer bound:  t = k   (x < e_k)  or  s = k  (x > e_k),
//   inner carve:  t = Lambda whenever t(x, 0) >= Lambda, leaving the two
//                 symmetric intervals [y_lam, y_outer] and mirrored.
struct YRegion {
  double y_outer = 0.0;
  double y_lambda = 0.0;  // 0 when the cutoff does not carve
  bool empty = true;
};

YRegion xy_region(const ModelParams& params, double k, double lambda,
                  double x) {
  YRegion reg;
  auto t_of = [&](double y) {
    return inverse_dispersion(params, 0.5 * (x + y)) +
           inverse_dispersion(params, 0.5 * (x - y));
  };
  auto s_of = [&](double y) {
    return inverse_dispersion(params, 0.5 * (x + y)) -
           inverse_dispersion(params, 0.5 * (x - y));
  };
  auto bisect = [&](auto f, double target, double lo, double hi, bool rising) {
    for (int it = 0; it < 90; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool below = f(mid) < target;
      if (below == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  if (t_of(0.0) <= k) return reg;  // below the triangle region entirely
  const double p_at_x = inverse_dispersion(params, x);  // t and s at |y| -> x
  if (p_at_x < k) {
    reg.y_outer = bisect(t_of, k, 0.0, x, false);
  } else if (p_at_x > k) {
    reg.y_outer = bisect(s_of, k, 0.0, x, true);
  } else {
    reg.y_outer = x;
  }
  if (t_of(0.0) >= lambda) {
    if (t_of(reg.y_outer) >= lambda) return reg;  // fully cut away
    reg.y_lambda = bisect(t_of, lambda, 0.0, reg.y_outer, false);
  }
  reg.empty = !(reg.y_outer > reg.y_lambda);
  return reg;
}

template <class T>
quad::Result<T> check_converged(quad::Result<T> r, const char* what) {
  if (!r.converged) {
    throw NonConvergence(std::string(what) +
                         ": quadrature error estimate above tolerance after "
                         "subdivision budget");
  }
  return r;
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::cartesian_pw: return "cartesian_pw";
    case Scheme::ts: return "ts";
    case Scheme::xy: return "xy";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Sigma_k^Lambda(z), Im z != 0
// ---------------------------------------------------------------------------

namespace {

// Measure chain from the Cartesian definition (the ground truth):
//   (2 pi)^-3 d^3p = (2 pi)^-2 p^2 dp dw          (azimuthal integral)
//   p^2 dp dw      = (p l / k) dp dl              (w -> l, l^2 = k^2+p^2-2kpw)
//   dp dl          = (1/2) dt ds, p l = (t^2-s^2)/4
// so the (t, s) weight is (t^2 - s^2)/(8k) over the exact cutoff rectangle
// t in (k, Lambda), |s| < k.  Variants of this weight circulate that differ by
// fixed factors; the cross-scheme agreement test pins this one.
SigmaResult sigma_ts(const ModelParams& params, double k,
                     std::complex<double> z, double lambda,
                     const QuadratureSpec& spec) {
  const double pref = 1.0 / sqr(2.0 * kPi);
  auto f = [&](double t, double s) -> std::complex<double> {
    const double p = 0.5 * (t + s);
    const double l = 0.5 * (t - s);
    const double h2 = h_squared_ts(params, k, t, s);
    const double measure = (t * t - s * s) / (8.0 * k);
    const std::complex<double> den =
        z - dispersion(params, p) - dispersion(params, l);
    return h2 * measure / den;
  };
  auto r = quad::integrate_2d(f, k, lambda, -k, k, spec.tol());
  SigmaResult out;
  out.value = pref * r.value;
  out.error_estimate = pref * r.error;
  out.scheme = Scheme::ts;
  out.nodes = r.evals;
  out.converged = r.converged;
  return out;
}

SigmaResult sigma_cartesian(const ModelParams& params, double k,
                            std::complex<double> z, double lambda,
                            const QuadratureSpec& spec) {
  const double pref = 1.0 / sqr(2.0 * kPi);
  quad::Tol outer = spec.tol();
  outer.threads = 1;  // inner-eval counters are not thread safe
  quad::Tol inner = spec.tol();
  inner.abs_tol = 0.05 * spec.abs_tol;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.threads = 1;
  long evals = 0;
  double inner_err_sum = 0.0;
  long outer_calls = 0;
  auto outer_f = [&](double w) -> std::complex<double> {
    auto inner_f = [&](double p) -> std::complex<double> {
      const double l2 = k * k + p * p - 2.0 * k * p * w;
      const double l = std::sqrt(std::max(l2, 0.0));
      if (!(l > 0.0) || p + l >= lambda) return {0.0, 0.0};
      const double h = vertex_h(params, k, p, l);
      const std::complex<double> den =
          z - dispersion(params, p) - dispersion(params, l);
      return h * h * p * p / den;
    };
    // The indicator jumps at the cutoff surface p + l(p, w) = Lambda, a
    // prolate spheroid with the exact radial section
    //   p*(w) = (Lambda^2 - k^2) / (2 (Lambda - k w)).
    // Splitting the inner interval there puts the jump on a cell boundary;
    // otherwise the embedded error estimate can go blind on a step that
    // falls between its nodes and freeze a biased cell.
    const double p_star = (lambda * lambda - k * k) / (2.0 * (lambda - k * w));
    auto ri = quad::integrate_1d(inner_f, 0.0, p_star, inner);
    evals += ri.evals;
    inner_err_sum += ri.error;
    ++outer_calls;
    return ri.value;
  };
  auto r = quad::integrate_1d(outer_f, -1.0, 1.0, outer);
  SigmaResult out;
  out.value = pref * r.value;
  const double inner_err_mean =
      outer_calls > 0 ? inner_err_sum / double(outer_calls) : 0.0;
  out.error_estimate = pref * (r.error + 2.0 * inner_err_mean);
  out.scheme = Scheme::cartesian_pw;
  out.nodes = r.evals + evals;
  out.converged = r.converged;
  return out;
}

// Energy-coordinate chain (contact only): with u = e_p, w = e_l,
//   (1/(4k)) dp^2 dl^2 = (1/(4k)) f(u) f(w) du^2 dw^2,  f(u) = dk^2/de^2,
//   du^2 dw^2 = ((x^2-y^2)/2) dx dy,  f = 2/A on each factor,
// which collapses to (x^2 - y^2) / (8 pi^2 k A1 A2) per unit vhat-squared
// vertex, divided by (z - x).
SigmaResult sigma_xy(const ModelParams& params, double k,
                     std::complex<double> z, double lambda,
                     const QuadratureSpec& spec) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "sigma_cutoff: the xy scheme needs the contact dispersion");
  }
  const double pref = 1.0 / (8.0 * kPi * kPi * k);
  const double im_z = std::fabs(z.imag());
  const XYGeometry g = xy_bounds(params, k, lambda);
  quad::Tol outer = spec.tol();
  outer.abs_tol /= 3.0;  // up to three sub-intervals below
  outer.threads = 1;
  quad::Tol inner = spec.tol();
  // inner errors reach the outer integrand divided by |z - x| >= |Im z|
  inner.abs_tol =
      0.05 * spec.abs_tol * im_z / std::max(1.0, g.x_hi - g.x_lo);
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.threads = 1;
  long evals = 0;
  double inner_err_sum = 0.0;
  long outer_calls = 0;
  auto outer_f = [&](double x) -> std::complex<double> {
    const YRegion reg = xy_region(params, k, lambda, x);
    if (reg.empty) return {0.0, 0.0};
    auto inner_f = [&](double y) {
      return integrand_xy_reduced(params, k, x, y);
    };
    auto ri = quad::integrate_1d(inner_f, reg.y_lambda, reg.y_outer, inner);
    evals += ri.evals;
    inner_err_sum += ri.error;
    ++outer_calls;
    // even in y: the mirrored interval contributes the same value
    return 2.0 * ri.value / (z - x);
  };
  // The outer integrand has analytic breakpoints: the outer-boundary branch
  // switch at x = e_k (t = k gives way to s = k) and the onset of the
  // cutoff carve at x = 2 e(Lambda/2).  Integrating the sub-intervals
  // separately keeps those kinks on cell boundaries.
  std::vector<double> cuts{g.x_lo};
  const double e_k = dispersion(params, k);
  const double x_carve = 2.0 * dispersion(params, 0.5 * lambda);
  if (e_k > g.x_lo && e_k < g.x_hi) cuts.push_back(e_k);
  if (x_carve > g.x_lo && x_carve < g.x_hi) cuts.push_back(x_carve);
  cuts.push_back(g.x_hi);
  std::sort(cuts.begin(), cuts.end());
  std::complex<double> value{0.0, 0.0};
  double outer_err = 0.0;
  long outer_evals = 0;
  bool converged = true;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto r = quad::integrate_1d(outer_f, cuts[i], cuts[i + 1], outer);
    value += r.value;
    outer_err += r.error;
    outer_evals += r.evals;
    converged = converged && r.converged;
  }
  SigmaResult out;
  out.value = pref * value;
  const double inner_err_mean =
      outer_calls > 0 ? inner_err_sum / double(outer_calls) : 0.0;
  out.error_estimate =
      pref * (outer_err + 2.0 * inner_err_mean * (g.x_hi - g.x_lo) / im_z);
  out.scheme = Scheme::xy;
  out.nodes = outer_evals + evals;
  out.converged = converged;
  return out;
}

}  // namespace

SigmaResult sigma_cutoff(const ModelParams& params, double k,
                         const ComplexEnergy& z, double lambda,
                         const QuadratureSpec& spec) {
  if (!(k > 0.0)) throw std::domain_error("sigma_cutoff: k must be positive");
  if (!(lambda > k)) {
    throw std::domain_error("sigma_cutoff: cutoff must exceed k");
  }
  if (z.boundary) {
    if (z.z.imag() != 0.0) {
      throw std::invalid_argument("boundary value must have Im z = 0");
    }
    const double e = dispersion(params, k);
    if (std::fabs(z.z.real() - e) > 1e-9 * std::max(1.0, e)) {
      throw std::invalid_argument(
          "boundary evaluation is implemented on shell, z = e_k + i0");
    }
    SigmaResult out;
    auto im = im_sigma_on_shell_result(params, k, lambda, spec.tol());
    const double re = re_sigma_on_shell_pv(params, k, lambda, spec.tol());
    out.value = {re, im.value};
    out.error_estimate = im.error;
    out.scheme = spec.scheme;
    out.nodes = im.evals;
    out.converged = im.converged;
    return out;
  }
  if (z.z.imag() == 0.0 && !(z.z.real() < 2.0 * dispersion(params, 0.5 * k))) {
    // Real z inside or above the 2-quasiparticle band hits the spectrum;
    // only the boundary flag (Plemelj split) or the sub-band real axis are
    // admissible.
    throw std::invalid_argument(
        "sigma_cutoff: real z in the band needs the boundary flag");
  }
  switch (spec.scheme) {
    case Scheme::ts: return sigma_ts(params, k, z.z, lambda, spec);
    case Scheme::cartesian_pw:
      return sigma_cartesian(params, k, z.z, lambda, spec);
    case Scheme::xy: return sigma_xy(params, k, z.z, lambda, spec);
  }
  throw std::logic_error("sigma_cutoff: unknown scheme");
}

// ---------------------------------------------------------------------------
// Boundary values on the shell
// ---------------------------------------------------------------------------

quad::Result<double> im_sigma_on_shell_result(const ModelParams& params,
                                              double k, double lambda,
                                              const quad::Tol& tol) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "im_sigma_on_shell: delta-line reduction needs the contact "
        "dispersion");
  }
  if (!(k > 0.0)) throw std::domain_error("im_sigma_on_shell: k > 0 required");
  require_onshell_cutoff(params, k, lambda);
  const double e = dispersion(params, k);
  auto f = [&](double y) { return integrand_xy_reduced(params, k, e, y); };
  auto r = quad::integrate_1d(f, -e, e, tol);
  const double pref = -1.0 / (8.0 * kPi * k);
  r.value *= pref;
  r.error *= std::fabs(pref);
  return r;
}

double im_sigma_on_shell(const ModelParams& params, double k, double lambda,
                         const quad::Tol& tol) {
  return check_converged(im_sigma_on_shell_result(params, k, lambda, tol),
                         "im_sigma_on_shell")
      .value;
}

double re_sigma_on_shell_pv(const ModelParams& params, double k, double lambda,
                            const quad::Tol& tol) {
  if (!params.is_contact()) {
    throw std::invalid_argument(
        "re_sigma_on_shell_pv: needs the contact dispersion");
  }
  if (!(k > 0.0)) throw std::domain_error("re_sigma_on_shell_pv: k > 0");
  require_onshell_cutoff(params, k, lambda);
  const double e = dispersion(params, k);
  const XYGeometry g = xy_bounds(params, k, lambda);
  if (!(g.x_lo < e && e < g.x_hi)) {
    throw std::domain_error("re_sigma_on_shell_pv: shell outside x range");
  }
  quad::Tol inner = tol;
  inner.abs_tol = std::min(tol.abs_tol, 1e-12);
  inner.threads = 1;
  auto density = [&](double x) {
    const YRegion reg = xy_region(params, k, lambda, x);
    if (reg.empty) return 0.0;
    auto f = [&](double y) { return integrand_xy_reduced(params, k, x, y); };
    return 2.0 * quad::integrate_1d(f, reg.y_lambda, reg.y_outer, inner).value;
  };
  const double ge = density(e);
  auto subtracted = [&](double x) {
    const double d = e - x;
    if (std::fabs(d) < 1e-14 * std::max(1.0, e)) return 0.0;
    return (density(x) - ge) / d;
  };
  quad::Tol outer = tol;
  // The integrand is smooth across x = e after subtraction; splitting there
  // keeps the Kronrod nodes away from the removable point.  The carve onset
  // x = 2 e(Lambda/2) is a kink of the density and gets its own boundary.
  const double x_carve = 2.0 * dispersion(params, 0.5 * lambda);
  auto left = quad::integrate_1d(subtracted, g.x_lo, e, outer);
  quad::Result<double> mid{}, right{};
  if (x_carve > e && x_carve < g.x_hi) {
    mid = quad::integrate_1d(subtracted, e, x_carve, outer);
    right = quad::integrate_1d(subtracted, x_carve, g.x_hi, outer);
  } else {
    right = quad::integrate_1d(subtracted, e, g.x_hi, outer);
  }
  const double log_term = ge * std::log((e - g.x_lo) / (g.x_hi - e));
  return (left.value + mid.value + right.value + log_term) /
         (8.0 * kPi * kPi * k);
}

// ---------------------------------------------------------------------------
// Damping constant
// ---------------------------------------------------------------------------

BeliaevConstant beliaev_constant(const ModelParams& params) {
  if (!params.is_contact()) {
    throw std::invalid_argument("beliaev_constant: contact dispersion only");
  }
  const double mu = params.mu;
  const double mu4 = sqr(sqr(mu));
  BeliaevConstant out;
  out.candidate_320pi = 3.0 * params.vhat0 / (320.0 * kPi * mu4);
  out.candidate_640pi2 = 3.0 * params.vhat0 / (640.0 * kPi * kPi * mu4);
  // Quadrature oracle: r(k) = |Im Sigma| k / e^6 has an even error term, so a
  // k^2 Richardson step on a halved pair extrapolates to k -> 0.
  auto ratio_at = [&](double k) {
    const double e = dispersion(params, k);
    const double im = im_sigma_on_shell(params, k, 2.0 * k, {1e-14, 1e-12});
    return std::fabs(im) * k / std::pow(e, 6);
  };
  const double scale = std::sqrt(mu);  // k ~ e/sqrt(mu); keep e small
  const double r1 = ratio_at(0.04 * scale);
  const double r2 = ratio_at(0.02 * scale);
  out.oracle = (4.0 * r2 - r1) / 3.0;
  const double gap_320pi =
      std::fabs(out.oracle - out.candidate_320pi) / out.candidate_320pi;
  const double gap_640pi2 =
      std::fabs(out.oracle - out.candidate_640pi2) / out.candidate_640pi2;
  out.selected_320pi = gap_320pi <= gap_640pi2;
  out.value = out.selected_320pi ? out.candidate_320pi
                                  : out.candidate_640pi2;
  out.relative_gap = std::min(gap_320pi, gap_640pi2);
  return out;
}

// ---------------------------------------------------------------------------
// Closed sub-integrals, series oracles, bracket
// ---------------------------------------------------------------------------

double sub_integral_linear(const ModelParams& params, double e, int /*sign*/) {
  if (e < 0.0) throw std::domain_error("sub_integral_linear: e >= 0");
  return 2.0 * std::hypot(params.mu, e) - 2.0 * params.mu;
}

double sub_integral_log(const ModelParams& params, double e, int /*sign*/) {
  if (e < 0.0) throw std::domain_error("sub_integral_log: e >= 0");
  return std::asinh(e / params.mu);
}

double sub_integral_linear_quad(const ModelParams& params, double e, int sign,
                                const quad::Tol& tol) {
  const double mu = params.mu;
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto f = [&](double y) {
    const double v = e + sg * y;
    return v / std::hypot(v, 2.0 * mu);
  };
  return quad::integrate_1d(f, -e, e, tol).value;
}

double sub_integral_log_quad(const ModelParams& params, double e, int sign,
                             const quad::Tol& tol) {
  const double mu = params.mu;
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto f = [&](double y) { return 1.0 / std::hypot(e + sg * y, 2.0 * mu); };
  return quad::integrate_1d(f, -e, e, tol).value;
}

double series_inv_a1a2(const ModelParams& params, double e) {
  const double mu2 = sqr(params.mu);
  const double e2 = e * e;
  return e / (2.0 * mu2) *
         (1.0 +
          e2 / mu2 *
              (-1.0 / 3.0 +
               e2 / mu2 * (19.0 / 120.0 - e2 / mu2 * (13.0 / 140.0))));
}

double series_weighted_a1a2(const ModelParams& params, double e) {
  const double mu2 = sqr(params.mu);
  const double e3 = e * e * e;
  const double r = e * e / mu2;
  return e3 / mu2 * (1.0 / 3.0 + r * (-1.0 / 10.0 + r * (11.0 / 280.0)));
}

double quad_inv_a1a2(const ModelParams& params, double e,
                     const quad::Tol& tol) {
  auto f = [&](double y) {
    const A1A2 a = A1A2::at(params.mu, e, y);
    return 1.0 / (a.a1 * a.a2);
  };
  return quad::integrate_1d(f, -e, e, tol).value;
}

double quad_weighted_a1a2(const ModelParams& params, double e,
                          const quad::Tol& tol) {
  auto f = [&](double y) {
    const A1A2 a = A1A2::at(params.mu, e, y);
    return (e + y) * (e - y) / (a.a1 * a.a2);
  };
  return quad::integrate_1d(f, -e, e, tol).value;
}

double closed_bracket(const ModelParams& params, double e) {
  if (e < 0.0) throw std::domain_error("closed_bracket: e >= 0");
  const double mu = params.mu;
  const double eps = e / mu;
  const double root = std::hypot(1.0, eps);  // sqrt(1 + (e/mu)^2)
  // (root - 1)/eps written cancellation-free; the e -> 0 limit is exact.
  const double slope = eps == 0.0 ? 0.0 : eps / (1.0 + root);
  return 10.0 * mu * root - 8.0 * mu -
         8.0 * mu * slope * std::asinh(eps);
}

double closed_bracket_expansion(const ModelParams& params, double e) {
  const double mu = params.mu;
  const double r = sqr(e / mu);
  return mu * (2.0 + r * (1.0 + r * (5.0 / 12.0 - r * (41.0 / 120.0))));
}

// ---------------------------------------------------------------------------
// Renormalization studies
// ---------------------------------------------------------------------------

quad::Result<double> sigma_at_zero(const ModelParams& params, double k,
                                   double lambda, const quad::Tol& tol) {
  if (!(k > 0.0)) throw std::domain_error("sigma_at_zero: k > 0 required");
  if (!(lambda > k)) throw std::domain_error("sigma_at_zero: Lambda > k");
  const double pref = -1.0 / sqr(2.0 * kPi);
  auto f = [&](double t, double s) {
    const double p = 0.5 * (t + s);
    const double l = 0.5 * (t - s);
    const double h2 = h_squared_ts(params, k, t, s);
    const double den = dispersion(params, p) + dispersion(params, l);
    return h2 * (t * t - s * s) / (8.0 * k * den);
  };
  auto r = quad::integrate_2d(f, k, lambda, -k, k, tol);
  r.value *= pref;
  r.error *= std::fabs(pref);
  return r;
}

RenormalizedSigma sigma_renormalized(const ModelParams& params, double k,
                                     const ComplexEnergy& z,
                                     const std::vector<double>& ladder,
                                     const quad::Tol& tol) {
  if (ladder.size() < 2) {
    throw std::invalid_argument("sigma_renormalized: ladder needs >= 2 rungs");
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] > ladder[i - 1])) {
      throw std::invalid_argument("sigma_renormalized: ladder must increase");
    }
  }
  RenormalizedSigma out;
  if (z.z == std::complex<double>(0.0, 0.0) && !z.boundary) {
    out.ladder.assign(ladder.size(), {0.0, 0.0});
    out.converged = true;
    return out;  // Sigma(0) - Sigma(0) vanishes identically
  }
  const double pref = 1.0 / sqr(2.0 * kPi);
  for (double lam : ladder) {
    std::complex<double> delta;
    if (z.boundary) {
      const double re = re_sigma_on_shell_pv(params, k, lam, tol);
      const double im = im_sigma_on_shell(params, k, lam, tol);
      delta = std::complex<double>(re, im) - sigma_at_zero(params, k, lam, tol).value;
    } else {
      if (z.z.imag() == 0.0) {
        throw std::invalid_argument(
            "sigma_renormalized: Im z > 0 or the boundary flag required");
      }
      // Combined kernel z h^2 m / ((z - D) D) = h^2 m (1/(z-D) + 1/D);
      // one integral instead of a difference of two, and a t^-2 tail.
      auto f = [&](double t, double s) -> std::complex<double> {
        const double p = 0.5 * (t + s);
        const double l = 0.5 * (t - s);
        const double h2 = h_squared_ts(params, k, t, s);
        const double measure = (t * t - s * s) / (8.0 * k);
        const double den = dispersion(params, p) + dispersion(params, l);
        return h2 * measure * z.z / ((z.z - den) * den);
      };
      auto r = quad::integrate_2d(f, k, lam, -k, k, tol);
      delta = pref * r.value;
    }
    out.ladder.push_back(delta);
  }
  bool shrinking = true;
  double prev_gap = 0.0;
  for (std::size_t i = 1; i < out.ladder.size(); ++i) {
    const double gap = std::abs(out.ladder[i] - out.ladder[i - 1]);
    if (i > 1 && gap > prev_gap * 1.05 + 1e-14) shrinking = false;
    prev_gap = gap;
  }
  out.converged = shrinking;
  out.residual = prev_gap;
  // Remainder model S - c/Lambda from the last two rungs.
  const std::size_t n = out.ladder.size() - 1;
  const double l0 = ladder[n - 1], l1 = ladder[n];
  out.value = (l1 * out.ladder[n] - l0 * out.ladder[n - 1]) / (l1 - l0);
  if (!shrinking) {
    out.value = out.ladder.back();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma-level checks
// ---------------------------------------------------------------------------

std::array<double, 4> symmetric_point_deviations(const ModelParams& params, double t,
                                      double s) {
  if (!(t > 0.0) || std::fabs(s) >= t) {
    throw std::domain_error("symmetric_point_deviations: need 0 <= |s| < t");
  }
  const double p = 0.5 * (t + s);
  const double l = 0.5 * (t - s);
  const double half = 0.5 * t;
  const double ep = dispersion(params, p);
  const double el = dispersion(params, l);
  const double eh = dispersion(params, half);
  const BogCoeffs cp = bog_coeffs(params, p);
  const BogCoeffs cl = bog_coeffs(params, l);
  const BogCoeffs ch = bog_coeffs(params, half);
  std::array<double, 4> dev{};
  dev[0] = eh / (ep + el) - 0.5;
  dev[1] = (p * l) / (ep * el) - (t * t) / (4.0 * (eh * eh));
  const double root_pl = std::sqrt(ep * el);
  dev[2] = cp.sigma * cl.sigma * root_pl - (ch.sigma * ch.sigma) * eh;
  dev[3] = cp.gamma * cl.gamma * root_pl - (ch.gamma * ch.gamma) * eh;
  return dev;
}

SigmaZeroLimit sigma_zero_limit_check(const ModelParams& params, double lambda,
                              double k, const quad::Tol& tol) {
  if (!(k >= 0.0) || !(lambda > 0.0) || k > lambda) {
    throw std::domain_error("sigma_zero_limit_check: need 0 <= k <= Lambda");
  }
  SigmaZeroLimit out;
  auto limit_f = [&](double t) {
    return t * t / (64.0 * dispersion(params, 0.5 * t));
  };
  out.limit_candidate_64 = quad::integrate_1d(limit_f, 0.0, lambda, tol).value;
  out.limit_candidate_32 = 2.0 * out.limit_candidate_64;
  if (k == lambda || k == 0.0) {
    out.lhs = 0.0;  // empty t range / excluded endpoint
    return out;
  }
  auto f = [&](double t, double s) {
    const double p = 0.5 * (t + s);
    const double l = 0.5 * (t - s);
    const BogCoeffs cp = bog_coeffs(params, p);
    const BogCoeffs cl = bog_coeffs(params, l);
    const double combo = cp.sigma * cl.sigma - cp.gamma * cl.gamma;
    const double den =
        8.0 * k * (dispersion(params, p) + dispersion(params, l));
    return combo * combo * p * l / den;
  };
  out.lhs = quad::integrate_2d(f, k, lambda, -k, k, tol).value;
  return out;
}

}  // namespace beliaev
