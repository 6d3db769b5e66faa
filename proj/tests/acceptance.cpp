// Acceptance suite: one quantitative check per release criterion, each
// printed as a PASS/FAIL line with its measured value.  Exit status is the
// number of failed criteria.
//
// Tolerances are pinned here, not configurable: loosening them is a release
// decision, not a runtime option.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <vector>

#include "beliaev/dispersion.hpp"
#include "beliaev/friedrichs.hpp"
#include "beliaev/linalg.hpp"
#include "beliaev/self_energy.hpp"
#include "beliaev/vertex.hpp"

using namespace beliaev;

namespace {

const ModelParams kContact = ModelParams::contact(1.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id,
              name, detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0,
                double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double uniform(unsigned long long& state) {
  state += 0x9e3779b97f4a7c15ull;
  unsigned long long x = state;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  x = x ^ (x >> 31);
  return double(x >> 11) * 0x1.0p-53;
}

struct LsqFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LsqFit lsq(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LsqFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// least squares for coefficients of given monomials; fitted in the scaled
// variable x/x_max (raw powers up to 9 on a short interval square the
// condition number of the normal equations past double precision)
std::vector<double> lsq_coeffs(const std::vector<double>& xs,
                               const std::vector<double>& ys,
                               const std::vector<int>& powers) {
  const std::size_t m = powers.size();
  double x_max = 0.0;
  for (double x : xs) x_max = std::max(x_max, x);
  std::vector<double> ata(m * m, 0.0), atb(m, 0.0);
  for (std::size_t s = 0; s < xs.size(); ++s) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j)
      row[j] = std::pow(xs[s] / x_max, powers[j]);
    for (std::size_t i = 0; i < m; ++i) {
      atb[i] += row[i] * ys[s];
      for (std::size_t j = 0; j < m; ++j) ata[i * m + j] += row[i] * row[j];
    }
  }
  // tiny symmetric solve by Gaussian elimination
  std::vector<double> a = ata, b = atb;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::fabs(a[r * m + col]) > std::fabs(a[piv * m + col])) piv = r;
    }
    std::swap_ranges(a.begin() + col * m + 0, a.begin() + col * m + m,
                     a.begin() + piv * m + 0);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r * m + col] / a[col * m + col];
      for (std::size_t cc = col; cc < m; ++cc) a[r * m + cc] -= f * a[col * m + cc];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> out(m);
  for (std::size_t ri = m; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t cc = ri + 1; cc < m; ++cc) acc -= a[ri * m + cc] * out[cc];
    out[ri] = acc / a[ri * m + ri];
  }
  for (std::size_t j = 0; j < m; ++j) out[j] /= std::pow(x_max, powers[j]);
  return out;
}

// ---------------------------------------------------------------------------

void criterion_1_power_law() {
  const quad::Tol tol{1e-14, 1e-12, 20000, 1};
  std::vector<double> lx, ly;
  for (int i = 0; i < 12; ++i) {
    const double k = 0.02 * std::pow(10.0, double(i) / 11.0);
    const double im = std::fabs(im_sigma_on_shell(kContact, k, 5.0, tol));
    lx.push_back(std::log(k));
    ly.push_back(std::log(im));
  }
  const double slope = lsq(lx, ly).slope;
  report(1, "Beliaev power law k^5", std::fabs(slope - 5.0) <= 0.05,
         fmt("slope = %.4f (want 5.00 +- 0.05)", slope));
}

void criterion_2_constant() {
  const BeliaevConstant c = beliaev_constant(kContact);
  const double gap_320pi =
      std::fabs(c.oracle - c.candidate_320pi) / c.candidate_320pi;
  const double gap_640pi2 =
      std::fabs(c.oracle - c.candidate_640pi2) / c.candidate_640pi2;
  const bool exactly_one =
      (gap_320pi <= 0.01) != (gap_640pi2 <= 0.01);
  report(2, "Beliaev constant resolution",
         exactly_one && c.relative_gap <= 0.01,
         fmt("oracle %.6e: gap to 3/(320 pi) = %.2e, to 3/(640 pi^2) = %.2e",
             c.oracle, gap_320pi, gap_640pi2) +
             (c.selected_320pi
                  ? " -> 3 vhat0/(320 pi mu^4) wins; the 640 pi^2 "
                    "variant is off by 2 pi"
                  : " -> the 640 pi^2 variant wins"));
}

void criterion_3_lambda_independence() {
  const quad::Tol tol{1e-13, 1e-12, 20000, 1};
  const double a = im_sigma_on_shell(kContact, 0.1, 5.0, tol);
  const double b = im_sigma_on_shell(kContact, 0.1, 50.0, tol);
  report(3, "cutoff independence (bitwise)", a == b,
         fmt("Lambda 5 vs 50: %.17e vs %.17e", a, b));
}

void criterion_4_closed_sub_integrals() {
  const quad::Tol tol{1e-13, 1e-12, 20000, 1};
  double worst = 0.0;
  for (double e : {0.1, 0.5, 1.0, 2.0}) {
    worst = std::max(worst,
                     std::fabs(sub_integral_linear_quad(kContact, e, +1, tol) -
                               sub_integral_linear(kContact, e)));
    worst = std::max(worst,
                     std::fabs(sub_integral_log_quad(kContact, e, -1, tol) -
                               sub_integral_log(kContact, e)));
  }
  report(4, "closed sub-integrals vs quadrature", worst <= 1e-10,
         fmt("max |quad - closed| = %.2e (want <= 1e-10)", worst));
}

void criterion_5_series_oracles() {
  const quad::Tol tol{1e-15, 1e-14, 20000, 1};
  // remainder exponents under e-halving on {0.2, 0.1, 0.05}
  auto exponent = [](double r1, double r2, double r3) {
    return 0.5 * (std::log2(r1 / r2) + std::log2(r2 / r3));
  };
  const double a1 = std::fabs(quad_inv_a1a2(kContact, 0.2, tol) -
                              series_inv_a1a2(kContact, 0.2));
  const double a2 = std::fabs(quad_inv_a1a2(kContact, 0.1, tol) -
                              series_inv_a1a2(kContact, 0.1));
  const double a3 = std::fabs(quad_inv_a1a2(kContact, 0.05, tol) -
                              series_inv_a1a2(kContact, 0.05));
  const double b1 = std::fabs(quad_weighted_a1a2(kContact, 0.2, tol) -
                              series_weighted_a1a2(kContact, 0.2));
  const double b2 = std::fabs(quad_weighted_a1a2(kContact, 0.1, tol) -
                              series_weighted_a1a2(kContact, 0.1));
  const double b3 = std::fabs(quad_weighted_a1a2(kContact, 0.05, tol) -
                              series_weighted_a1a2(kContact, 0.05));
  const double c1 = std::fabs(closed_bracket(kContact, 0.2) -
                              closed_bracket_expansion(kContact, 0.2));
  const double c2 = std::fabs(closed_bracket(kContact, 0.1) -
                              closed_bracket_expansion(kContact, 0.1));
  const double c3 = std::fabs(closed_bracket(kContact, 0.05) -
                              closed_bracket_expansion(kContact, 0.05));
  const double ea = exponent(a1, a2, a3);
  const double eb = exponent(b1, b2, b3);
  const double ec = exponent(c1, c2, c3);

  // coefficient recovery by least squares on quadrature data; two absorber
  // powers beyond the asserted truncation soak up the higher-order tail
  std::vector<double> es, q_inv, q_wgt, q_brk;
  for (int i = 0; i <= 15; ++i) {
    const double e = 0.04 + 0.02 * i;  // [0.04, 0.34]
    es.push_back(e);
    q_inv.push_back(quad_inv_a1a2(kContact, e, tol));
    q_wgt.push_back(quad_weighted_a1a2(kContact, e, tol));
    q_brk.push_back(closed_bracket(kContact, e) - 2.0);
  }
  const auto ci = lsq_coeffs(es, q_inv, {1, 3, 5, 7, 9, 11});
  const auto cw = lsq_coeffs(es, q_wgt, {3, 5, 7, 9, 11});
  const auto cb = lsq_coeffs(es, q_brk, {2, 4, 6, 8, 10});
  auto ok = [](double got, double want) {
    return std::fabs(got - want) / std::fabs(want) <= 0.005;
  };
  const bool coeffs_ok =
      ok(ci[0], 0.5) && ok(ci[1], -1.0 / 6.0) && ok(ci[2], 19.0 / 240.0) &&
      ok(ci[3], -13.0 / 280.0) && ok(cw[0], 1.0 / 3.0) &&
      ok(cw[1], -1.0 / 10.0) && ok(cw[2], 11.0 / 280.0) && ok(cb[0], 1.0) &&
      ok(cb[1], 5.0 / 12.0) && ok(cb[2], -41.0 / 120.0);
  const bool orders_ok = ea >= 7.5 && eb >= 7.5 && ec >= 7.5;
  report(5, "series oracles (order + coefficients)", orders_ok && coeffs_ok,
         fmt("halving exponents %.2f / %.2f / %.2f (want >= 7.5)", ea, eb,
             ec) +
             (coeffs_ok ? ", 10 coefficients within 0.5%"
                        : ", coefficient recovery FAILED"));
}

void criterion_6_scheme_agreement() {
  unsigned long long rng = 2026;
  bool all_ok = true;
  double worst_gap = 0.0, worst_est = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double k = 0.1 + 0.9 * uniform(rng);
    const std::complex<double> z{2.0 * uniform(rng),
                                 0.05 + 0.45 * uniform(rng)};
    const double lam = 3.0 + 5.0 * uniform(rng);
    QuadratureSpec qs;
    qs.abs_tol = 2e-8;
    qs.rel_tol = 1e-8;
    qs.max_subdivisions = 60000;
    qs.scheme = Scheme::ts;
    const auto a = sigma_cutoff(kContact, k, ComplexEnergy::regular(z), lam, qs);
    qs.scheme = Scheme::cartesian_pw;
    const auto b = sigma_cutoff(kContact, k, ComplexEnergy::regular(z), lam, qs);
    qs.scheme = Scheme::xy;
    const auto c = sigma_cutoff(kContact, k, ComplexEnergy::regular(z), lam, qs);
    const double est_max = std::max({a.error_estimate, b.error_estimate,
                                     c.error_estimate});
    worst_est = std::max(worst_est, est_max);
    const double gap = std::max(std::abs(a.value - b.value),
                                std::abs(a.value - c.value));
    worst_gap = std::max(worst_gap, gap);
    if (est_max > 1e-7) all_ok = false;
    if (std::abs(a.value - b.value) > a.error_estimate + b.error_estimate)
      all_ok = false;
    if (std::abs(a.value - c.value) > a.error_estimate + c.error_estimate)
      all_ok = false;
  }
  report(6, "coordinate-scheme agreement", all_ok,
         fmt("20 random (k,z,Lambda): max gap %.2e, max estimate %.2e "
             "(each <= 1e-7)",
             worst_gap, worst_est));
}

void criterion_7_feshbach_exactness() {
  unsigned long long rng = 404;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 40 + std::size_t(160.0 * uniform(rng));
    FriedrichsModel m;
    m.params = kContact;
    m.head_energy = 0.5 + 2.0 * uniform(rng);
    for (std::size_t i = 0; i < n; ++i) {
      m.diagonal.push_back(0.3 + 3.0 * uniform(rng));
      m.row.push_back(0.4 * (2.0 * uniform(rng) - 1.0));
    }
    for (int zi = 0; zi < 5; ++zi) {
      const std::complex<double> z{3.0 * uniform(rng),
                                   (uniform(rng) < 0.5 ? -1.0 : 1.0) *
                                       (1e-3 + uniform(rng))};
      DenseMatrix h(n + 1);
      h(0, 0) = m.head_energy - z;
      for (std::size_t i = 0; i < n; ++i) {
        h(0, i + 1) = m.row[i];
        h(i + 1, 0) = m.row[i];
        h(i + 1, i + 1) = m.diagonal[i] - z;
      }
      std::vector<std::complex<double>> rhs(n + 1);
      rhs[0] = 1.0;
      const auto sol = h.solve(rhs);
      worst = std::max(worst, std::abs(sol[0] - resolvent_head(m, z)) /
                                  std::abs(sol[0]));
    }
  }
  report(7, "Feshbach-Schur exactness", worst <= 1e-12,
         fmt("max relative gap formula vs dense solve = %.2e (want <= 1e-12)",
             worst));
}

void criterion_8_fgr() {
  // selection: lattice indices ascending by |n|^2 (ties: lexicographically
  // smallest descending-sorted triple), smallest k whose model has >= 200
  // basis labels below e_k + Gamma_width, with Gamma_width the continuum
  // resonance width 2 lambda^2 |Im Sigma(e_k + i0)|
  const double L = 30.0, lam_cut = 3.0;
  const quad::Tol tol{1e-12, 1e-11, 20000, 1};
  std::map<int, std::vector<std::array<int, 3>>> by_n2;
  for (int a = 0; a <= 14; ++a) {
    for (int b = 0; b <= a; ++b) {
      for (int c = 0; c <= b; ++c) {
        const int n2 = a * a + b * b + c * c;
        if (n2 == 0) continue;
        by_n2[n2].push_back({a, b, c});
      }
    }
  }
  std::array<int, 3> chosen{0, 0, 0};
  const double unit = 2.0 * kPi / L;
  for (auto& [n2, dirs] : by_n2) {
    const double kmag = unit * std::sqrt(double(n2));
    if (kmag >= lam_cut) break;
    // on-shell manifold must fit inside the cutoff for the continuum
    // reference to exist
    const double shell =
        2.0 * inverse_dispersion(kContact, 0.5 * dispersion(kContact, kmag));
    if (shell >= lam_cut) continue;
    std::sort(dirs.begin(), dirs.end());
    bool found = false;
    for (const auto& idx : dirs) {
      const auto m = build_model(kContact, idx, L, lam_cut, 0.1);
      const double gamma_width =
          2.0 * 0.1 * 0.1 *
          std::fabs(im_sigma_on_shell(kContact, kmag, lam_cut, tol));
      int below = 0;
      for (double d : m.diagonal) {
        if (d < m.head_energy + gamma_width) ++below;
      }
      if (below >= 200) {
        chosen = idx;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (chosen == std::array<int, 3>{0, 0, 0}) {
    report(8, "Fermi Golden Rule (desk model)", false,
           "no admissible lattice momentum reaches 200 levels");
    return;
  }
  const auto m10 = build_model(kContact, chosen, L, lam_cut, 0.1);
  const auto m05 = build_model(kContact, chosen, L, lam_cut, 0.05);
  const auto d10 = fgr_decay_rate(m10, tol);
  const auto d05 = fgr_decay_rate(m05, tol);
  const double fit_ratio = d10.gamma_fit / d10.gamma_continuum;
  const bool fit_ok =
      !d10.under_resolved && fit_ratio >= 0.75 && fit_ratio <= 1.25;
  const double scaling = d05.gamma_fgr / d10.gamma_fgr;
  const bool scaling_ok = std::fabs(scaling - 0.25) <= 0.05;
  char which[64];
  std::snprintf(which, sizeof(which), "k index (%d,%d,%d)", chosen[0],
                chosen[1], chosen[2]);
  report(8, "Fermi Golden Rule (desk model)", fit_ok && scaling_ok,
         std::string(which) +
             fmt(": Gamma_fit/Gamma_cont = %.3f (want [0.75,1.25]), "
                 "Gamma(0.05)/Gamma(0.1) = %.4f (want 0.25 +- 0.05)",
                 fit_ratio, scaling));
  if (!fit_ok) {
    std::printf(
        "      note: at L=30, Lambda=3, lambda=0.1 the golden-rule width "
        "(%.1e) sits below the distinct-level spacing (%.1e); a single "
        "finite-volume realization fits the envelope only up to O(1) "
        "fluctuation (see decisions ledger)\n",
        d10.gamma_continuum, d10.level_spacing);
  }
}

void criterion_9_renormalization() {
  const quad::Tol tol{1e-11, 1e-10, 60000, 1};
  const auto r = sigma_renormalized(
      kContact, 0.5, ComplexEnergy::regular(0.0, 0.2), {5.0, 10.0, 20.0, 40.0},
      tol);
  const double g1 = std::abs(r.ladder[1] - r.ladder[0]);
  const double g2 = std::abs(r.ladder[2] - r.ladder[1]);
  const double g3 = std::abs(r.ladder[3] - r.ladder[2]);
  const double r12 = g1 / g2, r23 = g2 / g3;
  const bool ok = r12 >= 1.7 && r23 >= 1.7;
  report(9, "renormalization ladder Cauchy", ok,
         fmt("gap ratios %.3f, %.3f (want each >= 1.7)", r12, r23));
  if (!ok) {
    std::printf(
        "      note: the t^-2 tail coefficient is still ~35%% below its "
        "asymptote at Lambda=5, so the first doubling contracts by only "
        "%.2f; on {10,20,40,80} both ratios exceed 1.8 (see decisions "
        "ledger)\n",
        r12);
  }
}

void criterion_10_divergence() {
  const quad::Tol tol{1e-12, 1e-11, 40000, 1};
  std::vector<double> vals;
  for (double k : {0.1, 0.05, 0.025}) {
    vals.push_back(k * sigma_at_zero(kContact, k, 3.0, tol).value);
  }
  const bool negative = vals[0] < 0.0 && vals[1] < 0.0 && vals[2] < 0.0;
  const double lo = std::min({vals[0], vals[1], vals[2]});
  const double hi = std::max({vals[0], vals[1], vals[2]});
  const double variation = (hi - lo) / std::fabs(vals[1]);
  report(10, "Sigma(0) 1/k divergence rate", negative && variation <= 0.15,
         fmt("k Sigma(0) = %.5f / %.5f / %.5f, variation %.1f%%", vals[0],
             vals[1], vals[2]) +
             fmt(" (want <= 15%%)", 0.0));
}

void criterion_11_convexity() {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double k = 0.01 * std::pow(500.0, i / 49.0);
    const double closed = 2.0 * dispersion(kContact, 0.5 * k);
    const double numeric = two_qp_bottom_numeric(kContact, k);
    worst = std::max(worst, std::fabs(numeric - closed) / closed);
  }
  report(11, "2-quasiparticle bottom vs 2 e(k/2)", worst <= 1e-8,
         fmt("max relative gap over 50 k in [0.01,5] = %.2e (want <= 1e-8)",
             worst));
}

void criterion_12_herglotz() {
  unsigned long long rng = 7;
  int bad = 0;
  QuadratureSpec qs;
  qs.abs_tol = 1e-9;
  qs.rel_tol = 1e-8;
  for (int i = 0; i < 100; ++i) {
    const double k = 0.15 + 0.85 * uniform(rng);
    const double sign = uniform(rng) < 0.5 ? -1.0 : 1.0;
    const std::complex<double> z{3.0 * uniform(rng) - 0.5,
                                 sign * (1e-3 + uniform(rng))};
    const auto s =
        sigma_cutoff(kContact, k, ComplexEnergy::regular(z), 4.0, qs);
    if (!(s.value.imag() * z.imag() < 0.0)) ++bad;
  }
  report(12, "Herglotz sign property", bad == 0,
         fmt("%g of 100 random nonreal z violated sign(Im Sigma) = "
             "-sign(Im z)",
             double(bad)));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_power_law();
  criterion_2_constant();
  criterion_3_lambda_independence();
  criterion_4_closed_sub_integrals();
  criterion_5_series_oracles();
  criterion_6_scheme_agreement();
  criterion_7_feshbach_exactness();
  criterion_8_fgr();
  criterion_9_renormalization();
  criterion_10_divergence();
  criterion_11_convexity();
  criterion_12_herglotz();
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("acceptance: %d of 12 criteria failed (%.1f s)\n", g_failures,
              std::chrono::duration<double>(t1 - t0).count());
  return g_failures;
}
