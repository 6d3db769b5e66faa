#include "beliaev/selfcheck.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "beliaev/dispersion.hpp"
#include "beliaev/friedrichs.hpp"
#include "beliaev/linalg.hpp"
#include "beliaev/self_energy.hpp"
#include "beliaev/vertex.hpp"

namespace beliaev {

namespace {

double uniform(unsigned long long& state) {
  state += 0x9e3779b97f4a7c15ull;
  unsigned long long x = state;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  x = x ^ (x >> 31);
  return double(x >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

bool SelfcheckReport::all_pass() const {
  for (const auto& item : items) {
    if (!item.pass) return false;
  }
  return true;
}

SelfcheckReport run_selfcheck(int threads, const std::string& tamper) {
  SelfcheckReport report;
  const ModelParams params = ModelParams::contact(1.0, 1.0);
  auto bump = [&](const std::string& name) {
    return tamper == name ? 1.0 + 1e-6 : 1.0;
  };
  auto push = [&](const std::string& name, double deviation, double tol,
                  const std::string& note = "") {
    report.items.push_back({name, deviation <= tol, deviation, tol, note});
  };
  quad::Tol tight{1e-13, 1e-12, 20000, 1};

  {  // closed sub-integrals vs adaptive quadrature
    double dev_lin = 0.0, dev_log = 0.0;
    for (double e : {0.1, 0.5, 1.0, 2.0}) {
      dev_lin = std::max(dev_lin,
                         std::fabs(sub_integral_linear_quad(params, e, +1, tight) -
                                   bump("sub_integral_linear") *
                                       sub_integral_linear(params, e)));
      dev_log = std::max(dev_log,
                         std::fabs(sub_integral_log_quad(params, e, -1, tight) -
                                   bump("sub_integral_log") *
                                       sub_integral_log(params, e)));
    }
    push("sub_integral_linear", dev_lin, 1e-10);
    push("sub_integral_log", dev_log, 1e-10);
  }

  {  // series remainders shrink at the truncation order
    double worst = 0.0;
    auto order_of = [&](double r_big, double r_small) {
      return std::log2(r_big / r_small);
    };
    const double r1a = std::fabs(quad_inv_a1a2(params, 0.2, tight) -
                                 series_inv_a1a2(params, 0.2));
    const double r1b = std::fabs(quad_inv_a1a2(params, 0.1, tight) -
                                 bump("series_inv_a1a2") *
                                     series_inv_a1a2(params, 0.1));
    const double r2a = std::fabs(quad_weighted_a1a2(params, 0.2, tight) -
                                 series_weighted_a1a2(params, 0.2));
    const double r2b = std::fabs(quad_weighted_a1a2(params, 0.1, tight) -
                                 bump("series_weighted_a1a2") *
                                     series_weighted_a1a2(params, 0.1));
    const double r3a = std::fabs(closed_bracket(params, 0.2) -
                                 closed_bracket_expansion(params, 0.2));
    const double r3b = std::fabs(closed_bracket(params, 0.1) -
                                 bump("bracket_expansion") *
                                     closed_bracket_expansion(params, 0.1));
    worst = std::min({order_of(r1a, r1b), order_of(r2a, r2b),
                      order_of(r3a, r3b)});
    push("series_remainder_order", 7.5 - worst, 0.0,
         "min halving exponent " + fmt(worst));
  }

  {  // integrand dual route, sampled inside the admissible strip
    unsigned long long rng = 42;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double k = 0.3 + 1.7 * uniform(rng);
      const double s = k * (2.0 * uniform(rng) - 1.0) * 0.95;
      const double t = k * 1.02 + 2.0 * uniform(rng);
      const double ep = dispersion(params, 0.5 * (t + s));
      const double el = dispersion(params, 0.5 * (t - s));
      const double a = integrand_xy_reduced(params, k, ep + el, ep - el) *
                       bump("integrand_dual_route");
      const double b = integrand_xy_direct(params, k, ep + el, ep - el);
      worst =
          std::max(worst, std::fabs(a - b) / std::max(1e-300, std::fabs(b)));
    }
    push("integrand_dual_route", worst, 1e-9);
  }

  {  // coordinate-scheme agreement on a few spot checks
    unsigned long long rng = 7;
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      const double k = 0.2 + 0.8 * uniform(rng);
      const double lam = 3.0 + 3.0 * uniform(rng);
      const std::complex<double> z{0.5 + uniform(rng),
                                   0.08 + 0.3 * uniform(rng)};
      QuadratureSpec qs;
      qs.abs_tol = 3e-8;
      qs.rel_tol = 1e-7;
      qs.threads = threads;
      qs.scheme = Scheme::ts;
      auto a = sigma_cutoff(params, k, ComplexEnergy::regular(z), lam, qs);
      qs.scheme = Scheme::cartesian_pw;
      auto b = sigma_cutoff(params, k, ComplexEnergy::regular(z), lam, qs);
      qs.scheme = Scheme::xy;
      auto c = sigma_cutoff(params, k, ComplexEnergy::regular(z), lam, qs);
      const double budget_ab =
          bump("scheme_agreement") * (a.error_estimate + b.error_estimate);
      const double budget_ac =
          bump("scheme_agreement") * (a.error_estimate + c.error_estimate);
      if (std::abs(a.value - b.value) > budget_ab) ok = false;
      if (std::abs(a.value - c.value) > budget_ac) ok = false;
      worst = std::max({worst, std::abs(a.value - b.value),
                        std::abs(a.value - c.value)});
    }
    push("scheme_agreement", ok ? 0.0 : worst, 1e-300,
         "max cross-scheme gap " + fmt(worst));
  }

  {  // Feshbach formula vs dense resolvent
    unsigned long long rng = 99;
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t n = 40 + static_cast<std::size_t>(60 * uniform(rng));
      FriedrichsModel toy;
      toy.params = params;
      toy.head_energy = 1.0 + uniform(rng);
      for (std::size_t i = 0; i < n; ++i) {
        toy.diagonal.push_back(0.5 + 3.0 * uniform(rng));
        toy.row.push_back(0.2 * (2.0 * uniform(rng) - 1.0));
      }
      for (int zi = 0; zi < 3; ++zi) {
        const std::complex<double> z{2.0 * uniform(rng),
                                     0.01 + uniform(rng)};
        DenseMatrix h(n + 1);
        h(0, 0) = toy.head_energy - z;
        for (std::size_t i = 0; i < n; ++i) {
          h(0, i + 1) = toy.row[i];
          h(i + 1, 0) = toy.row[i];
          h(i + 1, i + 1) = toy.diagonal[i] - z;
        }
        std::vector<std::complex<double>> rhs(n + 1);
        rhs[0] = 1.0;
        const auto sol = h.solve(rhs);
        const std::complex<double> direct = sol[0];
        const std::complex<double> formula =
            bump("feshbach_dense") * resolvent_head(toy, z);
        worst = std::max(worst, std::abs(direct - formula) / std::abs(direct));
      }
    }
    push("feshbach_dense", worst, 1e-12);
  }

  {  // small-s coincidence lemma: deviations fall like s^2
    double worst_ratio = 1e9;
    for (double t : {0.2, 0.6}) {
      const auto d1 = symmetric_point_deviations(params, t, 0.05);
      const auto d2 = symmetric_point_deviations(params, t, 0.025);
      for (int i = 0; i < 4; ++i) {
        const double ratio =
            std::fabs(d1[i]) / std::max(1e-300, std::fabs(d2[i]));
        worst_ratio = std::min(worst_ratio, ratio);
      }
    }
    const double target = bump("symmetric_point_deviations") * 4.0;
    push("symmetric_point_deviations", std::fabs(worst_ratio - target) / target, 0.25,
         "worst s-halving ratio " + fmt(worst_ratio));
  }

  {  // Sigma(0) limit constant: which candidate multiple is the true limit
    const double lam = 2.0;
    const auto q1 = sigma_zero_limit_check(params, lam, 0.05, tight);
    const auto q2 = sigma_zero_limit_check(params, lam, 0.025, tight);
    const double dev_64 = std::fabs(q2.lhs - q1.limit_candidate_64);
    const double dev_32 =
        std::fabs(q2.lhs - bump("sigma0_limit_constant") * q1.limit_candidate_32);
    const bool full_wins = dev_32 < dev_64;
    const double winner_dev = std::min(dev_64, dev_32);
    const double shrink =
        std::fabs(q1.lhs -
                  (full_wins ? q1.limit_candidate_32 : q1.limit_candidate_64)) /
        std::max(1e-300, winner_dev);
    // O(k^2 log k): a halving should shrink the gap by ~4 (log-corrected).
    const bool ok = winner_dev < 0.02 * q1.limit_candidate_32 && shrink > 2.5 &&
                    dev_32 < dev_64;
    push("sigma0_limit_constant", ok ? 0.0 : 1.0, 0.5,
         std::string("limit resolved to Int t^2/(32 e_{t/2}) dt; the 1/64 "
                     "variant is half the measured limit; k-halving shrink ") +
             fmt(shrink));
  }

  {  // damping constant reconciliation
    const auto c = beliaev_constant(params);
    const double dev = c.relative_gap * bump("beliaev_constant");
    push("beliaev_constant", dev, 0.01,
         std::string("oracle selects ") +
             (c.selected_320pi ? "3 vhat0/(320 pi mu^4)"
                                : "3 vhat0/(640 pi^2 mu^4)") +
             "; the circulating closed forms disagree by 2 pi, "
             "quadrature arbitrates");
  }

  {  // Herglotz sign
    unsigned long long rng = 5;
    bool ok = true;
    for (int i = 0; i < 12; ++i) {
      const double k = 0.2 + 0.8 * uniform(rng);
      const double sgn = uniform(rng) < 0.5 ? -1.0 : 1.0;
      const std::complex<double> z{2.0 * uniform(rng),
                                   sgn * (0.03 + 0.4 * uniform(rng))};
      QuadratureSpec qs;
      qs.abs_tol = 1e-9;
      qs.threads = threads;
      auto s = sigma_cutoff(params, k, ComplexEnergy::regular(z), 5.0, qs);
      double im = s.value.imag() * bump("herglotz_sign");
      if (!(im * z.imag() < 0.0)) ok = false;
    }
    push("herglotz_sign", ok ? 0.0 : 1.0, 0.5);
  }

  return report;
}

void print_selfcheck(const SelfcheckReport& report, std::ostream& os) {
  for (const auto& item : report.items) {
    os << (item.pass ? "PASS" : "FAIL") << "  " << item.name
       << "  deviation=" << fmt(item.deviation) << " tol=" << fmt(item.tolerance);
    if (!item.note.empty()) os << "  [" << item.note << "]";
    os << "\n";
  }
  os << (report.all_pass() ? "selfcheck: all checks passed"
                           : "selfcheck: FAILURES present")
     << "\n";
}

}  // namespace beliaev
