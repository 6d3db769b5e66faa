#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "beliaev/coords.hpp"
#include "beliaev/dispersion.hpp"
#include "beliaev/vertex.hpp"

using namespace beliaev;

namespace {
const ModelParams kContact = ModelParams::contact(1.0, 1.0);

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

double uniform(unsigned long long& state) {
  state += 0x9e3779b97f4a7c15ull;
  unsigned long long x = state;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  x = x ^ (x >> 31);
  return double(x >> 11) * 0x1.0p-53;
}
}  // namespace

TEST_CASE("A1 A2 factors") {
  const A1A2 a = A1A2::at(1.0, 0.3, 0.1);
  CHECK(a.a1 == doctest::Approx(std::sqrt(0.16 + 4.0)).epsilon(1e-15));
  CHECK(a.a2 == doctest::Approx(std::sqrt(0.04 + 4.0)).epsilon(1e-15));
  CHECK(a.a1 >= 2.0);
  CHECK(a.a2 >= 2.0);
  // y -> -y swaps the pair
  const A1A2 b = A1A2::at(1.0, 0.3, -0.1);
  CHECK(a.a1 == b.a2);
  CHECK(a.a2 == b.a1);
}

TEST_CASE("vertex symmetry and domain") {
  CHECK(vertex_h(kContact, 1.0, 0.6, 0.6) ==
        vertex_h(kContact, 1.0, 0.6, 0.6));
  // p <-> l is an exact floating-point symmetry
  CHECK(vertex_h(kContact, 1.0, 0.9, 0.3) == vertex_h(kContact, 1.0, 0.3, 0.9));
  CHECK(vertex_h(kContact, 0.7, 0.5, 0.4) == vertex_h(kContact, 0.7, 0.4, 0.5));
  CHECK_THROWS_AS(vertex_h(kContact, 1.0, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(vertex_h(kContact, 0.0, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(vertex_h(kContact, 1.0, 3.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(vertex_h(kContact, 4.0, 0.5, 0.5), std::domain_error);
}

TEST_CASE("vertex golden value and radical cross-check") {
  // recorded from the first correct build; the two evaluation routes
  // (stable forms vs defining radicals) agreed to 1e-12 there
  const double h = vertex_h(kContact, 1.0, 0.5, 0.5);
  CHECK(h == doctest::Approx(0.35999534624010954).epsilon(1e-10));
  // independent evaluation straight from the radicals
  auto naive = [&](double k) {
    const double e = dispersion(kContact, k);
    const double root = std::hypot(e, 1.0);
    return std::pair<double, double>{std::sqrt((root + e) / (2.0 * e)),
                                     std::sqrt((root - e) / (2.0 * e))};
  };
  const auto [sk, gk] = naive(1.0);
  const auto [sp, gp] = naive(0.5);
  const double bracket = sk * (sp * sp - 2.0 * sp * gp) +
                         gk * (2.0 * sp * gp - gp * gp);
  CHECK(rel_err(h, 2.0 * bracket) < 1e-10);
}

TEST_CASE("vertex small-k behaviour at fixed p = l") {
  // h(k, p, p) ~ (sigma_k + gamma_k) ~ k^{-1/2} as k -> 0; the quoted bounds
  // (sigma_k+gamma_k)^2 >= C/k and (sigma_k-gamma_k)^2 = O(k) pin the rate
  const double p = 0.4;
  const double h1 = vertex_h(kContact, 1e-3, p, p);
  const double h2 = vertex_h(kContact, 1e-2, p, p);
  const double h3 = vertex_h(kContact, 1e-1, p, p);
  const double slope_a = std::log10(h2 / h1);
  const double slope_b = std::log10(h3 / h2);
  CHECK(slope_a == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(slope_b == doctest::Approx(-0.5).epsilon(0.15));
  for (double k : {1e-3, 1e-2, 1e-1}) {
    const BogCoeffs c = bog_coeffs(kContact, k);
    const double sum2 = (c.sigma + c.gamma) * (c.sigma + c.gamma);
    const double dif2 = (c.sigma - c.gamma) * (c.sigma - c.gamma);
    CHECK(sum2 * k > 1.0);        // >= C/k with C ~ 2 sqrt(mu)
    CHECK(dif2 / k < 1.0);        // O(k)
  }
}

TEST_CASE("sharp cutoff") {
  CHECK(vertex_h_cutoff(kContact, 1.0, 0.6, 0.6, 1.0) == 0.0);
  CHECK(vertex_h_cutoff(kContact, 1.0, 0.6, 0.6, 10.0) ==
        vertex_h(kContact, 1.0, 0.6, 0.6));
  // boundary p + l == Lambda uses the strict inequality
  CHECK(vertex_h_cutoff(kContact, 0.6, 0.5, 0.5, 1.0) == 0.0);
  SUBCASE("|h_cutoff| is nondecreasing in Lambda") {
    const double k = 0.8, p = 0.7, l = 0.6;
    double prev = 0.0;
    for (double lam : {0.5, 1.0, 1.3, 1.31, 2.0, 5.0}) {
      const double v = std::fabs(vertex_h_cutoff(kContact, k, p, l, lam));
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("vertex evaluation record") {
  const auto coords = ShellCoords::from_pl(1.0, 0.5, 0.5);
  const auto ev = vertex_eval(kContact, coords);
  CHECK(ev.value == vertex_h(kContact, 1.0, 0.5, 0.5));
  CHECK(ev.coordinates.p == 0.5);
}

TEST_CASE("3-vector adapter") {
  const std::array<double, 3> kv{0.3, -0.4, 1.2};
  const std::array<double, 3> pv{0.1, 0.2, 0.5};
  const double kk = std::sqrt(0.09 + 0.16 + 1.44);
  const double pp = std::sqrt(0.01 + 0.04 + 0.25);
  const double ll =
      std::sqrt(0.2 * 0.2 + 0.6 * 0.6 + 0.7 * 0.7);
  CHECK(vertex_h(kContact, kv, pv) ==
        doctest::Approx(vertex_h(kContact, kk, pp, ll)).epsilon(1e-15));
}

TEST_CASE("energy-coordinate integrand") {
  SUBCASE("dual route agreement on the shell") {
    const double k = 0.5;
    const double e = dispersion(kContact, k);
    CHECK(rel_err(integrand_xy_reduced(kContact, k, e, 0.0),
                  integrand_xy_direct(kContact, k, e, 0.0)) < 1e-10);
  }
  SUBCASE("even in y, exactly") {
    const double k = 0.5;
    const double e = dispersion(kContact, k);
    const double y = 0.9 * e;
    CHECK(integrand_xy_reduced(kContact, k, e, y) ==
          integrand_xy_reduced(kContact, k, e, -y));
  }
  SUBCASE("vanishes at |y| = x on the shell") {
    const double k = 0.3;
    const double e = dispersion(kContact, k);
    const double w = integrand_xy_reduced(kContact, k, e, e);
    CHECK(std::fabs(w) < 1e-12);
  }
  SUBCASE("continuous up to the corner") {
    const double k = 0.4;
    const double e = dispersion(kContact, k);
    double prev = integrand_xy_reduced(kContact, k, e, 0.0);
    for (double f : {0.5, 0.9, 0.99, 0.999}) {
      const double cur = integrand_xy_reduced(kContact, k, e, f * e);
      CHECK(std::isfinite(cur));
      prev = cur;
    }
    (void)prev;
  }
  SUBCASE("reduction identity on random admissible triples") {
    // sample (p, l) inside the triangle region, then map to (x, y); the
    // direct route is only defined on the admissible strip
    unsigned long long rng = 2024;
    for (int i = 0; i < 1000; ++i) {
      const double k = 0.3 + 1.7 * uniform(rng);
      const double s = k * (2.0 * uniform(rng) - 1.0) * 0.95;
      const double t = k * 1.02 + 2.0 * uniform(rng);
      const double p = 0.5 * (t + s), l = 0.5 * (t - s);
      const double ep = dispersion(kContact, p), el = dispersion(kContact, l);
      const double x = ep + el, y = ep - el;
      const double a = integrand_xy_reduced(kContact, k, x, y);
      const double b = integrand_xy_direct(kContact, k, x, y);
      CHECK(std::fabs(a - b) / std::max(1e-300, std::fabs(b)) < 1e-9);
    }
  }
  SUBCASE("generic ratio is rejected") {
    const ModelParams generic =
        ModelParams::with_ratio(1.0, 1.0, [](double) { return 1.0; });
    CHECK_THROWS_AS(integrand_xy_reduced(generic, 0.5, 0.5, 0.0),
                    std::invalid_argument);
  }
}
