#include "beliaev/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace beliaev {

namespace {

struct Deflated {
  std::vector<double> d;  // strictly increasing
  std::vector<double> c2; // combined coupling squared per level
};

// Sort, drop zero couplings, merge (near-)coincident diagonal entries.
// On the momentum lattice coincidences are exact (integer sums of squares);
// the tolerance only guards against last-bit ties that would leave the
// secular solver a gap with no representable interior point.
Deflated deflate(const std::vector<double>& diag,
                 const std::vector<double>& coupling) {
  const std::size_t n = diag.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  double scale = 1.0;
  for (double v : diag) scale = std::max(scale, std::fabs(v));
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  Deflated out;
  for (std::size_t idx : order) {
    const double c = coupling[idx];
    if (c == 0.0) continue;
    if (!out.d.empty() && diag[idx] - out.d.back() <= tol) {
      out.c2.back() += c * c;
    } else {
      out.d.push_back(diag[idx]);
      out.c2.push_back(c * c);
    }
  }
  return out;
}

}  // namespace

ArrowheadSpectrum arrowhead_decompose(double head,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& coupling) {
  if (diag.size() != coupling.size()) {
    throw std::invalid_argument("arrowhead: diag/coupling size mismatch");
  }
  const Deflated m = deflate(diag, coupling);
  const std::size_t g = m.d.size();

  ArrowheadSpectrum out;
  if (g == 0) {
    out.levels = {head};
    out.weights = {1.0};
    return out;
  }

  double c_norm2 = 0.0;
  for (double c2 : m.c2) c_norm2 += c2;
  const double reach = std::sqrt(c_norm2) + 1.0;

  auto phi = [&](double x) {
    double acc = x - head;
    for (std::size_t i = 0; i < g; ++i) acc -= m.c2[i] / (x - m.d[i]);
    return acc;
  };
  auto phi_prime = [&](double x) {
    double acc = 1.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double r = x - m.d[i];
      acc += m.c2[i] / (r * r);
    }
    return acc;
  };

  // phi increases from -inf to +inf on every gap between consecutive poles
  // and on the two outer half-lines, so each bracket holds exactly one root.
  auto bisect = [&](double lo, double hi) {
    for (int it = 0; it < 220; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (phi(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  out.levels.resize(g + 1);
  out.weights.resize(g + 1);
  out.levels[0] = bisect(std::min(head, m.d[0]) - reach, m.d[0]);
  for (std::size_t i = 0; i + 1 < g; ++i) {
    out.levels[i + 1] = bisect(m.d[i], m.d[i + 1]);
  }
  out.levels[g] = bisect(m.d[g - 1], std::max(head, m.d[g - 1]) + reach);

  for (std::size_t j = 0; j <= g; ++j) {
    const double lam = out.levels[j];
    bool on_pole = false;
    for (std::size_t i = 0; i < g; ++i) {
      if (lam == m.d[i]) on_pole = true;
    }
    // A root collapsing onto a pole carries vanishing head weight.
    out.weights[j] = on_pole ? 0.0 : 1.0 / phi_prime(lam);
  }
  return out;
}

std::complex<double> ArrowheadSpectrum::amplitude(double t) const {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < levels.size(); ++j) {
    acc += weights[j] *
           std::complex<double>(std::cos(levels[j] * t),
                                -std::sin(levels[j] * t));
  }
  return acc;
}

double ArrowheadSpectrum::moment(int order) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    acc += weights[j] * std::pow(levels[j], order);
  }
  return acc;
}

}  // namespace beliaev
