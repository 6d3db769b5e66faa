#include "beliaev/params.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace beliaev {

ModelParams ModelParams::contact(double mu, double vhat0) {
  ModelParams p;
  p.mu = mu;
  p.vhat0 = vhat0;
  p.validate();
  return p;
}

ModelParams ModelParams::with_ratio(double mu, double vhat0,
                                    std::function<double(double)> r) {
  ModelParams p;
  p.mu = mu;
  p.vhat0 = vhat0;
  p.ratio = std::move(r);
  p.validate();
  return p;
}

double ModelParams::ratio_at(double k) const {
  if (!ratio) return 1.0;
  const double r = ratio(k);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::domain_error("potential ratio r(k) must be finite and >= 0");
  }
  return r;
}

void ModelParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("chemical potential mu must be positive");
  }
  if (!(vhat0 > 0.0) || !std::isfinite(vhat0)) {
    throw std::invalid_argument("interaction scale vhat0 must be positive");
  }
  if (ratio) {
    const double r0 = ratio(0.0);
    if (std::fabs(r0 - 1.0) > 1e-12) {
      throw std::invalid_argument("potential ratio must satisfy r(0) = 1");
    }
  }
}

RatioTable::RatioTable(std::vector<double> k_nodes,
                       std::vector<double> r_values)
    : k_(std::move(k_nodes)), r_(std::move(r_values)) {
  if (k_.size() != r_.size() || k_.size() < 2) {
    throw std::invalid_argument("ratio table needs matching k and r columns");
  }
  if (k_.front() != 0.0) {
    throw std::invalid_argument("ratio table must start at k = 0");
  }
  if (std::fabs(r_.front() - 1.0) > 1e-12) {
    throw std::invalid_argument("ratio table must have r(0) = 1");
  }
  for (std::size_t i = 1; i < k_.size(); ++i) {
    if (!(k_[i] > k_[i - 1])) {
      throw std::invalid_argument("ratio table k grid must increase strictly");
    }
  }
  for (double r : r_) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("ratio table values must lie in [0, 1]");
    }
  }
}

double RatioTable::operator()(double k) const {
  const double a = std::fabs(k);
  if (a >= k_.back()) return r_.back();  // flat extrapolation
  std::size_t hi = 1;
  while (k_[hi] < a) ++hi;
  const double w = (a - k_[hi - 1]) / (k_[hi] - k_[hi - 1]);
  return r_[hi - 1] + w * (r_[hi] - r_[hi - 1]);
}

}  // namespace beliaev
