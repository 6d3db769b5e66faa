#pragma once

#include <functional>
#include <vector>

namespace beliaev {

// Interaction model of the condensed Bose gas: chemical potential mu > 0,
// contact interaction scale vhat0 = vhat(0) > 0 and the radial potential
// ratio r(k) = vhat(k)/vhat(0).  An empty ratio means contact interaction,
// r == 1 for all k.  Everything downstream reads the potential only through
// b_coeff(k) = r(k)*mu and the prefactor vhat0.
struct ModelParams {
  double mu = 1.0;
  double vhat0 = 1.0;
  std::function<double(double)> ratio;  // r(k); empty => contact

  static ModelParams contact(double mu = 1.0, double vhat0 = 1.0);
  static ModelParams with_ratio(double mu, double vhat0,
                                std::function<double(double)> r);

  bool is_contact() const { return !static_cast<bool>(ratio); }
  double ratio_at(double k) const;
  // B_k = r(k) * mu
  double b_coeff(double k) const { return mu * ratio_at(k); }
  void validate() const;  // throws std::invalid_argument
};

// Piecewise-linear ratio r(k) on a strictly increasing k grid with flat
// extrapolation past the last node.  The grid must start at k=0 with r=1,
// and all values must lie in [0, 1].
class RatioTable {
 public:
  RatioTable(std::vector<double> k_nodes, std::vector<double> r_values);

  double operator()(double k) const;

  const std::vector<double>& k_nodes() const { return k_; }
  const std::vector<double>& r_values() const { return r_; }

 private:
  std::vector<double> k_;
  std::vector<double> r_;
};

}  // namespace beliaev
