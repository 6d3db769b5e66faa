#include "beliaev/coords.hpp"

#include <cmath>
#include <stdexcept>

#include "beliaev/dispersion.hpp"

namespace beliaev {

ShellCoords ShellCoords::from_pl(double k, double p, double l) {
  ShellCoords c{k, p, l};
  if (k < 0.0 || p < 0.0 || l < 0.0) {
    throw std::domain_error("shell coordinates must be nonnegative");
  }
  return c;
}

ShellCoords ShellCoords::from_ts(double k, double t, double s) {
  return from_pl(k, 0.5 * (t + s), 0.5 * (t - s));
}

ShellCoords ShellCoords::from_xy(const ModelParams& params, double k, double x,
                                 double y) {
  const double u = 0.5 * (x + y);
  const double w = 0.5 * (x - y);
  if (u < 0.0 || w < 0.0) {
    throw std::domain_error("energy coordinates require |y| <= x");
  }
  return from_pl(k, inverse_dispersion(params, u),
                 inverse_dispersion(params, w));
}

bool ShellCoords::triangle_ok() const {
  return std::fabs(p - l) <= k && k <= p + l;
}

void ShellCoords::to_xy(const ModelParams& params, double& x,
                        double& y) const {
  const double ep = dispersion(params, p);
  const double el = dispersion(params, l);
  x = ep + el;
  y = ep - el;
}

}  // namespace beliaev
