#pragma once

#include "beliaev/params.hpp"

namespace beliaev {

// Scalar shell coordinates for a momentum triangle (k, p, l) with
// l playing the role of |k - p|.  The triangle constraints are
// |p - l| <= k <= p + l.  Sum/difference coordinates t = p + l, s = p - l
// map the constraints onto the rectangle t >= k, |s| <= k; for the contact
// dispersion the energy coordinates are x = e_p + e_l, y = e_p - e_l.
struct ShellCoords {
  double k = 0.0;
  double p = 0.0;
  double l = 0.0;

  double t() const { return p + l; }
  double s() const { return p - l; }

  static ShellCoords from_pl(double k, double p, double l);
  static ShellCoords from_ts(double k, double t, double s);
  // Contact-only: recover (p, l) from the energy coordinates.
  static ShellCoords from_xy(const ModelParams& params, double k, double x,
                             double y);

  bool triangle_ok() const;
  // Contact-only: (x, y) = (e_p + e_l, e_p - e_l).
  void to_xy(const ModelParams& params, double& x, double& y) const;
};

}  // namespace beliaev
