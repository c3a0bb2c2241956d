#pragma once

#include <cmath>
#include <functional>

namespace dexeff {

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Returns the abscissa of the maximum to relative tolerance rel_tol.
inline double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double rel_tol, int max_iter = 400) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::fabs(b) + 1.0); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace dexeff
