#pragma once

#include <cmath>
#include <utility>

namespace qdm {

struct LineMaximum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section search for the maximum of a unimodal f on [a, b]. Stops
// once the bracket is narrower than `tolerance` (absolute, in x).
template <typename F>
LineMaximum golden_section_maximize(F&& f, double a, double b, double tolerance,
                                    int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evaluations = 2;

  for (int i = 0; i < max_iterations && std::abs(b - a) > tolerance; ++i) {
    if (fc >= fd) {
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
    ++evaluations;
  }
  return fc >= fd ? LineMaximum{c, fc, evaluations} : LineMaximum{d, fd, evaluations};
}

}  // namespace qdm
