#pragma once

#include <span>

namespace coblab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least-squares line through (xs[i], ys[i]); needs >= 2 points
/// with distinct abscissae.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace coblab
