#pragma once

#include <vector>

namespace dzak {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope*x + intercept. R^2 is 1 for an exact fit and for
/// constant y.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dzak
