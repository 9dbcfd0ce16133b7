#pragma once

#include <utility>
#include <vector>

namespace estokes {

// Least-squares line through (log eps, log err) restricted to the fit window.
struct SlopeFit {
  bool degenerate = true;  // fewer than 2 usable points
  double slope = 0.0;
  double intercept = 0.0;     // in log10 units
  double window_lo = 0.0;     // eps range actually used (0 when degenerate)
  double window_hi = 0.0;
  int n_used = 0;
};

// Points are (eps, err); rows with err <= 10 * floor (or err <= 0) are
// excluded from the window.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points, double floor = 0.0);

}  // namespace estokes
