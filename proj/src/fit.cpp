#include "estokes/fit.hpp"

#include <algorithm>
#include <cmath>

namespace estokes {

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points, double floor) {
  std::vector<std::pair<double, double>> used;
  for (const auto& [eps, err] : points) {
    if (eps > 0.0 && err > 0.0 && err > 10.0 * floor) used.emplace_back(eps, err);
  }
  SlopeFit fit;
  if (used.size() < 2) return fit;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [eps, err] : used) {
    const double lx = std::log10(eps);
    const double ly = std::log10(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(used.size());
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return fit;

  fit.degenerate = false;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.n_used = static_cast<int>(used.size());
  auto [lo, hi] = std::minmax_element(used.begin(), used.end());
  fit.window_lo = lo->first;
  fit.window_hi = hi->first;
  return fit;
}

}  // namespace estokes
