#pragma once

// Independent reference implementations used only by tests.

#include <cmath>
#include <numbers>
#include <vector>

namespace sartex::oracle {

/// Co-occurrence counts by direct enumeration: for every pixel (x, y) and every
/// angle, look up I(x + dx, y + dy) and count the pair in both orders. The
/// unit direction (cos, -sin) is rounded per axis and scaled by the distance,
/// so diagonals step s pixels along both axes. Returns the normalized
/// matrix (row-major n x n), or an empty vector if no pair exists.
inline std::vector<double> brute_force_glcm(const std::vector<std::vector<int>>& image,
                                            int distance, const std::vector<int>& angles_deg,
                                            int n) {
  const int h = static_cast<int>(image.size());
  const int w = static_cast<int>(image[0].size());
  std::vector<double> c(static_cast<std::size_t>(n * n), 0.0);
  double total = 0.0;
  for (int deg : angles_deg) {
    const double th = deg * std::numbers::pi / 180.0;
    const int dx = distance * static_cast<int>(std::lround(std::cos(th)));
    const int dy = -distance * static_cast<int>(std::lround(std::sin(th)));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int x2 = x + dx;
        const int y2 = y + dy;
        if (x2 < 0 || x2 >= w || y2 < 0 || y2 >= h) continue;
        const int i = image[y][x];
        const int j = image[y2][x2];
        c[static_cast<std::size_t>(i * n + j)] += 1.0;
        c[static_cast<std::size_t>(j * n + i)] += 1.0;
        total += 2.0;
      }
    }
  }
  if (total == 0.0) return {};
  for (double& v : c) v /= total;
  return c;
}

}  // namespace sartex::oracle
