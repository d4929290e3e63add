#include "quasispec/hungarian.hpp"

#include <limits>

#include "quasispec/common.hpp"

namespace quasispec {

// Shortest augmenting paths with row/column potentials, O(n²m).
std::vector<int> hungarian(const std::vector<double>& cost, int rows, int cols) {
  if (rows > cols) throw ValidationError("hungarian: needs rows <= cols");
  if (cost.size() != static_cast<std::size_t>(rows) * cols) throw ValidationError("hungarian: cost size mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  auto a = [&](int i, int j) { return cost[static_cast<std::size_t>(i - 1) * cols + (j - 1)]; };

  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assign(rows, -1);
  for (int j = 1; j <= cols; ++j)
    if (p[j] != 0) assign[p[j] - 1] = j - 1;
  return assign;
}

}  // namespace quasispec
