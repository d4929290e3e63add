#include "quasispec/monomial.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace quasispec::mono {

IVec2 exponent(int idx) {
  int d = 0;
  while (count(d) <= idx) ++d;
  const int a2 = idx - d * (d + 1) / 2;
  return {d - a2, a2};
}

int degree(int idx) {
  int d = 0;
  while (count(d) <= idx) ++d;
  return d;
}

std::span<const ProductEntry> product_table(int da, int db, int dc) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<ProductEntry>>> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[{da, db, dc}];
  if (!slot) {
    slot = std::make_unique<std::vector<ProductEntry>>();
    for (int i = 0; i < count(da); ++i) {
      const IVec2 a = exponent(i);
      for (int j = 0; j < count(db); ++j) {
        const IVec2 b = exponent(j);
        if (a[0] + a[1] + b[0] + b[1] > dc) continue;
        slot->push_back({i, j, index(a[0] + b[0], a[1] + b[1])});
      }
    }
  }
  return *slot;
}

double falling(int a, int u) {
  if (u > a) return 0.0;
  double r = 1.0;
  for (int t = 0; t < u; ++t) r *= static_cast<double>(a - t);
  return r;
}

}  // namespace quasispec::mono
