#include "quasispec/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace quasispec::grid {

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan on new
// arrays (fftw_execute_dft) is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int fields, int sign) {
    std::lock_guard lock(mutex_);
    auto& plan = plans_[{n, fields, sign}];
    if (!plan) {
      std::vector<cplx> scratch(static_cast<std::size_t>(n) * n * fields);
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      const int dims[2] = {n, n};
      plan = fftw_plan_many_dft(2, dims, fields, buf, nullptr, fields, 1, buf, nullptr, fields, 1, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
      if (!plan) throw NumericalError("FFTW failed to create a plan");
    }
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<cplx> data, int n, int fields, int sign) {
  if (data.size() != static_cast<std::size_t>(n) * n * fields)
    throw ValidationError("grid transform: buffer size does not match n*n*fields");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(n, fields, sign), buf, buf);
}

}  // namespace

void synthesize(std::span<cplx> data, int n, int fields) { run(data, n, fields, FFTW_BACKWARD); }

void analyze(std::span<cplx> data, int n, int fields) {
  run(data, n, fields, FFTW_FORWARD);
  const double s = 1.0 / (static_cast<double>(n) * n);
  for (cplx& c : data) c *= s;
}

int good_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace quasispec::grid
