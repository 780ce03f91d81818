#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ist/grid.hpp"

namespace ist::fft {

namespace detail {

// Plan creation in FFTW is not thread-safe; execution with fftw_execute_dft
// on distinct buffers is. Plans are cached per (size, direction).
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace detail

inline void forward(std::vector<complex>& data) {
  fftw_plan plan = detail::PlanCache::instance().get(static_cast<int>(data.size()),
                                                     FFTW_FORWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

inline void inverse(std::vector<complex>& data) {
  fftw_plan plan = detail::PlanCache::instance().get(static_cast<int>(data.size()),
                                                     FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
  double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

/// Signed angular frequency of DFT bin m for transform length n, spacing dx.
inline double frequency(int m, int n, double dx) {
  int k = (m <= n / 2) ? m : m - n;
  return 2.0 * M_PI * k / (n * dx);
}

/// Spectral first derivative (periodic; caller guarantees edge decay).
inline ComplexField1D derivative(const ComplexField1D& f) {
  std::vector<complex> buf = f.values;
  forward(buf);
  const int n = f.grid.n;
  for (int m = 0; m < n; ++m) {
    double lam = frequency(m, n, f.grid.dx);
    buf[static_cast<std::size_t>(m)] *= complex(0.0, lam);
  }
  inverse(buf);
  return ComplexField1D(f.grid, std::move(buf));
}

}  // namespace ist::fft
