#pragma once

#include <complex>
#include <mutex>
#include <unordered_map>
#include <vector>

#include <fftw3.h>

namespace kge::detail {

// Thin FFTW wrapper. Plans are created once per size under a lock
// (the FFTW planner is not thread-safe) and reused via the new-array
// execute interface; FFTW_ESTIMATE keeps planning deterministic.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine e;
    return e;
  }

  // in-place unnormalized DFT, sign -1: out[k] = sum_j in[j] e^{-2pi i jk/n}
  void forward(std::complex<double>* data, int n) {
    fftw_execute_dft(plan(n, FFTW_FORWARD), as_fftw(data), as_fftw(data));
  }

  // in-place unnormalized DFT, sign +1
  void inverse(std::complex<double>* data, int n) {
    fftw_execute_dft(plan(n, FFTW_BACKWARD), as_fftw(data), as_fftw(data));
  }

  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

 private:
  FftEngine() = default;
  ~FftEngine() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  static fftw_complex* as_fftw(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
  }

  fftw_plan plan(int n, int sign) {
    const long key = 2L * n + (sign == FFTW_FORWARD ? 0 : 1);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    // FFTW_UNALIGNED: the plan must accept any caller buffer
    std::vector<std::complex<double>> scratch(n);
    fftw_plan p = fftw_plan_dft_1d(n, as_fftw(scratch.data()), as_fftw(scratch.data()),
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mu_;
  std::unordered_map<long, fftw_plan> plans_;
};

}  // namespace kge::detail
