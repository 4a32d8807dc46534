#include "fastmi/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace fastmi::fft {

namespace {

// New-array execution requires the new buffers to mirror the planned ones:
// same alignment, same in-place-ness, and the same relative layout of the
// real and imaginary planes.  Both transforms therefore run on a contiguous
// scratch block [re | im] from fftw_alloc_real, with the caller's planes
// copied in and out, and the conjugate (backward) transform gets its own
// plan whose planes were swapped at planning time.  FFTW_ESTIMATE keeps
// planning deterministic: no timing-dependent algorithm choice.
class PlanCache {
 public:
  std::pair<fftw_plan, fftw_plan> get(std::size_t m) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(m);
    if (it != plans_.end()) {
      return it->second;
    }
    const std::size_t mm = m * m;
    double *scratch = fftw_alloc_real(2 * mm);
    if (scratch == nullptr) {
      throw std::bad_alloc();
    }
    fftw_iodim dims[2];
    dims[0].n = static_cast<int>(m);
    dims[0].is = dims[0].os = static_cast<int>(m);
    dims[1].n = static_cast<int>(m);
    dims[1].is = dims[1].os = 1;
    fftw_plan fwd = fftw_plan_guru_split_dft(2, dims, 0, nullptr, scratch,
                                             scratch + mm, scratch,
                                             scratch + mm, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_guru_split_dft(2, dims, 0, nullptr, scratch + mm,
                                             scratch, scratch + mm, scratch,
                                             FFTW_ESTIMATE);
    fftw_free(scratch);
    if (fwd == nullptr || bwd == nullptr) {
      throw std::runtime_error("fft planner failed");
    }
    auto pair = std::make_pair(fwd, bwd);
    plans_.emplace(m, pair);
    return pair;
  }

  ~PlanCache() {
    for (auto &entry : plans_) {
      fftw_destroy_plan(entry.second.first);
      fftw_destroy_plan(entry.second.second);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, std::pair<fftw_plan, fftw_plan>> plans_;
};

PlanCache &cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::size_t m, double *re, double *im, bool conjugate) {
  const auto plans = cache().get(m);
  const std::size_t mm = m * m;
  double *scratch = fftw_alloc_real(2 * mm);
  if (scratch == nullptr) {
    throw std::bad_alloc();
  }
  std::memcpy(scratch, re, mm * sizeof(double));
  std::memcpy(scratch + mm, im, mm * sizeof(double));
  if (conjugate) {
    // Swapped planes turn the exponent-minus transform into exponent-plus.
    fftw_execute_split_dft(plans.second, scratch + mm, scratch, scratch + mm,
                           scratch);
  } else {
    fftw_execute_split_dft(plans.first, scratch, scratch + mm, scratch,
                           scratch + mm);
  }
  std::memcpy(re, scratch, mm * sizeof(double));
  std::memcpy(im, scratch + mm, mm * sizeof(double));
  fftw_free(scratch);
}

}  // namespace

void forward_2d(std::size_t m, double *re, double *im) {
  execute(m, re, im, false);
}

void backward_2d(std::size_t m, double *re, double *im) {
  execute(m, re, im, true);
}

}  // namespace fastmi::fft
