#include "mvie/fft3.hpp"

#include <mutex>

#include <fftw3.h>

namespace mvie {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft3::Fft3(const std::array<int, 3>& dims) : dims_(dims) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  // Planning needs a live buffer even under FFTW_ESTIMATE; FFTW_UNALIGNED lets
  // the plans serve any caller buffer, not just fftw_malloc'd ones.
  fftw_complex* scratch = fftw_alloc_complex(static_cast<size_t>(total_size()));
  fwd_ = fftw_plan_dft_3d(dims_[0], dims_[1], dims_[2], scratch, scratch,
                          FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  bwd_ = fftw_plan_dft_3d(dims_[0], dims_[1], dims_[2], scratch, scratch,
                          FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft3::forward(Cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft3::backward(Cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

}  // namespace mvie
