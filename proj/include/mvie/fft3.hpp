#pragma once

#include <array>

#include "mvie/types.hpp"

namespace mvie {

// In-place complex 3D transforms on row-major (z fastest) arrays. Plans are
// created once per padded size with FFTW_ESTIMATE so planning is deterministic;
// execution on distinct buffers is thread-safe, plan creation is serialized
// internally.
class Fft3 {
 public:
  explicit Fft3(const std::array<int, 3>& dims);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  void forward(Cplx* data) const;
  // Unnormalized inverse; callers divide by total_size().
  void backward(Cplx* data) const;

  const std::array<int, 3>& dims() const { return dims_; }
  Eigen::Index total_size() const {
    return static_cast<Eigen::Index>(dims_[0]) * dims_[1] * dims_[2];
  }

 private:
  std::array<int, 3> dims_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace mvie
