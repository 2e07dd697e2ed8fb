#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mvie/types.hpp"

namespace mvie {

// Deterministic Gaussian source: mt19937_64 plus an explicit Box-Muller map so
// sequences are identical across standard libraries.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  double normal() {
    const double u1 = unit_open();
    const double u2 = unit_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Cplx cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::uint64_t raw() { return gen_(); }

 private:
  double unit_open() {
    // (0,1]: never feeds log(0).
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  }
  std::mt19937_64 gen_;
};

}  // namespace mvie
