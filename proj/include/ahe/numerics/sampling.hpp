#pragma once

#include <array>
#include <cstddef>

namespace ahe {

/// Radical inverse in the given prime base (Halton sequence component).
inline double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

/// Halton point i (i >= 1) in the unit cube [0,1)^D.
template <std::size_t D>
std::array<double, D> halton(std::size_t i) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13};
  std::array<double, D> u{};
  for (std::size_t k = 0; k < D; ++k) u[k] = radical_inverse(i, kPrimes[k]);
  return u;
}

}  // namespace ahe
