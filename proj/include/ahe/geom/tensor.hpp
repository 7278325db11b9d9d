#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>

namespace ahe {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
using Vec = Eigen::Matrix<double, static_cast<int>(D), 1>;

/// Symmetric 2-tensor in coordinate components (both triangles stored).
template <std::size_t D>
using Sym2 = Eigen::Matrix<double, static_cast<int>(D), static_cast<int>(D)>;

/// Raw component array returned by metric templates.
template <class T, std::size_t D>
using ComponentMatrix = std::array<std::array<T, D>, D>;

template <std::size_t D>
struct Tensor3 {
  std::array<double, D * D * D> c{};
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return c[(i * D + j) * D + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return c[(i * D + j) * D + k];
  }
};

template <std::size_t D>
struct Tensor4 {
  std::array<double, D * D * D * D> c{};
  double& operator()(std::size_t a, std::size_t b, std::size_t i,
                     std::size_t j) {
    return c[((a * D + b) * D + i) * D + j];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t i,
                    std::size_t j) const {
    return c[((a * D + b) * D + i) * D + j];
  }
};

template <std::size_t D>
Sym2<D> to_matrix(const ComponentMatrix<double, D>& m) {
  Sym2<D> out;
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) out(i, j) = m[i][j];
  return out;
}

}  // namespace ahe
