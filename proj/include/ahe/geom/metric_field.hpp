#pragma once

#include "ahe/error.hpp"
#include "ahe/geom/jet.hpp"
#include "ahe/geom/tensor.hpp"

#include <array>
#include <functional>
#include <string>
#include <utility>

namespace ahe {

/// Coordinate box plus an optional membership predicate (e.g. r > r_+).
template <std::size_t D>
struct CoordinatePatch {
  static_assert(D == 3 || D == 4, "patches are 3- or 4-dimensional");

  std::array<std::string, D> names;
  Point<D> lower{};
  Point<D> upper{};
  std::function<bool(const Point<D>&)> predicate;

  /// True when `p` is inside the box by at least `margin` in every coordinate
  /// and satisfies the predicate.
  bool contains(const Point<D>& p, double margin = 0.0) const {
    for (std::size_t i = 0; i < D; ++i) {
      if (!(p[i] > lower[i] + margin && p[i] < upper[i] - margin)) return false;
    }
    return !predicate || predicate(p);
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < D; ++i) v *= upper[i] - lower[i];
    return v;
  }
};

template <std::size_t D>
using JetPoint = std::array<Jet<D>, D>;

template <std::size_t D>
inline JetPoint<D> seed(const Point<D>& p) {
  JetPoint<D> x;
  for (std::size_t i = 0; i < D; ++i) x[i] = Jet<D>::variable(p[i], i);
  return x;
}

/// A metric tensor on a coordinate patch that can be evaluated either as
/// plain values or as second-order jets.
template <std::size_t D>
class MetricField {
 public:
  using ValueFn = std::function<ComponentMatrix<double, D>(const Point<D>&)>;
  using JetFn =
      std::function<ComponentMatrix<Jet<D>, D>(const JetPoint<D>&)>;

  MetricField() = default;
  MetricField(CoordinatePatch<D> patch, ValueFn value, JetFn jet)
      : patch_(std::move(patch)), value_(std::move(value)), jet_(std::move(jet)) {}

  /// Builds both evaluators from one functor templated on the scalar type:
  /// `template <class T> ComponentMatrix<T, D> operator()(const std::array<T, D>&)`.
  template <class Components>
  static MetricField from_components(CoordinatePatch<D> patch, Components f) {
    return MetricField(
        std::move(patch),
        [f](const Point<D>& p) { return f(p); },
        [f](const JetPoint<D>& x) { return f(x); });
  }

  const CoordinatePatch<D>& patch() const { return patch_; }

  Sym2<D> at(const Point<D>& p) const { return to_matrix<D>(value_(p)); }
  ComponentMatrix<double, D> components(const Point<D>& p) const {
    return value_(p);
  }
  ComponentMatrix<Jet<D>, D> jet(const Point<D>& p) const {
    return jet_(seed<D>(p));
  }
  ComponentMatrix<Jet<D>, D> jet(const JetPoint<D>& x) const { return jet_(x); }

  explicit operator bool() const { return static_cast<bool>(value_); }

 private:
  CoordinatePatch<D> patch_;
  ValueFn value_;
  JetFn jet_;
};

/// A scalar function on a patch with value and jet evaluators.
template <std::size_t D>
class ScalarField {
 public:
  using ValueFn = std::function<double(const Point<D>&)>;
  using JetFn = std::function<Jet<D>(const JetPoint<D>&)>;

  ScalarField() = default;
  ScalarField(ValueFn value, JetFn jet)
      : value_(std::move(value)), jet_(std::move(jet)) {}

  template <class F>
  static ScalarField from_template(F f) {
    return ScalarField([f](const Point<D>& p) { return f(p); },
                       [f](const JetPoint<D>& x) { return f(x); });
  }

  double operator()(const Point<D>& p) const { return value_(p); }
  Jet<D> jet(const Point<D>& p) const { return jet_(seed<D>(p)); }
  Jet<D> jet(const JetPoint<D>& x) const { return jet_(x); }

 private:
  ValueFn value_;
  JetFn jet_;
};

}  // namespace ahe
