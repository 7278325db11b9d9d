#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ahe {

/// Second-order forward-mode jet in N variables: value, gradient and
/// (full, symmetric) Hessian, propagated by the chain rule.
///
/// Metric families are written once as templates over the scalar type and
/// evaluated with `double` for values and `Jet<N>` for the derivatives that
/// curvature needs.
template <std::size_t N>
struct Jet {
  double v = 0.0;
  std::array<double, N> d{};
  std::array<double, N * N> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Jet variable(double value, std::size_t i) {
    Jet j(value);
    j.d[i] = 1.0;
    return j;
  }

  double hess(std::size_t i, std::size_t k) const { return h[i * N + k]; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    for (std::size_t i = 0; i < N * N; ++i) h[i] += o.h[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    for (std::size_t i = 0; i < N * N; ++i) h[i] -= o.h[i];
    return *this;
  }
  Jet& operator*=(double c) {
    v *= c;
    for (auto& x : d) x *= c;
    for (auto& x : h) x *= c;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator-(Jet a) {
    a *= -1.0;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) {
    a.v += b;
    return a;
  }
  friend Jet operator+(double b, Jet a) {
    a.v += b;
    return a;
  }
  friend Jet operator-(Jet a, double b) {
    a.v -= b;
    return a;
  }
  friend Jet operator-(double b, const Jet& a) { return -a + b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double b, Jet a) { return a *= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v * b.v);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k)
        r.h[i * N + k] = a.h[i * N + k] * b.v + a.v * b.h[i * N + k] +
                         a.d[i] * b.d[k] + a.d[k] * b.d[i];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }
  friend Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

  /// f(u) given f(u0), f'(u0), f''(u0).
  friend Jet compose(const Jet& u, double f0, double f1, double f2) {
    Jet r(f0);
    for (std::size_t i = 0; i < N; ++i) r.d[i] = f1 * u.d[i];
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k)
        r.h[i * N + k] = f1 * u.h[i * N + k] + f2 * u.d[i] * u.d[k];
    return r;
  }

  friend Jet reciprocal(const Jet& u) {
    const double iv = 1.0 / u.v;
    return compose(u, iv, -iv * iv, 2.0 * iv * iv * iv);
  }
  friend Jet sqrt(const Jet& u) {
    const double s = std::sqrt(u.v);
    return compose(u, s, 0.5 / s, -0.25 / (s * u.v));
  }
  friend Jet exp(const Jet& u) {
    const double e = std::exp(u.v);
    return compose(u, e, e, e);
  }
  friend Jet log(const Jet& u) {
    return compose(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
  }
  friend Jet sin(const Jet& u) {
    const double s = std::sin(u.v);
    return compose(u, s, std::cos(u.v), -s);
  }
  friend Jet cos(const Jet& u) {
    const double c = std::cos(u.v);
    return compose(u, c, -std::sin(u.v), -c);
  }
  friend Jet sinh(const Jet& u) {
    const double s = std::sinh(u.v);
    return compose(u, s, std::cosh(u.v), s);
  }
  friend Jet cosh(const Jet& u) {
    const double c = std::cosh(u.v);
    return compose(u, c, std::sinh(u.v), c);
  }
  friend Jet pow(const Jet& u, double p) {
    const double f0 = std::pow(u.v, p);
    return compose(u, f0, p * f0 / u.v, p * (p - 1.0) * f0 / (u.v * u.v));
  }
};

/// Plain value of a scalar that may be a jet.
inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Jet<N>& x) {
  return x.v;
}

}  // namespace ahe
