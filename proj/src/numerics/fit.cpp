#include "ahe/numerics/fit.hpp"

#include "ahe/error.hpp"

#include <cmath>

namespace ahe::fit {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::function<double(double)>>& basis,
                        double max_condition) {
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  if (rows < cols || y.size() != x.size()) {
    throw Error(ErrorCode::kIllConditioned, "fit grid too coarse for basis");
  }
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    b[i] = y[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < cols; ++k)
      a(i, k) = basis[static_cast<std::size_t>(k)](x[static_cast<std::size_t>(i)]);
  }
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (Eigen::Index k = 0; k < cols; ++k) {
    if (scale[k] == 0.0) scale[k] = 1.0;
    a.col(k) /= scale[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  LinearFit out;
  out.condition = sv[0] / sv[sv.size() - 1];
  if (!(out.condition <= max_condition)) {
    throw Error(ErrorCode::kIllConditioned, "least-squares design is ill-conditioned");
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const double bn = b.norm();
  out.relative_residual = (a * c - b).norm() / (bn > 0 ? bn : 1.0);
  out.coefficients = c.cwiseQuotient(scale);
  return out;
}

std::vector<std::function<double(double)>> powers(const std::vector<int>& p) {
  std::vector<std::function<double(double)>> out;
  out.reserve(p.size());
  for (int k : p) out.emplace_back([k](double t) { return std::pow(t, k); });
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, u);
  }
  return out;
}

}  // namespace ahe::fit
