#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace ahe::fit {

struct LinearFit {
  Eigen::VectorXd coefficients;
  double relative_residual = 0.0;  // ||A c - y|| / ||y||
  double condition = 0.0;          // of the column-scaled design matrix
};

/// Least squares y ≈ Σ c_k basis_k(x) via column-scaled Householder QR.
/// Throws Error{kIllConditioned} when the scaled condition number exceeds
/// `max_condition`.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<std::function<double(double)>>& basis,
                        double max_condition = 1e10);

/// Monomials t^p for each listed power.
std::vector<std::function<double(double)>> powers(const std::vector<int>& p);

std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace ahe::fit
