#pragma once

#include <optional>

#include <Eigen/Dense>

namespace qpii {

/// Default relative pivot cutoff for complex matrix inversion.
inline constexpr double kPivotTolerance = 1e-12;

/// Gauss-Jordan inverse with partial pivoting.  Returns nullopt when a pivot
/// falls below `rel_tol` times the largest entry magnitude of `m`.
std::optional<Eigen::MatrixXcd> invert_pivoted(const Eigen::MatrixXcd& m, double rel_tol = kPivotTolerance);

/// Largest entry magnitude.
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace qpii
