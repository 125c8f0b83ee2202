#pragma once

// Eigen-backed dense factorizations. Internal to the library.

#include <optional>

#include "commons/matrix.hpp"

namespace commons::detail {

struct LinearSolve {
  std::optional<Vector> x;  // absent when the matrix is numerically singular
  double condition = 0.0;   // 2-norm condition number (inf if singular)
};

/// Solves m x = rhs with partial-pivot LU after an SVD condition check.
LinearSolve solve(const Matrix& m, const Vector& rhs, double condition_limit);

/// Ascending eigenvalues of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix& m);

/// Null vector of a matrix with one-dimensional kernel, normalised to sum 1.
Vector null_vector(const Matrix& m);

}  // namespace commons::detail
