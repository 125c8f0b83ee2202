#include "linalg.hpp"

#include <Eigen/Dense>
#include <limits>

namespace commons::detail {
namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

LinearSolve solve(const Matrix& m, const Vector& rhs, double condition_limit) {
  const Eigen::MatrixXd a = view(m);
  LinearSolve out;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0.0 ? smax / smin
                             : std::numeric_limits<double>::infinity();
  if (!(out.condition < condition_limit)) return out;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(),
                                            static_cast<Eigen::Index>(rhs.size()));
  Eigen::VectorXd x = lu.solve(b);
  // One step of iterative refinement.
  x += lu.solve(b - a * x);
  out.x = Vector(x.data(), x.data() + x.size());
  return out;
}

Vector symmetric_eigenvalues(const Matrix& m) {
  const Eigen::MatrixXd a = view(m);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return Vector(ev.data(), ev.data() + ev.size());
}

Vector null_vector(const Matrix& m) {
  // Replace the last equation by the normalisation sum(x) = 1; for a rank n-1
  // matrix whose rows sum to zero the remaining rows are independent.
  const Eigen::Index n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd a = view(m);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(rhs);
  for (int k = 0; k < 3; ++k) x += lu.solve(rhs - a * x);
  return Vector(x.data(), x.data() + x.size());
}

}  // namespace commons::detail
