#include "commons/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commons/error.hpp"
#include "commons/kernels.hpp"
#include "linalg.hpp"

namespace commons {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kDimensionMismatch, what);
}

}  // namespace

double lyapunov(double v, std::span<const double> w, const AgentParams& params,
                const Equilibrium& eq) {
  const std::size_t n = params.size();
  require(w.size() == n, "w length differs from params");
  thread_local Vector inv;
  inv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i] = 1.0 / (params.alpha()[i] * params.b()[i]);
  }
  const double quad = kernels::active().weighted_sumsq(inv.data(), w.data(), n);
  return (std::expm1(v) - v) + 0.5 * std::exp(-eq.gamma0) * quad;
}

double lyapunov_rate(double v, std::span<const double> w,
                     const AgentParams& params, const Network& net,
                     const Equilibrium& eq) {
  const std::size_t n = net.size();
  require(params.size() == n && w.size() == n, "dimension mismatch");
  const Vector theta = params.theta();
  // w^T Theta T w = sum_i theta_i w_i (w_i - sum_j w_ij w_j)
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double tw =
        w[i] - kernels::active().dot(net.weights().row(i).data(), w.data(), n);
    quad += theta[i] * w[i] * tw;
  }
  const double e = std::expm1(v);
  const double x0 = std::exp(eq.gamma0);
  return -x0 * e * e - quad / x0;
}

Matrix gram_matrix(const Network& net, const AgentParams& params) {
  const std::size_t n = net.size();
  require(params.size() == n, "params length differs from network");
  const Matrix t = interaction_matrix(net);
  const Vector theta = params.theta();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = t(j, i) * theta[j] + theta[i] * t(i, j);
    }
  }
  return g;
}

SpectralReport spectral_certificate(const Matrix& m) {
  if (!m.square()) throw Error(ErrorCode::kNonSquare, "spectral_certificate");
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(m(i, j)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > kSymmetryTolerance * (1.0 + scale)) {
        throw Error(ErrorCode::kNonSymmetric,
                    "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  SpectralReport r;
  r.eigenvalues = detail::symmetric_eigenvalues(m);
  double lmax = 0.0;
  for (double l : r.eigenvalues) lmax = std::max(lmax, std::fabs(l));
  r.psd = r.eigenvalues.empty() ||
          r.eigenvalues.front() >= -kPsdRelativeTolerance * (1.0 + lmax);
  for (double l : r.eigenvalues) {
    if (std::fabs(l) < kRankRelativeTolerance * lmax) ++r.rank_deficiency;
  }
  if (lmax == 0.0) r.rank_deficiency = n;

  // Row-max norm of M 1 against the infinity norm of M.
  double row_norm = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double abs_sum = 0.0;
    double sum = 0.0;
    for (double x : m.row(i)) {
      abs_sum += std::fabs(x);
      sum += x;
    }
    row_norm = std::max(row_norm, abs_sum);
    m1 = std::max(m1, std::fabs(sum));
  }
  r.one_in_nullspace = m1 <= kNullspaceRelativeTolerance * row_norm;

  r.min_gershgorin_margin = n ? INFINITY : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) off += std::fabs(m(i, j));
    }
    r.min_gershgorin_margin = std::min(r.min_gershgorin_margin, m(j, j) - off);
  }
  r.gershgorin_dominant =
      r.min_gershgorin_margin >= -kNullspaceRelativeTolerance * (1.0 + scale);
  return r;
}

DescentReport descent_check(const Trajectory& traj, const AgentParams& params,
                            const Network& net, const Equilibrium& eq) {
  require(traj.dimension() == net.size() + 1, "trajectory dimension");
  DescentReport r;
  double prev = 0.0;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const auto s = traj.state(k);
    const double val = lyapunov(s[0], s.subspan(1), params, eq);
    if (k == 0) {
      r.initial = val;
    } else {
      const double jump = val - prev;
      if (jump > r.max_increase) r.max_increase = jump;
      if (jump > kDescentTolerance * (1.0 + prev)) r.monotone = false;
    }
    prev = val;
  }
  r.final = prev;
  return r;
}

}  // namespace commons
