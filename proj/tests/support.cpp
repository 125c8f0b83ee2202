#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "commons/error.hpp"

namespace testing_support {

Network two_agent_network() {
  return commons::build_network(Matrix{{0, 1}, {1, 0}}, false);
}

AgentParams two_agent_params() {
  return commons::make_params({0.5, 0.5}, {0.5, 0.5}, {1, 1}, {0.2, 0.4});
}

Instance random_instance(commons::Rng& rng, std::size_t max_agents) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::size_t n = 2 + rng.below(max_agents - 1);
    const std::size_t slots = n * (n - 1);
    // At least two edges per agent keeps strongly connected draws common.
    const std::size_t low = std::min(slots, 2 * n);
    const std::size_t m = low + rng.below(slots - low + 1);
    std::optional<Network> drawn;
    try {
      drawn = commons::random_network(n, m, rng.below(UINT64_MAX));
    } catch (const commons::Error&) {
      continue;
    }
    const Network& net = *drawn;
    // Spread sociabilities over two decades to exercise both regimes.
    const double mean_theta = std::exp(rng.uniform(std::log(0.02), std::log(20.0)));
    const Vector theta = commons::consistent_theta(net, mean_theta);
    Vector alpha(n), nu(n), b(n), rho(n);
    for (std::size_t i = 0; i < n; ++i) {
      alpha[i] = 1.0 / (1.0 + theta[i]);
      nu[i] = 1.0 - alpha[i];
      b[i] = rng.uniform_open_closed();
      rho[i] = rng.uniform_open_closed();
    }
    AgentParams params = commons::make_params(alpha, nu, b, rho);
    if (commons::check_assumptions(net, params).all_pass()) {
      return {net, std::move(params)};
    }
  }
  throw std::runtime_error("random_instance: no admissible draw");
}

namespace oracle {

Vector solve(std::vector<Vector> a, Vector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

Eq equilibrium(const Network& net, const AgentParams& params) {
  const std::size_t n = net.size();
  // Row i: alpha_i sum_j y_j + nu_i (y_i - sum_j w_ij y_j) = alpha_i (1 - rho_i)
  std::vector<Vector> a(n, Vector(n));
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = params.alpha()[i] - params.nu()[i] * net.weight(i, j);
    }
    a[i][i] += params.nu()[i];
    rhs[i] = params.alpha()[i] * (1.0 - params.rho()[i]);
  }
  Eq eq;
  eq.y0 = solve(a, rhs);
  double total = 0.0;
  for (double y : eq.y0) total += y;
  eq.x0 = 1.0 - total;
  eq.gamma0 = std::log(eq.x0);
  return eq;
}

Vector shifted_field(const Vector& state, const Network& net,
                     const AgentParams& params, double x0) {
  const std::size_t n = net.size();
  const double v = state[0];
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += state[1 + i];
  Vector rate(n + 1);
  rate[0] = -x0 * (std::exp(v) - 1.0) - total;
  for (std::size_t i = 0; i < n; ++i) {
    double tw = state[1 + i];
    for (std::size_t j = 0; j < n; ++j) tw -= net.weight(i, j) * state[1 + j];
    rate[1 + i] = params.b()[i] * (x0 * (std::exp(v) - 1.0) * params.alpha()[i] -
                                   params.nu()[i] * tw);
  }
  return rate;
}

double lyapunov(double v, const Vector& w, const AgentParams& params, double gamma0) {
  double quad = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    quad += w[i] * w[i] / (params.alpha()[i] * params.b()[i]);
  }
  return std::exp(v) - v - 1.0 + 0.5 * std::exp(-gamma0) * quad;
}

Vector symmetric_eigenvalues(std::vector<Vector> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        (i == j ? scale : off) += a[i][j] * a[i][j];
      }
    }
    if (off <= 1e-30 * (scale + off) || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

Vector rk4(const Field& f, Vector x, double t_end, std::size_t steps) {
  const double h = t_end / static_cast<double>(steps);
  const std::size_t d = x.size();
  Vector tmp(d);
  for (std::size_t s = 0; s < steps; ++s) {
    const Vector k1 = f(x);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    const Vector k2 = f(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    const Vector k3 = f(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    const Vector k4 = f(tmp);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return x;
}

}  // namespace oracle
}  // namespace testing_support
