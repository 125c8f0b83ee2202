#include "commons/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "commons/dynamics.hpp"
#include "commons/error.hpp"
#include "linalg.hpp"

namespace commons {
namespace {

constexpr int kConnectivityAttempts = 10000;
constexpr int kRhoAttempts = 100;

double mean(const Vector& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Vector draw(Rng& rng, std::size_t n) {
  Vector out(n);
  for (double& x : out) x = rng.uniform_open_closed();
  return out;
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::string_view to_string(Society s) noexcept {
  switch (s) {
    case Society::kProSocial: return "pro_social";
    case Society::kProEcological: return "pro_ecological";
    case Society::kEqual: return "equal";
    case Society::kCustom: return "custom";
  }
  return "custom";
}

std::optional<Society> parse_society(std::string_view name) noexcept {
  for (Society s : {Society::kProSocial, Society::kProEcological,
                    Society::kEqual, Society::kCustom}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

const std::array<double, 25>& paper_theta() noexcept {
  static constexpr std::array<double, 25> kTheta{
      0.1826, 0.3296, 0.2313, 0.3454, 0.1987, 0.1923, 0.1642, 0.1989, 0.1182,
      0.2198, 0.1124, 0.0734, 0.1592, 0.3608, 0.1913, 0.1810, 0.2098, 0.1206,
      0.3210, 0.0606, 0.0597, 0.1302, 0.0808, 0.1336, 0.1638};
  return kTheta;
}

Weights delta_parameterization(const Vector& theta, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kNonPositiveDelta, std::to_string(delta));
  }
  Weights w{Vector(theta.size()), Vector(theta.size())};
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0) || !std::isfinite(theta[i])) {
      throw Error(ErrorCode::kNonPositiveTheta, "theta[" + std::to_string(i) + "]");
    }
    w.alpha[i] = 1.0 / (1.0 + delta * theta[i]);
    // Exact complement: alpha + nu == 1 in floating point.
    w.nu[i] = 1.0 - w.alpha[i];
  }
  return w;
}

Network random_network(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kTooFewAgents, "need at least two agents");
  if (m < n) {
    throw Error(ErrorCode::kTooFewEdges,
                std::to_string(m) + " edges cannot strongly connect " +
                    std::to_string(n) + " agents");
  }
  const std::size_t slots = n * (n - 1);
  if (m > slots) {
    throw Error(ErrorCode::kTooManyEdges,
                std::to_string(m) + " > " + std::to_string(slots));
  }
  Rng rng(seed);
  std::vector<std::size_t> pool(slots);
  for (int attempt = 0; attempt < kConnectivityAttempts; ++attempt) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first m slots are a uniform m-subset.
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t pick = k + rng.below(slots - k);
      std::swap(pool[k], pool[pick]);
    }
    Matrix adj(n, n);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = pool[k] / (n - 1);
      std::size_t j = pool[k] % (n - 1);
      if (j >= i) ++j;  // skip the diagonal
      adj(i, j) = 1.0;
    }
    bool every_row = true;
    for (std::size_t i = 0; i < n && every_row; ++i) {
      const auto r = adj.row(i);
      every_row = std::any_of(r.begin(), r.end(), [](double x) { return x > 0; });
    }
    if (!every_row) continue;
    Network net = build_network(adj, true);
    if (strongly_connected(net)) return net;
  }
  throw Error(ErrorCode::kConnectivityResampleExhausted,
              "no strongly connected draw in " +
                  std::to_string(kConnectivityAttempts) + " attempts");
}

Vector consistent_theta(const Network& net, double target_mean) {
  if (!(target_mean > 0.0)) {
    throw Error(ErrorCode::kNonPositiveTheta, "mean must be positive");
  }
  if (!strongly_connected(net)) {
    throw Error(ErrorCode::kAssumptionThreeViolated,
                "stationary sociabilities need a strongly connected network");
  }
  // theta^T W = theta^T, i.e. T^T theta = 0.
  Vector theta = detail::null_vector(interaction_matrix(net).transpose());
  const double scale = target_mean / mean(theta);
  for (double& t : theta) {
    t *= scale;
    if (!(t > 0.0)) {
      throw Error(ErrorCode::kNonPositiveTheta, "stationary vector not positive");
    }
  }
  return theta;
}

Network reversible_network(const Vector& theta) {
  const std::size_t n = theta.size();
  if (n < 3) throw Error(ErrorCode::kTooFewAgents, "need at least three agents");
  double total = 0.0;
  for (double t : theta) {
    if (!(t > 0.0)) throw Error(ErrorCode::kNonPositiveTheta, "theta must be positive");
    total += t;
  }
  for (double t : theta) {
    if (!(2.0 * t < total)) {
      throw Error(ErrorCode::kInvalidParams,
                  "no reversible complete graph: one theta exceeds the rest");
    }
  }
  // Symmetric flows s_ij = x_i x_j with row sums theta_i, i.e.
  // x_i (X - x_i) = theta_i; symmetric Sinkhorn sweeps, then Newton.
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = theta[i] / std::sqrt(total);
  for (int it = 0; it < 500; ++it) {
    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::sqrt(x[i] * theta[i] / (sum - x[i]));
    }
  }
  for (int it = 0; it < 8; ++it) {
    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    Matrix jac(n, n);
    Vector f(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = -(x[i] * (sum - x[i]) - theta[i]);
      for (std::size_t j = 0; j < n; ++j) jac(i, j) = i == j ? sum - x[i] : x[i];
    }
    const auto step = detail::solve(jac, f, 1e14);
    if (!step.x) break;
    for (std::size_t i = 0; i < n; ++i) x[i] += (*step.x)[i];
  }
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) w(i, j) = x[i] * x[j] / theta[i];
    }
  }
  return build_network(w, true);
}

double preset_delta(Society label, const Vector& theta) {
  switch (label) {
    case Society::kProSocial: return kProSocialDelta;
    case Society::kProEcological: return kProEcologicalDelta;
    case Society::kEqual: return 1.0 / mean(theta);
    case Society::kCustom: break;
  }
  throw Error(ErrorCode::kInvalidParams, "custom society has no preset delta");
}

ShiftedState scenario_initial_state(std::size_t agents, std::uint64_t seed) {
  Rng rng(seed ^ 0x5bd1e9955bd1e995ULL);
  ShiftedState s{0.0, Vector(agents)};
  for (double& w : s.w) w = rng.uniform(0.0, 2.0 / static_cast<double>(agents));
  return s;
}

ScenarioConfig make_scenario(Society label, double delta, const Vector& theta,
                             const Network& net, const Vector& b,
                             const Vector& rho, std::uint64_t seed) {
  if (theta.size() != net.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta length differs from network");
  }
  auto w = delta_parameterization(theta, delta);
  AgentParams params = make_params(std::move(w.alpha), std::move(w.nu), b, rho);
  return ScenarioConfig{label, delta, seed, theta, b, rho, net, std::move(params)};
}

ScenarioConfig preset(Society label, const Vector& theta, const Network& net,
                      const Vector& b, const Vector& rho, std::uint64_t seed) {
  if (theta.size() != net.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "theta length differs from network");
  }
  const auto ok = social_dominance(net, theta);
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (!ok[i]) {
      throw Error(ErrorCode::kAssumptionThreeViolated,
                  "agent " + std::to_string(i) + " is out-influenced");
    }
  }
  return make_scenario(label, preset_delta(label, theta), theta, net, b, rho, seed);
}

std::array<ScenarioConfig, 3> scenario_suite(const SuiteOptions& opt) {
  const Network net = random_network(opt.agents, opt.edges, opt.seed);
  const double theta_mean =
      std::accumulate(paper_theta().begin(), paper_theta().end(), 0.0) /
      static_cast<double>(paper_theta().size());
  const Vector theta = consistent_theta(net, theta_mean);

  // Separate stream from the graph draw so changing b does not move rho.
  Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  Vector b = draw(rng, opt.agents);
  if (opt.uniform_b) b.assign(opt.agents, *opt.uniform_b);

  for (int attempt = 0; attempt < kRhoAttempts; ++attempt) {
    const Vector rho = draw(rng, opt.agents);
    bool feasible = true;
    for (Society s : {Society::kProSocial, Society::kEqual, Society::kProEcological}) {
      const auto cfg = preset(s, theta, net, b, rho, opt.seed);
      if (!check_assumptions(cfg.network, cfg.params).equilibrium_feasible) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      return {preset(Society::kProSocial, theta, net, b, rho, opt.seed),
              preset(Society::kEqual, theta, net, b, rho, opt.seed),
              preset(Society::kProEcological, theta, net, b, rho, opt.seed)};
    }
  }
  throw Error(ErrorCode::kParameterResampleExhausted,
              "no feasible rho draw in " + std::to_string(kRhoAttempts) + " attempts");
}

}  // namespace commons
