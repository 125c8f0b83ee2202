#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "commons/dynamics.hpp"
#include "commons/error.hpp"
#include "commons/integrator.hpp"
#include "commons/io.hpp"
#include "commons/kernels.hpp"
#include "commons/network.hpp"
#include "commons/scenarios.hpp"
#include "commons/stability.hpp"
#include "commons/sustainability.hpp"

namespace commons::cli {
namespace {

using io::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kFallbackSeed = 1;
constexpr double kScenarioTolerance = 1e-3;

// Thrown inside commands to leave with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitError, "cannot open " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Exit{kExitError, path + ": " + e.what()};
  }
}

std::ofstream open_output(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Exit{kExitError, "cannot write " + path};
  return out;
}

void write_json_file(const std::string& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out.flush()) throw Exit{kExitError, "write failed: " + path};
}

io::Model load_model(const std::string& path) {
  return io::model_from_json(read_json(path));
}

std::uint64_t default_seed() {
  const char* env = std::getenv("COMMONS_DYN_SEED");
  if (env == nullptr || *env == '\0') return kFallbackSeed;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw Exit{kExitError, std::string("COMMONS_DYN_SEED is not an unsigned integer: ") + env};
  }
  return seed;
}

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::optional<double> horizon;

  json to_json() const {
    const auto opt = [](const auto& x) { return x ? json(*x) : json(nullptr); };
    return {{"tool", kToolName},
            {"version", kVersion},
            {"command", command},
            {"args", args},
            {"inputs", inputs},
            {"outputs", outputs},
            {"seed", opt(seed)},
            {"step", opt(step)},
            {"horizon", opt(horizon)},
            {"kernels", std::string(kernels::to_string(kernels::active_variant()))}};
  }
};

// Gate shared by the commands that need a model satisfying every assumption.
void require_valid(const io::Model& model, bool force, std::ostream& err) {
  const auto report = check_assumptions(model.network, model.params);
  if (report.all_pass()) return;
  if (force) {
    err << "warning: model fails its assumptions; continuing because of --force\n";
    return;
  }
  err << io::to_json(report).dump(2) << '\n';
  throw Exit{kExitViolation, "model fails its assumptions (use --force to run anyway)"};
}

Vector initial_w(const std::vector<double>& given, std::size_t n) {
  if (given.empty()) return Vector(n, 0.0);
  if (given.size() != n) {
    throw Exit{kExitError, "--w0 needs " + std::to_string(n) + " values, got " +
                               std::to_string(given.size())};
  }
  return given;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& model_path, std::ostream& out) {
  const auto model = load_model(model_path);
  const auto report = check_assumptions(model.network, model.params);
  out << io::to_json(report).dump(2) << '\n';
  return report.all_pass() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const std::string& model_path, std::ostream& out) {
  const auto model = load_model(model_path);
  const auto report = spectral_certificate(gram_matrix(model.network, model.params));
  out << io::to_json(report).dump(2) << '\n';
  const bool certificate = report.psd && report.one_in_nullspace && report.rank_deficiency == 1;
  return certificate ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string model;
  std::string out;
  std::string manifest;
  double t_end = 50.0;
  double step = kDefaultStep;
  double v0 = 0.0;
  std::vector<double> w0;
  std::size_t stride = 1;
  bool force = false;
};

int cmd_simulate(const SimulateOptions& opt, const std::vector<std::string>& args,
                 std::ostream& out, std::ostream& err) {
  const auto model = load_model(opt.model);
  require_valid(model, opt.force, err);
  const Equilibrium eq = equilibrium(model.params, model.network);
  const std::size_t n = model.network.size();
  const Vector state0 = flatten({opt.v0, initial_w(opt.w0, n)});
  if (!(opt.step > 0.0 && opt.step <= opt.t_end)) {
    throw Exit{kExitError, "--step must satisfy 0 < step <= t-end"};
  }

  Manifest manifest{"simulate", args, {opt.model}, {opt.out}, std::nullopt,
                    opt.step, opt.t_end};
  const std::string manifest_path =
      opt.manifest.empty() ? opt.out + ".manifest.json" : opt.manifest;
  write_json_file(manifest_path, manifest.to_json());

  auto csv = open_output(opt.out);
  io::write_trajectory_header(csv, n);
  const ShiftedField field(model.params, model.network, eq);
  std::size_t k = 0;
  double last_t = 0.0;
  const auto failure = integrate(
      [&field](std::span<const double> s, std::span<double> r) { field(s, r); },
      state0, opt.t_end, opt.step,
      [&](double t, std::span<const double> s, std::span<const double> r) {
        if (k % opt.stride == 0 || t == opt.t_end) {
          io::write_trajectory_row(csv, t, s, r, eq,
                                   lyapunov(s[0], s.subspan(1), model.params, eq));
        }
        ++k;
        last_t = t;
        return true;
      });
  csv.flush();

  json summary{{"output", opt.out},
               {"manifest", manifest_path},
               {"samples", k},
               {"final_time", last_t},
               {"equilibrium", io::to_json(eq)},
               {"status", failure ? std::string(to_string(*failure)) : "ok"}};
  out << summary.dump(2) << '\n';
  if (failure) {
    err << "integration stopped at t = " << io::format_double(last_t)
        << ": non-finite state; partial output kept in " << opt.out << '\n';
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- certify

struct CertifyOptions {
  std::string model;
  std::string out;
  std::string manifest;
  std::vector<double> box;
  std::optional<double> minimal_window;
  double v0 = 0.0;
  std::vector<double> w0;
  double step = kDefaultStep;
  bool force = false;
};

json simulate_in_box(const io::Model& model, const Equilibrium& eq,
                     const SustainabilityBox& box, const Vector& state0, double h) {
  const ShiftedField field(model.params, model.network, eq);
  const double step = std::min(h, box.t_max);
  const Trajectory traj = integrate(
      [&field](std::span<const double> s, std::span<double> r) { field(s, r); },
      state0, box.t_max, step);
  if (!traj.ok()) return {{"sustainable", false}, {"status", to_string(*traj.error())}};
  const BoxVerdict verdict = box_invariance(traj, box);
  json j{{"sustainable", verdict.sustainable}, {"step", step}, {"samples", traj.samples()}};
  if (verdict.first_violation) {
    const auto& v = *verdict.first_violation;
    j["first_violation"] = {{"time", v.time},
                            {"bound", std::string(to_string(v.bound))},
                            {"value", v.value}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

int cmd_certify(const CertifyOptions& opt, const std::vector<std::string>& args,
                std::ostream& out, std::ostream& err) {
  const auto model = load_model(opt.model);
  require_valid(model, opt.force, err);
  const Equilibrium eq = equilibrium(model.params, model.network);
  const Vector w0 = initial_w(opt.w0, model.network.size());

  SustainabilityBox box;
  if (opt.minimal_window) {
    try {
      box = minimal_window(model.params, model.network, eq, *opt.minimal_window, opt.v0, w0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kWindowInfeasible) throw;
      out << json{{"window_feasible", false}, {"reason", e.what()}}.dump(2) << '\n';
      return kExitInfeasible;
    }
  } else {
    box = {opt.box[0], opt.box[1], opt.box[2], opt.box[3], opt.box[4]};
  }

  if (!opt.out.empty()) {
    Manifest manifest{"certify", args, {opt.model}, {opt.out}, std::nullopt,
                      opt.step, box.t_max};
    write_json_file(opt.manifest.empty() ? opt.out + ".manifest.json" : opt.manifest,
                    manifest.to_json());
  }

  const auto cert = certify(model.params, model.network, eq, box, opt.v0, w0);
  json doc{{"box", io::to_json(box)},
           {"v0", opt.v0},
           {"w0", w0},
           {"certificate", io::to_json(cert)},
           {"simulation", simulate_in_box(model, eq, box, flatten({opt.v0, w0}), opt.step)}};

  int code = cert.certified ? kExitOk : cert.feasible ? kExitNotCertified : kExitInfeasible;
  if (opt.minimal_window) {
    // The window sits exactly on the certificate boundary, so the verdict is
    // taken from the back-substitution residual rather than from a
    // comparison that rounding can tip either way.
    const double residual = window_residual(cert.constants);
    doc["window_feasible"] = true;
    doc["residual"] = residual;
    code = residual <= 1e-9 ? kExitOk : kExitNotCertified;
  }

  const std::string text = doc.dump(2) + '\n';
  if (!opt.out.empty()) {
    auto file = open_output(opt.out);
    file << text;
  }
  out << text;
  return code;
}

// ---------------------------------------------------------------- scenario

struct ScenarioOptions {
  std::string out_dir = "scenario-out";
  std::optional<std::uint64_t> seed;
  std::size_t agents = 25;
  std::size_t edges = 114;
  double t_end = 200.0;
  double step = kDefaultStep;
  std::optional<double> b;
  std::size_t stride = 100;
  std::size_t jobs = 1;
  double tolerance = kScenarioTolerance;
};

struct SocietyRun {
  std::optional<double> converged_w;
  std::optional<double> converged_all;
  double min_v = 0.0;
  double max_v = 0.0;
  double max_abs_w = 0.0;
  double final_norm = 0.0;
  std::size_t samples = 0;
  std::optional<ErrorCode> failure;
};

SocietyRun run_society(const ScenarioConfig& cfg, const ShiftedState& start,
                       const ScenarioOptions& opt, const std::string& csv_path) {
  const Equilibrium eq = equilibrium(cfg.params, cfg.network);
  const ShiftedField field(cfg.params, cfg.network, eq);
  auto csv = open_output(csv_path);
  io::write_trajectory_header(csv, cfg.network.size());

  SocietyRun run;
  ConvergenceTracker by_w(opt.tolerance, Component::kConsumption);
  ConvergenceTracker by_all(opt.tolerance, Component::kAll);
  run.min_v = run.max_v = start.v;
  const auto& k = kernels::active();
  run.failure = integrate(
      [&field](std::span<const double> s, std::span<double> r) { field(s, r); },
      flatten(start), opt.t_end, opt.step,
      [&](double t, std::span<const double> s, std::span<const double> r) {
        if (run.samples % opt.stride == 0 || t == opt.t_end) {
          io::write_trajectory_row(csv, t, s, r, eq,
                                   lyapunov(s[0], s.subspan(1), cfg.params, eq));
        }
        ++run.samples;
        by_w.observe(t, s);
        by_all.observe(t, s);
        run.min_v = std::min(run.min_v, s[0]);
        run.max_v = std::max(run.max_v, s[0]);
        const double w_inf = k.norm_inf(s.data() + 1, s.size() - 1);
        run.max_abs_w = std::max(run.max_abs_w, w_inf);
        run.final_norm = std::max(std::fabs(s[0]), w_inf);
        return true;
      });
  run.converged_w = by_w.result();
  run.converged_all = by_all.result();
  return run;
}

double mean_of(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

int cmd_scenario(const ScenarioOptions& opt, const std::vector<std::string>& args,
                 std::ostream& out, std::ostream& err) {
  if (!(opt.step > 0.0 && opt.step <= opt.t_end)) {
    throw Exit{kExitError, "--step must satisfy 0 < step <= t-end"};
  }
  if (opt.stride == 0 || opt.jobs == 0) throw Exit{kExitError, "--stride and --jobs must be positive"};
  const std::uint64_t seed = opt.seed ? *opt.seed : default_seed();
  SuiteOptions suite_opt;
  suite_opt.agents = opt.agents;
  suite_opt.edges = opt.edges;
  suite_opt.seed = seed;
  suite_opt.uniform_b = opt.b;
  const auto suite = scenario_suite(suite_opt);
  const ShiftedState start = scenario_initial_state(opt.agents, seed);

  const fs::path dir(opt.out_dir);
  Manifest manifest{"scenario", args, {}, {}, seed, opt.step, opt.t_end};
  for (const auto& cfg : suite) {
    const std::string label(to_string(cfg.label));
    manifest.outputs.push_back((dir / (label + ".json")).string());
    manifest.outputs.push_back((dir / (label + ".csv")).string());
  }
  manifest.outputs.push_back((dir / "summary.json").string());
  write_json_file((dir / "manifest.json").string(), manifest.to_json());

  for (const auto& cfg : suite) {
    json doc = io::to_json(cfg);
    doc["w0"] = start.w;
    write_json_file((dir / (std::string(to_string(cfg.label)) + ".json")).string(), doc);
  }

  std::array<SocietyRun, 3> runs;
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(3);
  const auto worker = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      try {
        const std::string label(to_string(suite[i].label));
        runs[i] = run_society(suite[i], start, opt, (dir / (label + ".csv")).string());
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < std::min(opt.jobs, suite.size()); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw Exit{kExitError, e};
  }

  const auto opt_time = [](const std::optional<double>& t) {
    return t ? json(*t) : json(nullptr);
  };
  json societies = json::array();
  bool all_finite = true;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& cfg = suite[i];
    const auto& r = runs[i];
    all_finite = all_finite && !r.failure;
    societies.push_back(
        {{"label", std::string(to_string(cfg.label))},
         {"delta", cfg.delta},
         {"mean_alpha", mean_of(cfg.params.alpha())},
         {"mean_nu", mean_of(cfg.params.nu())},
         {"x0", equilibrium(cfg.params, cfg.network).x0},
         {"convergence_time_w", opt_time(r.converged_w)},
         {"convergence_steps_w",
          r.converged_w ? json(std::llround(*r.converged_w / opt.step)) : json(nullptr)},
         {"convergence_time_all", opt_time(r.converged_all)},
         {"min_v", r.min_v},
         {"max_v", r.max_v},
         {"peak_abs_v", std::max(-r.min_v, r.max_v)},
         {"max_abs_w", r.max_abs_w},
         {"final_norm", r.final_norm},
         {"samples", r.samples},
         {"status", r.failure ? std::string(to_string(*r.failure)) : "ok"}});
  }
  const json summary{{"seed", seed},
                     {"agents", opt.agents},
                     {"edges", opt.edges},
                     {"t_end", opt.t_end},
                     {"step", opt.step},
                     {"tolerance", opt.tolerance},
                     {"t_norm", one_norm(interaction_matrix(suite[0].network))},
                     {"societies", societies}};
  write_json_file((dir / "summary.json").string(), summary);
  out << summary.dump(2) << '\n';
  if (!all_finite) {
    err << "at least one society produced a non-finite state\n";
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- replay

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
  const json m = read_json(path);
  if (!m.is_object() || m.value("tool", "") != kToolName || !m.contains("args") ||
      !m["args"].is_array()) {
    throw Exit{kExitError, path + ": not a " + std::string(kToolName) + " manifest"};
  }
  const auto args = m["args"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") {
    throw Exit{kExitError, "refusing to replay a replay"};
  }
  const std::string recorded = m.value("kernels", "");
  const std::string active(kernels::to_string(kernels::active_variant()));
  if (recorded != active) {
    err << "warning: manifest was produced with " << recorded << " kernels, running "
        << active << "; set COMMONS_DYN_KERNELS=scalar on both sides for identical bytes\n";
  }
  return run(args, out, err);
}

int map_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNonFiniteState:
    case ErrorCode::kInfeasibleEquilibrium:
    case ErrorCode::kAssumptionThreeViolated:
      return kExitViolation;
    case ErrorCode::kWindowInfeasible:
      return kExitInfeasible;
    default:
      return kExitError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Networked resource-consumption dynamics: validation, simulation and "
               "stability/sustainability certificates",
               kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string model_path;
  auto* validate = app.add_subcommand("validate", "Check the structural assumptions of a model");
  validate->add_option("model", model_path, "Model JSON file")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Spectral report of T^T Theta + Theta T");
  spectrum->add_option("model", model_path, "Model JSON file")->required();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate the shifted dynamics to CSV");
  simulate->add_option("model", sim.model, "Model JSON file")->required();
  simulate->add_option("--out", sim.out, "Trajectory CSV path")->required();
  simulate->add_option("--manifest", sim.manifest, "Manifest path (default <out>.manifest.json)");
  simulate->add_option("--t-end", sim.t_end, "Horizon")->capture_default_str();
  simulate->add_option("--step", sim.step, "RK4 step")->capture_default_str();
  simulate->add_option("--v0", sim.v0, "Initial log-resource deviation")->capture_default_str();
  simulate->add_option("--w0", sim.w0, "Initial consumption deviations (comma separated)")
      ->delimiter(',');
  simulate->add_option("--stride", sim.stride, "Write every k-th sample")
      ->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_flag("--force", sim.force, "Run even if the assumptions fail");

  CertifyOptions cert;
  auto* certify_cmd = app.add_subcommand("certify", "Sustainability certificate for a box");
  certify_cmd->add_option("model", cert.model, "Model JSON file")->required();
  auto* box_opt = certify_cmd->add_option("--box", cert.box, "v_min v_max d_min d_max t_max")
                      ->expected(5);
  auto* window_opt = certify_cmd->add_option(
      "--minimal-window", cert.minimal_window, "Compute the minimal window for this horizon");
  box_opt->excludes(window_opt);
  certify_cmd->add_option("--v0", cert.v0, "Initial log-resource deviation")->capture_default_str();
  certify_cmd->add_option("--w0", cert.w0, "Initial consumption deviations (comma separated)")
      ->delimiter(',');
  certify_cmd->add_option("--step", cert.step, "Step for the box-invariance simulation")
      ->capture_default_str();
  certify_cmd->add_option("--out", cert.out, "Also write the certificate JSON here");
  certify_cmd->add_option("--manifest", cert.manifest, "Manifest path (default <out>.manifest.json)");
  certify_cmd->add_flag("--force", cert.force, "Run even if the assumptions fail");

  ScenarioOptions scen;
  auto* scenario = app.add_subcommand(
      "scenario", "Pro-social, equal and pro-ecological runs on one seeded random network");
  scenario->add_option("--out-dir", scen.out_dir, "Output directory")->capture_default_str();
  scenario->add_option("--seed", scen.seed, "Seed (default: $COMMONS_DYN_SEED or 1)");
  scenario->add_option("--agents", scen.agents, "Number of agents")->capture_default_str();
  scenario->add_option("--edges", scen.edges, "Number of directed edges")->capture_default_str();
  scenario->add_option("--t-end", scen.t_end, "Horizon")->capture_default_str();
  scenario->add_option("--step", scen.step, "RK4 step")->capture_default_str();
  scenario->add_option("--b", scen.b, "Common sensitivity b_i (default: drawn from U(0,1])");
  scenario->add_option("--stride", scen.stride, "Write every k-th sample")->capture_default_str();
  scenario->add_option("--tolerance", scen.tolerance, "Convergence tolerance")
      ->capture_default_str();
  scenario->add_option("--jobs", scen.jobs, "Societies integrated in parallel")
      ->capture_default_str()->check(CLI::Range(1, 3));

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path, "Manifest JSON file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (validate->parsed()) return cmd_validate(model_path, out);
    if (spectrum->parsed()) return cmd_spectrum(model_path, out);
    if (simulate->parsed()) return cmd_simulate(sim, args, out, err);
    if (certify_cmd->parsed()) {
      if (cert.box.empty() && !cert.minimal_window) {
        throw Exit{kExitError, "certify needs --box or --minimal-window"};
      }
      return cmd_certify(cert, args, out, err);
    }
    if (scenario->parsed()) return cmd_scenario(scen, args, out, err);
    if (replay->parsed()) return cmd_replay(manifest_path, out, err);
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "error: " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return map_error(e);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace commons::cli
