// Acceptance checks 1-10. `acceptance` runs all of them; `acceptance N` runs one.
// Each prints a single PASS/FAIL line; the exit status is non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "finn/fvm/flux.hpp"
#include "finn/fvm/retardation.hpp"
#include "finn/fvm/simulator.hpp"
#include "finn/io/presets.hpp"
#include "finn/model/finn.hpp"
#include "finn/ode/integrators.hpp"
#include "finn/simd/kernels.hpp"
#include "finn/train/experiment.hpp"
#include "finn/train/losses.hpp"
#include "finn/train/trainer.hpp"

using namespace finn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string sci(double v) { return fmt("%.3e", v); }

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double freundlich_oracle(double c) {
  const double phi = 0.29, rho = 2880.0, kf = 3.53e-4, nf = 0.874;
  return 1.0 + (1.0 - phi) / phi * rho * kf * nf * std::pow(c, nf - 1.0);
}

std::vector<double> values(ad::Var v) { return {v.value().begin(), v.value().end()}; }

const Dataset& train_data() {
  static const Dataset d = io::generate_dataset(io::preset("synthetic-train"));
  return d;
}
const Dataset& test_data() {
  static const Dataset d = io::generate_dataset(io::preset("synthetic-test"));
  return d;
}
FinnConfig synthetic_model() { return io::finn_config_for(io::preset("synthetic-train")); }

// The desk-scale run shared by 6, 7 and 8.
struct DeskRun {
  TrainResult result;
  MseReport mse;
  double seconds = 0.0;
};

const DeskRun& desk_run() {
  static const DeskRun run = [] {
    DeskRun r;
    const auto t0 = std::chrono::steady_clock::now();
    const FinnConfig model = synthetic_model();
    TrainConfig tc;
    tc.epochs = 200;
    tc.seed = 0;
    tc.noise_sigma = 1e-5;
    r.result = train_finn(finn_init(model, 0), model, tc, train_data());
    r.mse = evaluate(r.result.best_params, model, train_data(), test_data());
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return run;
}

Outcome classical_stencil() {
  std::mt19937_64 rng(1);
  const double dx = 0.04;
  double worst = 0.0;
  std::size_t cases = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const auto u = uniform(26, -1.0, 2.0, rng);
    const double d = uniform(1, 1e-6, 1e-2, rng)[0];
    const double d_b = uniform(1, 1e-6, 1e-2, rng)[0];
    const auto bcs = uniform(4, 0.01, 2.0, rng);
    const std::vector<BoundaryCondition> kinds{Dirichlet{bcs[0]}, Neumann{bcs[1] - 1.0}, Cauchy{bcs[2]}};
    for (const auto& l : kinds)
      for (const auto& r : kinds) {
        ad::Tape t;
        const ad::Var x = t.constant(u);
        const TapeClosure cl = tape_ghosts(x, l, r, t.constant(d_b), dx);
        const auto got = values(flux_kernel(x, cl, t.constant({-1.0, 1.0}), t.constant(d), dx));
        const auto ref = flux_divergence(u, ghost_values(u, l, r, d_b, dx), d, dx);
        for (std::size_t i = 0; i < 26; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
        ++cases;
      }
  }
  return {worst <= 1e-12, "max |learned - reference| = " + sci(worst) + " over " + std::to_string(cases) +
                              " states x boundary pairs (tol 1e-12)"};
}

Outcome analytic_oracle() {
  const SoilParams soil{5e-4, 0.29, 2880.0, 3.53e-4, 0.874};
  const Grid1D grid{400, 0.005, 2.0};
  const std::vector<double> t{0.0, 10.0, 25.0, 50.0};
  const FieldPair init{std::vector<double>(400, 0.0), std::vector<double>(400, 0.0)};
  SimulationOptions opt;
  opt.unit_retardation = true;
  opt.rtol = 1e-8;
  opt.atol = 1e-10;
  const Dataset d = simulate_diffusion_sorption(grid, soil, Dirichlet{1.0}, Neumann{0.0}, t, init, opt);
  double worst = 0.0;
  bool before_front = true;
  std::size_t points = 0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    before_front = before_front && d.c[k].back() < 1e-6;
    for (std::size_t i = 0; i < grid.n_volumes; ++i) {
      const double x = static_cast<double>(i + 1) * grid.dx;
      const double exact = std::erfc(x / (2.0 * std::sqrt(soil.D_e * t[k])));
      if (exact <= 0.05) continue;
      worst = std::max(worst, std::abs(d.c[k][i] - exact) / exact);
      ++points;
    }
  }
  return {before_front && points > 0 && worst < 0.02,
          "max relative error " + sci(worst) + " at " + std::to_string(points) + " points (tol 2e-2)"};
}

Outcome freundlich_values() {
  const SoilParams soil = io::preset("synthetic-train").soil;
  const double r1 = retardation_freundlich(1.0, soil), r05 = retardation_freundlich(0.5, soil);
  const double o1 = freundlich_oracle(1.0), o05 = freundlich_oracle(0.5);
  const bool ok = std::abs(r1 - 3.1754) <= 1e-3 && std::abs(r05 - 3.3740) <= 1e-3 &&
                  std::abs(r1 - o1) <= 1e-3 && std::abs(r05 - o05) <= 1e-3;
  return {ok, "R(1.0) = " + fmt("%.5f", r1) + " (oracle " + fmt("%.5f", o1) + "), R(0.5) = " + fmt("%.5f", r05) +
                  " (oracle " + fmt("%.5f", o05) + "), tol 1e-3"};
}

double state_sum_residual(const ParamStore& p, const FinnConfig& cfg, const FieldPair& s) {
  ad::Tape t;
  const BoundParams b(t, p);
  const FinnVars v = bind_finn(b, p, cfg);
  const VarPair r = finn_rhs(v, cfg, {t.constant(s.c), t.constant(s.c_t)}, 0.0);
  double worst = 0.0;
  for (ad::Var f : {r.c, r.c_t}) {
    double sum = 0.0, mag = 0.0;
    for (double x : f.value()) {
      sum += x;
      mag += std::abs(x);
    }
    worst = std::max(worst, std::abs(sum) / std::max(mag, 1e-300));
  }
  return worst;
}

Outcome conservation() {
  FinnConfig cfg = synthetic_model();
  cfg.left = Neumann{0.0};
  cfg.right = Neumann{0.0};
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t violations = 0;
  for (std::uint64_t draw = 0; draw < 1000; ++draw) {
    ParamStore p = finn_init(cfg, draw);
    const auto w = uniform(3, -2.0, 2.0, rng);
    p.at("stencil").values = {w[0], w[1]};
    p.at("d_c.raw_scale").values = {w[2]};
    p.at("d_ct.raw").values = {uniform(1, 0.0, 1.0, rng)[0]};
    const FieldPair s{uniform(26, 0.0, 1.0, rng), uniform(26, 0.0, 1.0, rng)};
    const double r = state_sum_residual(p, cfg, s);
    worst = std::max(worst, r);
    if (r > 1e-12) ++violations;
  }

  // the regime where the face terms cancel: antisymmetric stencil, constant coefficient
  FinnConfig flat = cfg;
  flat.d_c = DiffusionKind::scalar;
  double worst_flat = 0.0;
  for (std::uint64_t draw = 0; draw < 1000; ++draw) {
    ParamStore p = finn_init(flat, draw);
    const auto w = uniform(3, 0.1, 2.0, rng);
    p.at("stencil").values = {-w[0], w[0]};
    p.at("d_c.raw").values = {w[1]};
    p.at("d_ct.raw").values = {w[2]};
    const FieldPair s{uniform(26, 0.0, 1.0, rng), uniform(26, 0.0, 1.0, rng)};
    worst_flat = std::max(worst_flat, state_sum_residual(p, flat, s));
  }
  return {violations == 0, std::to_string(violations) + "/1000 arbitrary draws violate sum(du/dt) = 0 (max |sum|/sum|.| = " +
                               sci(worst) + ", tol 1e-12); antisymmetric stencil + constant D: max " + sci(worst_flat)};
}

Outcome gradient_check() {
  FinnConfig cfg = synthetic_model();
  cfg.grid = Grid1D{5, 0.04, 0.2};
  cfg.source = true;
  ParamStore p = finn_init(cfg, 0);
  std::mt19937_64 rng(5);
  for (const char* name : {"src_c.w3", "src_ct.w3"}) {
    auto& w = p.at(name).values;
    w = uniform(w.size(), -0.01, 0.01, rng);
  }
  const std::vector<double> t{0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  Dataset target;
  target.t = t;
  target.meta.grid = cfg.grid;
  for (std::size_t k = 0; k < t.size(); ++k) {
    target.c.push_back(uniform(5, 0.0, 0.5, rng));
    target.c_t.push_back(uniform(5, 0.0, 0.5, rng));
  }
  std::vector<double> u0 = uniform(10, 0.0, 0.3, rng);

  auto loss_of = [&](const ParamStore& params, std::vector<double>* grad) {
    ad::Tape tape;
    const BoundParams b(tape, params);
    const FinnVars v = bind_finn(b, params, cfg);
    const auto traj = rollout_tape(v, cfg, tape.constant(u0), t, RolloutOptions{});
    const ad::Var loss = mse_loss(traj, target, FullField{});
    if (grad) *grad = b.flat_gradient(tape.backward(loss));
    return loss.scalar();
  };
  std::vector<double> grad;
  loss_of(p, &grad);
  std::vector<double> flat = p.flatten_trainable();
  double worst = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double x0 = flat[i];
    const double h = 1e-6 * std::max(1.0, std::abs(x0));
    ParamStore q = p;
    flat[i] = x0 + h;
    q.assign_trainable(flat);
    const double fp = loss_of(q, nullptr);
    flat[i] = x0 - h;
    q.assign_trainable(flat);
    const double fm = loss_of(q, nullptr);
    flat[i] = x0;
    const double fd = (fp - fm) / (2 * h);
    worst = std::max(worst, std::abs(grad[i] - fd) / std::max({std::abs(grad[i]), std::abs(fd), 1e-300}));
  }
  return {worst < 1e-3, "max relative error " + sci(worst) + " over " + std::to_string(flat.size()) +
                            " parameters (tol 1e-3)"};
}

Outcome desk_training() {
  const DeskRun& r = desk_run();
  const bool ok = r.mse.training <= 1e-3 && r.mse.unseen <= 20.0 * r.mse.training && r.seconds <= 1800.0;
  return {ok, "training " + sci(r.mse.training) + " (<= 1e-3), extrapolated " + sci(r.mse.extrapolated) +
                  ", unseen " + sci(r.mse.unseen) + " (ratio " + fmt("%.2f", r.mse.unseen / r.mse.training) +
                  " <= 20), " + fmt("%.0f", r.seconds) + " s"};
}

Outcome retardation_recovery() {
  const DeskRun& r = desk_run();
  const FinnConfig model = synthetic_model();
  std::vector<double> grid;
  for (int k = 0; k <= 80; ++k) grid.push_back(0.2 + 0.01 * k);
  const RetardationCurve curve = extract_retardation(r.result.best_params, model, grid);
  bool monotone = curve.underflows == 0;
  for (std::size_t k = 1; k < curve.r.size(); ++k) monotone = monotone && curve.r[k] < curve.r[k - 1];
  const std::vector<double> probe{0.2, 0.5, 1.0};
  const RetardationCurve at = extract_retardation(r.result.best_params, model, probe);
  double worst = 0.0;
  std::string vals;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double o = freundlich_oracle(probe[i]);
    worst = std::max(worst, std::abs(at.r[i] - o) / o);
    vals += fmt("%.3f", at.r[i]) + "/" + fmt("%.3f", o) + (i + 1 < probe.size() ? ", " : "");
  }
  return {monotone && worst <= 0.25, std::string(monotone ? "monotone" : "NOT monotone") +
                                         "; learned/oracle R at 0.2, 0.5, 1.0: " + vals +
                                         "; max relative deviation " + fmt("%.3f", worst) + " (tol 0.25)"};
}

Outcome partial_observation() {
  const DeskRun& full = desk_run();
  const FinnConfig model = synthetic_model();
  TrainConfig tc;
  tc.epochs = 200;
  tc.seed = 0;
  tc.mask = BreakthroughOnly{};
  const TrainResult bt = train_finn(finn_init(model, 0), model, tc, train_data());

  RolloutOptions ro;
  ro.integrator = Integrator::adaptive;
  const Dataset& truth = train_data();
  const Dataset pred = rollout(bt.best_params, model, truth.at(0), truth.t, ro);
  const Dataset pred_full = rollout(full.result.best_params, model, truth.at(0), truth.t, ro);

  // c at the unobserved volumes 0 .. n-2 over the training window
  const std::size_t n = truth.volumes(), end = tc.window.end;
  auto interior = [&](const Dataset& p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < end; ++k)
      for (std::size_t i = 0; i + 1 < n; ++i) acc += std::pow(p.c[k][i] - truth.c[k][i], 2);
    return acc / static_cast<double>(end * (n - 1));
  };
  const double mse_bt = interior(pred), mse_full_same = interior(pred_full);
  bool bounded = true;
  for (const auto& row : pred.c)
    for (double v : row) bounded = bounded && std::isfinite(v) && v >= -0.1 && v <= 1.5;

  const double ratio = mse_bt / full.mse.training;
  return {bounded && ratio <= 10.0,
          "breakthrough-trained interior c MSE " + sci(mse_bt) + " vs full-field training MSE " +
              sci(full.mse.training) + ": ratio " + fmt("%.2f", ratio) + " (<= 10); same metric on the full-field model " +
              sci(mse_full_same) + "; rollout " + (bounded ? "within" : "OUTSIDE") + " [-0.1, 1.5 c_s]"};
}

Outcome integrator_orders() {
  const ode::Rhs<std::vector<double>> decay = [](double, const std::vector<double>& u) {
    return std::vector<double>{-u[0]};
  };
  auto err = [&](ode::FixedMethod m, double h) {
    std::vector<double> t;
    const auto steps = static_cast<int>(std::lround(1.0 / h));
    for (int k = 0; k <= steps; ++k) t.push_back(k * h);
    return std::abs(ode::integrate_fixed(decay, std::vector<double>{1.0}, t, m).back()[0] - std::exp(-1.0));
  };
  const double rk4 = err(ode::FixedMethod::rk4, 0.1) / err(ode::FixedMethod::rk4, 0.05);
  const double eu = err(ode::FixedMethod::euler, 0.1) / err(ode::FixedMethod::euler, 0.05);
  const double ad = std::abs(
      ode::integrate_adaptive(decay, std::vector<double>{1.0}, std::vector<double>{0.0, 1.0}).back()[0] -
      std::exp(-1.0));
  const bool ok = rk4 >= 12 && rk4 <= 20 && eu >= 1.8 && eu <= 2.2 && ad <= 1e-6;
  return {ok, "rk4 ratio " + fmt("%.2f", rk4) + " [12, 20], euler ratio " + fmt("%.3f", eu) +
                  " [1.8, 2.2], adaptive error " + sci(ad) + " (<= 1e-6)"};
}

Outcome multi_seed() {
  ExperimentConfig cfg;
  cfg.model = synthetic_model();
  cfg.train.epochs = 200;
  cfg.n_seeds = 10;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport rep = run_experiment(cfg, train_data(), test_data());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double lo = INFINITY, hi = 0.0;
  for (const auto& s : rep.seeds)
    if (s.ok) {
      lo = std::min(lo, s.mse.unseen);
      hi = std::max(hi, s.mse.unseen);
    }
  const double span = hi / lo;
  return {rep.survivors == 10 && span <= 100.0,
          std::to_string(rep.survivors) + "/10 seeds finished; unseen MSE " + sci(lo) + " .. " + sci(hi) + " (span " +
              fmt("%.1f", span) + "x <= 100x); mean training " + sci(rep.training.mean) + " +- " +
              sci(rep.training.std) + ", unseen " + sci(rep.unseen.mean) + " +- " + sci(rep.unseen.std) + "; " +
              fmt("%.0f", secs) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"classical-stencil reduction", classical_stencil}},
      {2, {"analytic erfc oracle", analytic_oracle}},
      {3, {"freundlich values", freundlich_values}},
      {4, {"zero-flux conservation", conservation}},
      {5, {"rollout gradient", gradient_check}},
      {6, {"desk-scale training", desk_training}},
      {7, {"retardation recovery", retardation_recovery}},
      {8, {"partial observation", partial_observation}},
      {9, {"integrator orders", integrator_orders}},
      {10, {"multi-seed spread", multi_seed}},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [k, _] : criteria) which.push_back(k);

  std::printf("simd: %s\n", std::string(simd::isa_name(simd::active().isa)).c_str());
  int failed = 0;
  for (int k : which) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-28s %s  %s\n", k, it->second.first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
