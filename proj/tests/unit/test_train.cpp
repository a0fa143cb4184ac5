#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "finn/errors.hpp"
#include "finn/io/checkpoint.hpp"
#include "finn/io/presets.hpp"
#include "finn/train/experiment.hpp"
#include "finn/train/losses.hpp"
#include "finn/train/trainer.hpp"
#include "support.hpp"

using namespace finn;

namespace {

const Dataset& synthetic_train() {
  static const Dataset d = io::generate_dataset(io::preset("synthetic-train"));
  return d;
}
const Dataset& synthetic_test() {
  static const Dataset d = io::generate_dataset(io::preset("synthetic-test"));
  return d;
}

FinnConfig synthetic_model() { return io::finn_config_for(io::preset("synthetic-train")); }

Dataset toy(std::size_t steps, std::size_t n, double base) {
  Dataset d;
  d.meta.grid = Grid1D{n, 1.0, static_cast<double>(n)};
  for (std::size_t k = 0; k < steps; ++k) {
    d.t.push_back(static_cast<double>(k));
    std::vector<double> c(n), ct(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = base + 0.1 * static_cast<double>(k) + 0.01 * static_cast<double>(i);
      ct[i] = -c[i];
    }
    d.c.push_back(c);
    d.c_t.push_back(ct);
  }
  return d;
}

TrainConfig short_run(std::size_t epochs) {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.window = {0, 41};
  return tc;
}

}  // namespace

TEST_CASE("noise injection") {
  const Dataset& clean = synthetic_train();
  CHECK(add_noise(clean, 0.0, 3) == clean);
  const Dataset noisy = add_noise(clean, 1e-5, 3);
  CHECK(noisy == add_noise(clean, 1e-5, 3));
  CHECK_FALSE(noisy == add_noise(clean, 1e-5, 4));
  double s1 = 0.0, s2 = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < clean.steps(); ++k)
    for (std::size_t i = 0; i < clean.volumes(); ++i)
      for (double d : {noisy.c[k][i] - clean.c[k][i], noisy.c_t[k][i] - clean.c_t[k][i]}) {
        s1 += d;
        s2 += d * d;
        ++count;
      }
  const double mean = s1 / static_cast<double>(count);
  const double sd = std::sqrt(s2 / static_cast<double>(count) - mean * mean);
  CHECK(std::abs(sd - 1e-5) / 1e-5 < 0.05);
  CHECK(std::abs(mean) < 1e-6);
  CHECK_THROWS_AS(add_noise(clean, -1.0, 0), ConfigError);
}

TEST_CASE("mse and masks") {
  const Dataset a = toy(4, 3, 0.0);
  CHECK(mse(a, a) == 0.0);

  Dataset b = a;
  for (auto& row : b.c)
    for (double& v : row) v += 0.25;
  for (auto& row : b.c_t)
    for (double& v : row) v += 0.25;
  CHECK(mse(a, b) == doctest::Approx(0.0625));

  Dataset c = a;
  const std::vector<double> bump{0.1, -0.3, 0.2, 0.4};
  for (std::size_t k = 0; k < 4; ++k) {
    c.c[k][2] += bump[k];
    c.c[k][0] += 5.0;  // outside the breakthrough column
  }
  double hand = 0.0;
  for (double v : bump) hand += v * v;
  CHECK(mse(c, a, BreakthroughOnly{}) == doctest::Approx(hand / 4));

  Dataset p = a;
  p.c_t[3][1] += 0.6;
  p.c_t[1][1] += 9.0;  // not the final row
  CHECK(mse(p, a, FinalProfileOnly{}) == doctest::Approx(0.36 / 3));
  CHECK(mse(p, a, FinalProfileOnly{}, {0, 2}) == doctest::Approx(81.0 / 3));

  CHECK(mse(b, a, FullField{}, {1, 3}) == doctest::Approx(0.0625));
  CHECK_THROWS_AS(mse(a, toy(4, 2, 0.0)), ShapeError);
  CHECK_THROWS_AS(mse(a, a, FullField{}, {2, 9}), ShapeError);

  for (const char* m : {"full", "breakthrough", "profile"}) CHECK(mask_name(parse_mask(m)) == m);
  CHECK_THROWS_AS(parse_mask("middle"), ConfigError);
}

TEST_CASE("tape loss equals the plain mse") {
  const Dataset target = toy(5, 4, 0.2);
  const Dataset pred = toy(5, 4, 0.1);
  for (const LossMask& m : {LossMask{FullField{}}, LossMask{BreakthroughOnly{}}, LossMask{FinalProfileOnly{}}}) {
    ad::Tape t;
    std::vector<ad::Var> rows;
    for (std::size_t k = 1; k < 5; ++k) {
      std::vector<double> u = pred.c[k];
      u.insert(u.end(), pred.c_t[k].begin(), pred.c_t[k].end());
      rows.push_back(t.leaf(u));
    }
    const double v = mse_loss(rows, target, m, 1).scalar();
    CHECK(v == doctest::Approx(mse(pred, target, m, {1, 5})).epsilon(1e-14));
  }
}

TEST_CASE("zero epochs returns the initialization") {
  const FinnConfig model = synthetic_model();
  const ParamStore init = finn_init(model, 0);
  const TrainResult r = train_finn(init, model, short_run(0), synthetic_train());
  CHECK(r.history.empty());
  CHECK(r.final_params == init);
  CHECK(r.best_params == init);
}

TEST_CASE("frozen physics loss shrinks with RK4 substeps") {
  const FinnConfig model = synthetic_model();
  const ParamStore phys = finn_physics(model, io::preset("synthetic-train").soil);
  // R(c) is singular at c = 0, so RK4 at the data step converges slowly; loss falls with substeps
  double prev = 1.0;
  for (std::size_t sub : {1, 2, 4, 8}) {
    TrainConfig tc;
    tc.substeps = sub;
    const double loss = training_loss(phys, load_config(phys), tc, synthetic_train());
    CHECK(loss < 1e-4);
    CHECK(loss < 0.5 * prev);
    CHECK(loss > 1e-10);
    prev = loss;
  }
}

TEST_CASE("training is deterministic and keeps the best parameters") {
  const FinnConfig model = synthetic_model();
  const ParamStore init = finn_init(model, 2);
  const TrainResult a = train_finn(init, model, short_run(6), synthetic_train());
  const TrainResult b = train_finn(init, model, short_run(6), synthetic_train());
  REQUIRE(a.history.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(a.history[k].loss == b.history[k].loss);
    CHECK(std::isfinite(a.history[k].loss));
  }
  CHECK(a.final_params == b.final_params);
  CHECK(a.best_loss <= a.history.front().loss);
  CHECK(a.best_loss == a.history[a.best_epoch].loss);

  // re-evaluating the stored best parameters reproduces the recorded loss
  testing::TempDir dir;
  io::save_checkpoint(dir / "best.ckpt", a.best_params);
  const ParamStore back = io::load_checkpoint(dir / "best.ckpt");
  const double again = training_loss(back, load_config(back), short_run(6), synthetic_train());
  CHECK(std::abs(again - a.best_loss) <= 1e-12 * std::max(1.0, a.best_loss));
  CHECK(std::abs(training_loss(init, model, short_run(6), synthetic_train()) - a.history[0].loss) <= 1e-18);
}

TEST_CASE("training configuration errors") {
  const FinnConfig model = synthetic_model();
  const ParamStore init = finn_init(model, 0);
  TrainConfig tc = short_run(1);
  tc.window = {0, 5000};
  CHECK_THROWS_AS(train_finn(init, model, tc, synthetic_train()), ConfigError);
  tc = short_run(1);
  tc.integrator = Integrator::adaptive;
  CHECK_THROWS_AS(train_finn(init, model, tc, synthetic_train()), ConfigError);
  tc = short_run(1);
  tc.lr = 0.0;
  CHECK_THROWS_AS(train_finn(init, model, tc, synthetic_train()), ConfigError);
}

TEST_CASE("repeated divergence aborts with the epoch") {
  const FinnConfig model = synthetic_model();
  ParamStore bad = finn_init(model, 0);
  bad.at("stencil").values = {2.0, 1.0};
  std::vector<std::string> warnings;
  TrainConfig tc = short_run(5);
  tc.on_warning = [&](const std::string& w) { warnings.push_back(w); };
  try {
    train_finn(bad, model, tc, synthetic_train());
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    CHECK(e.epoch() == 1);
  }
  CHECK(warnings.size() == 1);
}

TEST_CASE("breakthrough-only training keeps the interior bounded") {
  const FinnConfig model = synthetic_model();
  TrainConfig tc;
  tc.epochs = 30;
  // the front must reach the outlet inside the window, else nothing constrains the stencil
  tc.window = {0, 501};
  tc.mask = BreakthroughOnly{};
  const TrainResult r = train_finn(finn_init(model, 0), model, tc, synthetic_train());
  RolloutOptions o;
  o.integrator = Integrator::adaptive;
  const Dataset pred = rollout(r.best_params, model, synthetic_train().at(0), synthetic_train().t, o);
  for (const auto& row : pred.c)
    for (double v : row) {
      CHECK(std::isfinite(v));
      CHECK(v >= -0.1);
      CHECK(v <= 1.5);
    }
}

TEST_CASE("evaluate frozen physics") {
  const FinnConfig model = synthetic_model();
  const ParamStore phys = finn_physics(model, io::preset("synthetic-train").soil);
  const MseReport r = evaluate(phys, load_config(phys), synthetic_train(), synthetic_test());
  CHECK(r.training < 1e-8);
  CHECK(r.extrapolated < 1e-8);
  CHECK(r.unseen < 1e-8);
  CHECK_THROWS_AS(evaluate(phys, model, synthetic_train(), synthetic_test(), EvalOptions{5000, {}}),
                  ConfigError);
}

TEST_CASE("window statistics") {
  const WindowStats one = window_stats({3.0});
  CHECK(one.mean == 3.0);
  CHECK(one.std == 0.0);
  const WindowStats s = window_stats({1.0, 2.0, 3.0, 6.0});
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.std == doctest::Approx(std::sqrt(14.0 / 3.0)));
  CHECK(s.min == 1.0);
  CHECK(s.max == 6.0);
}

TEST_CASE("experiment runner") {
  ExperimentConfig cfg;
  cfg.model = synthetic_model();
  cfg.train = short_run(2);
  cfg.n_seeds = 1;
  cfg.threads = 1;
  const ExperimentReport one = run_experiment(cfg, synthetic_train(), synthetic_test());
  REQUIRE(one.survivors == 1);
  CHECK(one.unseen.mean == one.seeds[0].mse.unseen);
  CHECK(one.unseen.std == 0.0);

  testing::TempDir dir;
  cfg.n_seeds = 2;
  cfg.threads = 2;
  cfg.out_dir = dir.path();
  const ExperimentReport a = run_experiment(cfg, synthetic_train(), synthetic_test());
  cfg.out_dir.reset();
  const ExperimentReport b = run_experiment(cfg, synthetic_train(), synthetic_test());
  REQUIRE(a.seeds.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.seeds[i].seed == i);
    CHECK(a.seeds[i].mse.unseen == b.seeds[i].mse.unseen);
    CHECK(a.seeds[i].best_loss == b.seeds[i].best_loss);
  }
  CHECK(std::filesystem::exists(dir / "seed_1" / "model.ckpt"));
  CHECK(std::filesystem::exists(dir / "seed_0" / "history.csv"));
  CHECK(experiment_csv(a).find("mean") != std::string::npos);
  CHECK(!experiment_table(a).empty());
  CHECK(history_csv({EpochRecord{0, 1.5, 0.1, 1e-3, 2.0}}).find("1.5") != std::string::npos);
}
