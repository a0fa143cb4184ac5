#include "finn/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "finn/autodiff/adam.hpp"
#include "finn/errors.hpp"

namespace finn {
namespace {

double source_level(const FinnConfig& model, const Dataset& data) {
  if (const auto* d = std::get_if<Dirichlet>(&model.left); d && d->value > 0.0) return d->value;
  if (const auto* d = std::get_if<Dirichlet>(&model.right); d && d->value > 0.0) return d->value;
  double m = 0.0;
  for (const auto& row : data.c)
    for (double v : row) m = std::max(m, std::abs(v));
  return m > 0.0 ? m : 1.0;
}

void check_window(const TrainConfig& cfg, const Dataset& data) {
  if (cfg.window.begin >= cfg.window.end || cfg.window.end > data.steps())
    throw ConfigError("training window [" + std::to_string(cfg.window.begin) + ", " +
                      std::to_string(cfg.window.end) + ") outside the dataset (" +
                      std::to_string(data.steps()) + " steps)");
  if (cfg.window.end - cfg.window.begin < 2) throw ConfigError("training window needs two rows");
  if (cfg.integrator == Integrator::adaptive)
    throw ConfigError("training needs a fixed-step integrator (euler or rk4)");
}

struct EpochEval {
  ad::Tape tape;
  double loss = 0.0;
  std::vector<double> grad;
};

// Forward rollout + loss, and the gradient when requested.
void run_epoch(EpochEval& ev, const ParamStore& params, const FinnConfig& model,
               const TrainConfig& cfg, const Dataset& target, double bound, bool with_grad) {
  ad::Tape& tape = ev.tape;
  tape.truncate(0);
  const BoundParams bound_params(tape, params);
  const FinnVars vars = bind_finn(bound_params, params, model);

  const std::size_t b = cfg.window.begin;
  std::vector<double> u0 = target.c[b];
  u0.insert(u0.end(), target.c_t[b].begin(), target.c_t[b].end());
  const ad::Var x0 = tape.constant(u0);

  RolloutOptions ro;
  ro.integrator = cfg.integrator;
  ro.substeps = cfg.substeps;
  ro.divergence_bound = bound;
  ro.truncate_every = cfg.truncate_every;
  const std::span<const double> t(target.t.data() + b, cfg.window.end - b);
  const auto traj = rollout_tape(vars, model, x0, t, ro);
  const ad::Var loss = mse_loss(traj, target, cfg.mask, b);
  ev.loss = loss.scalar();
  if (with_grad && std::isfinite(ev.loss)) ev.grad = bound_params.flat_gradient(tape.backward(loss));
}

void clamp_nonnegative(ParamStore& p, const char* name) {
  if (auto* t = p.find(name); t && t->trainable)
    for (double& v : t->values) v = std::max(v, 0.0);
}

}  // namespace

FinnConfig with_dataset_setup(FinnConfig model, const DatasetMeta& meta) {
  model.grid = meta.grid;
  model.left = meta.left;
  model.right = meta.right;
  return model;
}

double training_loss(const ParamStore& params, const FinnConfig& model, const TrainConfig& cfg,
                     const Dataset& data) {
  data.validate();
  check_window(cfg, data);
  const Dataset target = add_noise(data, cfg.noise_sigma, cfg.seed);
  EpochEval ev;
  run_epoch(ev, params, model, cfg, target, 0.0, false);
  return ev.loss;
}

TrainResult train_finn(const ParamStore& init, const FinnConfig& model, const TrainConfig& cfg,
                       const Dataset& data) {
  model.validate();
  data.validate();
  check_window(cfg, data);
  if (data.volumes() != model.grid.n_volumes)
    throw ConfigError("dataset has " + std::to_string(data.volumes()) + " volumes, model expects " +
                      std::to_string(model.grid.n_volumes));
  if (!(cfg.lr > 0.0)) throw ConfigError("learning rate must be positive");

  const Dataset target = add_noise(data, cfg.noise_sigma, cfg.seed);
  const double bound = cfg.divergence_factor > 0.0 ? cfg.divergence_factor * source_level(model, target) : 0.0;

  TrainResult res;
  res.final_params = init;
  res.best_params = init;
  res.best_loss = std::numeric_limits<double>::infinity();

  ParamStore& params = res.final_params;
  ParamStore previous = params;
  AdamState adam = AdamState::fresh(params.trainable_count(), AdamHyper{cfg.lr});
  bool halved = false;
  EpochEval ev;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run_epoch(ev, params, model, cfg, target, bound, true);
    } catch (const DivergenceError& e) {
      if (halved) throw TrainingError(std::string("rollout diverged: ") + e.what(), epoch);
      halved = true;
      adam.hyper.lr *= 0.5;
      params = previous;
      ++res.aborted_epochs;
      if (cfg.on_warning)
        cfg.on_warning("epoch " + std::to_string(epoch) + " aborted (" + e.what() +
                       "); learning rate halved to " + std::to_string(adam.hyper.lr));
      continue;
    }
    if (!std::isfinite(ev.loss)) throw TrainingError("loss is not finite", epoch);

    if (ev.loss < res.best_loss) {
      res.best_loss = ev.loss;
      res.best_epoch = epoch;
      res.best_params = params;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = ev.loss;
    rec.lr = adam.hyper.lr;
    if (cfg.clip)
      rec.grad_norm = clip_global_norm(ev.grad, *cfg.clip);
    else
      rec.grad_norm = std::sqrt(simd::active().dot(ev.grad, ev.grad));

    previous = params;
    std::vector<double> flat = params.flatten_trainable();
    adam_step(flat, ev.grad, adam);
    params.assign_trainable(flat);
    clamp_nonnegative(params, "d_ct.raw");

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.history.push_back(rec);
    if (cfg.on_epoch) cfg.on_epoch(rec);
  }
  if (res.history.empty()) res.best_loss = 0.0;
  return res;
}

MseReport evaluate(const ParamStore& params, const FinnConfig& model, const Dataset& train,
                   const Dataset& test, const EvalOptions& opt) {
  train.validate();
  test.validate();
  if (opt.train_end < 2 || opt.train_end > train.steps())
    throw ConfigError("evaluation split outside the training dataset");

  const FinnConfig train_model = with_dataset_setup(model, train.meta);
  const FinnConfig test_model = with_dataset_setup(model, test.meta);
  const Dataset pred_train = rollout(params, train_model, train.at(0), train.t, opt.rollout);
  const Dataset pred_test = rollout(params, test_model, test.at(0), test.t, opt.rollout);

  MseReport r;
  r.training = mse(pred_train, train, FullField{}, {0, opt.train_end});
  r.extrapolated = opt.train_end < train.steps()
                       ? mse(pred_train, train, FullField{}, {opt.train_end - 1, train.steps()})
                       : 0.0;
  r.unseen = mse(pred_test, test, FullField{});
  return r;
}

}  // namespace finn
