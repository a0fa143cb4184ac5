#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "finn/autodiff/param_store.hpp"
#include "finn/dataset.hpp"
#include "finn/model/finn.hpp"
#include "finn/train/losses.hpp"

namespace finn {

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double seconds = 0.0;
  double lr = 0.0;
  double grad_norm = 0.0;
};

struct TrainConfig {
  std::size_t epochs = 200;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double noise_sigma = 1e-5;
  /// Rows 0..500 inclusive.
  TimeWindow window{0, 501};
  LossMask mask = FullField{};
  Integrator integrator = Integrator::rk4;
  std::size_t substeps = 1;
  /// Global-norm gradient clip.
  std::optional<double> clip;
  /// Backpropagation window in steps (0: through the whole rollout).
  std::size_t truncate_every = 0;
  /// An epoch whose rollout reaches |u| > factor * c_s is aborted.
  double divergence_factor = 10.0;
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(const std::string&)> on_warning;
};

struct TrainResult {
  ParamStore final_params;
  ParamStore best_params;
  std::vector<EpochRecord> history;
  double best_loss = 0.0;
  std::size_t best_epoch = 0;
  std::size_t aborted_epochs = 0;
};

/// Closed-loop training from the (noisy) initial condition of `data`. Each
/// epoch is one rollout over the window, masked MSE, backward, ADAM step.
/// Throws TrainingError when a rollout diverges after the learning rate was
/// already halved once, or the loss is not finite.
TrainResult train_finn(const ParamStore& init, const FinnConfig& model, const TrainConfig& config,
                       const Dataset& data);

/// The epoch loss `train_finn` would record for `params` (same noise draw,
/// window, mask and integrator).
double training_loss(const ParamStore& params, const FinnConfig& model, const TrainConfig& config,
                     const Dataset& data);

struct MseReport {
  double training = 0.0;
  double extrapolated = 0.0;
  double unseen = 0.0;
};

struct EvalOptions {
  /// Rows up to train_end (exclusive) form the training window; the rest of
  /// the same rollout is the extrapolation window.
  std::size_t train_end = 501;
  RolloutOptions rollout{Integrator::adaptive};
};

/// Three-window MSE: one rollout under the training boundary conditions
/// compared with `train` on [0, train_end) and [train_end - 1, T), and one
/// rollout under the test boundary conditions against all of `test`.
MseReport evaluate(const ParamStore& params, const FinnConfig& model, const Dataset& train,
                   const Dataset& test, const EvalOptions& options = {});

/// `model` with grid and boundary conditions taken from a dataset.
FinnConfig with_dataset_setup(FinnConfig model, const DatasetMeta& meta);

}  // namespace finn
