#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finn/train/trainer.hpp"

namespace finn {

struct ExperimentConfig {
  FinnConfig model;
  TrainConfig train;
  EvalOptions eval;
  std::size_t n_seeds = 10;
  std::uint64_t first_seed = 0;
  /// Concurrent seed runs; 0 uses the hardware concurrency.
  std::size_t threads = 0;
  /// Per-seed checkpoints and histories go to <out_dir>/seed_<k>/.
  std::optional<std::filesystem::path> out_dir;
  std::function<void(std::uint64_t seed, const std::string& line)> on_progress;
};

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  MseReport mse;
  double best_loss = 0.0;
  std::size_t epochs = 0;
  double seconds = 0.0;
};

struct WindowStats {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentReport {
  std::vector<SeedResult> seeds;
  WindowStats training;
  WindowStats extrapolated;
  WindowStats unseen;
  std::size_t survivors = 0;
  std::vector<std::string> warnings;
};

/// Mean and sample standard deviation (0 for a single value).
WindowStats window_stats(const std::vector<double>& values);

/// Independent train + evaluate runs for seeds first_seed .. first_seed + n - 1.
/// Failed seeds are recorded and excluded from the statistics.
ExperimentReport run_experiment(const ExperimentConfig& config, const Dataset& train,
                                const Dataset& test);

std::string history_csv(const std::vector<EpochRecord>& history);
/// Per-seed rows followed by mean/std rows.
std::string experiment_csv(const ExperimentReport& report);
/// Plain-text table shaped like a results-table row.
std::string experiment_table(const ExperimentReport& report);

}  // namespace finn
