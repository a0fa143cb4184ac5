#include "finn/train/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "finn/errors.hpp"
#include "finn/io/checkpoint.hpp"
#include "finn/io/kv.hpp"

namespace finn {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const Dataset& train,
                    const Dataset& test) {
  SeedResult r;
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    if (cfg.on_progress) {
      tc.on_epoch = [&](const EpochRecord& e) {
        cfg.on_progress(seed, "epoch " + std::to_string(e.epoch) + " loss " + sci(e.loss));
      };
      tc.on_warning = [&](const std::string& w) { cfg.on_progress(seed, "warning: " + w); };
    }
    const FinnConfig model = with_dataset_setup(cfg.model, train.meta);
    const ParamStore init = finn_init(model, seed);
    TrainResult res = train_finn(init, model, tc, train);
    r.best_loss = res.best_loss;
    r.epochs = res.history.size();
    r.mse = evaluate(res.best_params, model, train, test, cfg.eval);
    if (!std::isfinite(r.mse.training) || !std::isfinite(r.mse.extrapolated) || !std::isfinite(r.mse.unseen))
      throw TrainingError("non-finite evaluation", r.epochs);
    if (cfg.out_dir) {
      const auto dir = *cfg.out_dir / ("seed_" + std::to_string(seed));
      std::filesystem::create_directories(dir);
      io::save_checkpoint(dir / "model.ckpt", res.best_params);
      io::write_text(dir / "history.csv", history_csv(res.history));
    }
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

WindowStats window_stats(const std::vector<double>& v) {
  WindowStats s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  return s;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& train, const Dataset& test) {
  if (cfg.n_seeds == 0) throw ConfigError("experiment needs at least one seed");
  cfg.model.validate();

  ExperimentReport rep;
  rep.seeds.resize(cfg.n_seeds);
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.n_seeds);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cfg.n_seeds; k = next++)
      rep.seeds[k] = run_seed(cfg, cfg.first_seed + k, train, test);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> tr, ex, un;
  for (const auto& s : rep.seeds) {
    if (!s.ok) {
      rep.warnings.push_back("seed " + std::to_string(s.seed) + " failed: " + s.error);
      continue;
    }
    tr.push_back(s.mse.training);
    ex.push_back(s.mse.extrapolated);
    un.push_back(s.mse.unseen);
  }
  rep.survivors = tr.size();
  if (rep.survivors == 0) throw TrainingError("every seed failed", 0);
  if (rep.survivors < cfg.n_seeds)
    rep.warnings.push_back("statistics over " + std::to_string(rep.survivors) + " of " +
                           std::to_string(cfg.n_seeds) + " seeds");
  rep.training = window_stats(tr);
  rep.extrapolated = window_stats(ex);
  rep.unseen = window_stats(un);
  return rep;
}

std::string history_csv(const std::vector<EpochRecord>& h) {
  std::string out = "epoch,loss,lr,grad_norm,seconds\n";
  for (const auto& e : h)
    out += std::to_string(e.epoch) + "," + io::format_double(e.loss) + "," + io::format_double(e.lr) + "," +
           io::format_double(e.grad_norm) + "," + io::format_double(e.seconds) + "\n";
  return out;
}

std::string experiment_csv(const ExperimentReport& r) {
  std::string out = "seed,status,training,extrapolated,unseen,best_loss,epochs,seconds\n";
  for (const auto& s : r.seeds) {
    out += std::to_string(s.seed) + "," + (s.ok ? "ok" : "failed") + ",";
    if (s.ok)
      out += io::format_double(s.mse.training) + "," + io::format_double(s.mse.extrapolated) + "," +
             io::format_double(s.mse.unseen) + "," + io::format_double(s.best_loss);
    else
      out += "nan,nan,nan,nan";
    out += "," + std::to_string(s.epochs) + "," + io::format_double(s.seconds) + "\n";
  }
  out += "mean,," + io::format_double(r.training.mean) + "," + io::format_double(r.extrapolated.mean) + "," +
         io::format_double(r.unseen.mean) + ",,,\n";
  out += "std,," + io::format_double(r.training.std) + "," + io::format_double(r.extrapolated.std) + "," +
         io::format_double(r.unseen.std) + ",,,\n";
  return out;
}

std::string experiment_table(const ExperimentReport& r) {
  auto cell = [](const WindowStats& w) { return "(" + sci(w.mean) + " +/- " + sci(w.std) + ")"; };
  std::string out;
  out += "model  training                    extrapolated                unseen\n";
  out += "FINN   " + cell(r.training) + "  " + cell(r.extrapolated) + "  " + cell(r.unseen) + "\n";
  out += "seeds ok: " + std::to_string(r.survivors) + "/" + std::to_string(r.seeds.size()) + "\n";
  return out;
}

}  // namespace finn
