#include "finn/cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>

#include "finn/errors.hpp"
#include "finn/fvm/retardation.hpp"
#include "finn/io/checkpoint.hpp"
#include "finn/io/dataset_io.hpp"
#include "finn/io/kv.hpp"
#include "finn/io/observables.hpp"
#include "finn/io/presets.hpp"
#include "finn/io/svg.hpp"
#include "finn/simd/kernels.hpp"
#include "finn/train/experiment.hpp"

namespace finn::cli {
namespace {

namespace fs = std::filesystem;

enum class Level { quiet, info, debug };

struct Log {
  Level level = Level::info;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  void info(const std::string& s) const {
    if (level != Level::quiet) *out << s << "\n";
  }
  void debug(const std::string& s) const {
    if (level == Level::debug) *out << s << "\n";
  }
  void warn(const std::string& s) const {
    if (level != Level::quiet) *err << "warning: " << s << "\n";
  }
};

Level level_from_env() {
  const char* v = std::getenv("FINN_LOG");
  if (!v) return Level::info;
  const std::string s(v);
  if (s == "quiet") return Level::quiet;
  if (s == "debug") return Level::debug;
  if (s == "info" || s.empty()) return Level::info;
  throw ConfigError("FINN_LOG must be quiet, info or debug (got '" + s + "')");
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

// Flag values shared by the model-building subcommands.
struct ModelFlags {
  std::optional<double> known_de;
  std::optional<double> d_unit;
  double ct_unit = 1e-3;
  double ct_init = 0.1;
  double stencil_noise = 0.1;
  std::optional<double> c_max;
  std::optional<double> porosity;
  std::string init = "random";
};

struct Options {
  // generate / predict
  std::string preset;
  std::string config;
  std::string out;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> t_end;
  std::optional<double> c_s;
  std::string svg;
  // train
  std::string data;
  std::size_t epochs = 200;
  std::string mask = "full";
  double lr = 1e-3;
  double train_noise = 1e-5;
  std::size_t window_end = 501;
  std::optional<double> clip;
  std::size_t truncate = 0;
  std::string integrator = "rk4";
  std::size_t substeps = 1;
  ModelFlags model;
  // predict / evaluate / extract
  std::string ckpt;
  std::string train_dir;
  std::string test_dir;
  std::string eval_integrator = "adaptive";
  double c_min = 0.01;
  double c_max_curve = 1.0;
  std::size_t points = 100;
  // experiment
  std::size_t seeds = 10;
  std::uint64_t first_seed = 0;
  std::size_t threads = 0;
};

io::ScenarioConfig scenario_from(const Options& o) {
  if (o.preset.empty() == o.config.empty()) throw ConfigError("give exactly one of --preset or --config");
  io::ScenarioConfig s = o.preset.empty() ? io::scenario_from_kv(io::read_kv(o.config)) : io::preset(o.preset);
  if (o.c_s) {
    s.c_s = *o.c_s;
    s.left = Dirichlet{*o.c_s};
  }
  if (o.t_end) s.t_end = *o.t_end;
  s.validate();
  return s;
}

DatasetMeta meta_from(const io::ScenarioConfig& s) {
  DatasetMeta m;
  m.grid = s.grid;
  m.soil = s.soil;
  m.left = s.left;
  m.right = s.right;
  m.provenance = s.name;
  return m;
}

void write_manifest(const fs::path& path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  io::KvDoc d;
  d.set("command", command);
  d.set("simd", std::string(simd::isa_name(simd::active().isa)));
  for (const auto& [k, v] : entries) d.set("args." + k, v);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_kv(path, d);
}

std::string opt_str(const std::optional<double>& v) { return v ? io::format_double(*v) : "none"; }

FinnConfig model_config(const DatasetMeta& meta, const ModelFlags& f) {
  FinnConfig c;
  c.grid = meta.grid;
  c.left = meta.left;
  c.right = meta.right;
  if (f.porosity)
    c.porosity = *f.porosity;
  else if (meta.soil)
    c.porosity = meta.soil->phi;
  double c_s = 1.0;
  if (const auto* d = std::get_if<Dirichlet>(&meta.left); d && d->value > 0.0) c_s = d->value;
  c.c_max = f.c_max.value_or(2.0 * c_s);
  c.known_de = f.known_de;
  c.d_unit = f.d_unit.value_or(f.known_de.value_or(2e-4));
  c.ct_unit = f.ct_unit;
  c.ct_init = f.ct_init;
  c.stencil_noise = f.stencil_noise;
  return c;
}

void add_model_flags(CLI::App* sub, ModelFlags& f) {
  sub->add_option("--known-de", f.known_de, "Known effective diffusion coefficient (experimental mode)");
  sub->add_option("--d-unit", f.d_unit, "Upper unit of the learned D_c (default 2e-4, or known D_e)");
  sub->add_option("--ct-unit", f.ct_unit, "Unit of the learned D_ct scalar");
  sub->add_option("--ct-init", f.ct_init, "Initial raw D_ct value");
  sub->add_option("--stencil-noise", f.stencil_noise, "Half-width of the stencil init noise");
  sub->add_option("--c-max", f.c_max, "Upper clamp of the network input (default 2 c_s)");
  sub->add_option("--porosity", f.porosity, "Porosity when the dataset carries no soil block");
  sub->add_option("--init", f.init, "random | physics")->check(CLI::IsMember({"random", "physics"}));
}

std::vector<std::pair<std::string, std::string>> model_manifest(const ModelFlags& f) {
  return {{"known_de", opt_str(f.known_de)},       {"d_unit", opt_str(f.d_unit)},
          {"ct_unit", io::format_double(f.ct_unit)}, {"ct_init", io::format_double(f.ct_init)},
          {"stencil_noise", io::format_double(f.stencil_noise)}, {"c_max", opt_str(f.c_max)},
          {"porosity", opt_str(f.porosity)},       {"init", f.init}};
}

// ---------------------------------------------------------------- commands

int cmd_generate(const Options& o, const Log& log) {
  const io::ScenarioConfig s = scenario_from(o);
  Dataset d = io::generate_dataset(s);
  if (o.noise > 0.0) {
    d = add_noise(d, o.noise, o.seed);
    d.meta.provenance += "+noise";
  }
  const fs::path out(o.out);
  io::write_dataset(out, d);
  io::write_kv(out / "scenario.kv", io::scenario_to_kv(s));
  write_manifest(out / "manifest.txt", "generate",
                 {{"preset", o.preset.empty() ? "none" : o.preset},
                  {"config", o.config.empty() ? "none" : o.config},
                  {"out", o.out},
                  {"noise", io::format_double(o.noise)},
                  {"seed", std::to_string(o.seed)},
                  {"t_end", opt_str(o.t_end)},
                  {"c_s", opt_str(o.c_s)}});
  if (!o.svg.empty()) {
    const auto bt = io::extract_breakthrough(d);
    io::write_svg(o.svg, io::svg_line_chart("breakthrough curve (" + s.name + ")", "t [days]",
                                            "c at x = L [kg/m^3]", {{"c", bt.t, bt.value, false}}));
  }
  log.info("wrote " + std::to_string(d.steps()) + " x " + std::to_string(d.volumes()) + " dataset to " + o.out);
  return kOk;
}

int cmd_train(const Options& o, const Log& log) {
  const Dataset data = io::read_dataset(o.data);
  const FinnConfig model = model_config(data.meta, o.model);
  ParamStore init;
  if (o.model.init == "physics") {
    if (!data.meta.soil) throw ConfigError("--init physics needs soil parameters in the dataset meta");
    init = finn_physics(model, *data.meta.soil);
  } else {
    init = finn_init(model, o.seed);
  }
  const FinnConfig used = load_config(init);

  TrainConfig tc;
  tc.epochs = o.epochs;
  tc.lr = o.lr;
  tc.seed = o.seed;
  tc.noise_sigma = o.train_noise;
  tc.window = {0, std::min(o.window_end, data.steps())};
  tc.mask = parse_mask(o.mask);
  tc.integrator = parse_integrator(o.integrator);
  tc.substeps = o.substeps;
  tc.clip = o.clip;
  tc.truncate_every = o.truncate;
  tc.on_epoch = [&](const EpochRecord& e) {
    log.info("epoch " + std::to_string(e.epoch) + " loss " + sci(e.loss) + " time " +
             std::to_string(e.seconds) + "s");
  };
  tc.on_warning = [&](const std::string& w) { log.warn(w); };

  log.debug("trainable parameters: " + std::to_string(init.trainable_count()));
  const TrainResult res = train_finn(init, used, tc, data);

  const fs::path out(o.out);
  fs::create_directories(out);
  io::save_checkpoint(out / "model.ckpt", res.best_params);
  io::save_checkpoint(out / "final.ckpt", res.final_params);
  io::write_text(out / "history.csv", history_csv(res.history));
  auto m = model_manifest(o.model);
  m.insert(m.end(), {{"data", o.data},
                     {"out", o.out},
                     {"epochs", std::to_string(o.epochs)},
                     {"seed", std::to_string(o.seed)},
                     {"mask", o.mask},
                     {"lr", io::format_double(o.lr)},
                     {"noise", io::format_double(o.train_noise)},
                     {"window_end", std::to_string(tc.window.end)},
                     {"clip", opt_str(o.clip)},
                     {"truncate", std::to_string(o.truncate)},
                     {"integrator", o.integrator},
                     {"substeps", std::to_string(o.substeps)}});
  m.push_back({"result.best_loss", io::format_double(res.best_loss)});
  m.push_back({"result.best_epoch", std::to_string(res.best_epoch)});
  write_manifest(out / "manifest.txt", "train", m);
  if (!o.svg.empty()) {
    io::SvgSeries s{"loss", {}, {}, false};
    for (const auto& e : res.history) {
      s.x.push_back(static_cast<double>(e.epoch));
      s.y.push_back(std::log10(e.loss));
    }
    io::write_svg(o.svg, io::svg_line_chart("training loss", "epoch", "log10 MSE", {s}));
  }
  if (!res.history.empty())
    log.info("best loss " + sci(res.best_loss) + " at epoch " + std::to_string(res.best_epoch));
  return kOk;
}

RolloutOptions eval_rollout(const std::string& name) {
  RolloutOptions r;
  r.integrator = parse_integrator(name);
  return r;
}

int cmd_predict(const Options& o, const Log& log) {
  const ParamStore params = io::load_checkpoint(o.ckpt);
  const io::ScenarioConfig s = scenario_from(o);
  const FinnConfig model = with_dataset_setup(load_config(params), meta_from(s));
  const FieldPair zero{std::vector<double>(s.grid.n_volumes, 0.0), std::vector<double>(s.grid.n_volumes, 0.0)};
  Dataset d = rollout(params, model, zero, s.time_grid(), eval_rollout(o.eval_integrator));
  d.meta.soil = s.soil;
  d.meta.provenance = "finn:" + s.name;
  io::write_dataset(o.out, d);
  write_manifest(fs::path(o.out) / "manifest.txt", "predict",
                 {{"ckpt", o.ckpt},
                  {"preset", o.preset.empty() ? "none" : o.preset},
                  {"config", o.config.empty() ? "none" : o.config},
                  {"out", o.out},
                  {"t_end", opt_str(o.t_end)},
                  {"c_s", opt_str(o.c_s)},
                  {"integrator", o.eval_integrator}});
  if (!o.svg.empty()) {
    const auto bt = io::extract_breakthrough(d);
    io::write_svg(o.svg, io::svg_line_chart("predicted breakthrough (" + s.name + ")", "t [days]",
                                            "c at x = L [kg/m^3]", {{"FINN", bt.t, bt.value, false}}));
  }
  log.info("wrote prediction (" + std::to_string(d.steps()) + " steps) to " + o.out);
  return kOk;
}

int cmd_evaluate(const Options& o, const Log& log, std::ostream& out) {
  const ParamStore params = io::load_checkpoint(o.ckpt);
  const Dataset train = io::read_dataset(o.train_dir);
  const Dataset test = io::read_dataset(o.test_dir);
  EvalOptions eo;
  eo.train_end = std::min(o.window_end, train.steps());
  eo.rollout = eval_rollout(o.eval_integrator);
  const MseReport r = evaluate(params, load_config(params), train, test, eo);

  out << "window        MSE\n";
  out << "training      " << sci(r.training) << "\n";
  out << "extrapolated  " << sci(r.extrapolated) << "\n";
  out << "unseen        " << sci(r.unseen) << "\n";
  const fs::path dir(o.out.empty() ? "." : o.out);
  fs::create_directories(dir);
  io::write_text(dir / "report.csv", "window,mse\ntraining," + io::format_double(r.training) + "\nextrapolated," +
                                         io::format_double(r.extrapolated) + "\nunseen," +
                                         io::format_double(r.unseen) + "\n");
  write_manifest(dir / "manifest.txt", "evaluate",
                 {{"ckpt", o.ckpt},
                  {"train", o.train_dir},
                  {"test", o.test_dir},
                  {"out", dir.string()},
                  {"window_end", std::to_string(eo.train_end)},
                  {"integrator", o.eval_integrator}});
  log.debug("report written to " + (dir / "report.csv").string());
  return kOk;
}

int cmd_extract(const Options& o, const Log& log) {
  if (o.points < 2) throw ConfigError("--points must be at least 2");
  if (!(o.c_min < o.c_max_curve)) throw ConfigError("--c-min must be below --c-max");
  const ParamStore params = io::load_checkpoint(o.ckpt);
  const FinnConfig model = load_config(params);
  std::vector<double> c(o.points);
  for (std::size_t i = 0; i < o.points; ++i)
    c[i] = o.c_min + (o.c_max_curve - o.c_min) * static_cast<double>(i) / static_cast<double>(o.points - 1);
  const RetardationCurve curve = extract_retardation(params, model, c);
  if (curve.underflows > 0)
    log.warn(std::to_string(curve.underflows) + " points had D_c below 1e-12; reported as inf");

  std::string csv = "c,R\n";
  for (std::size_t i = 0; i < c.size(); ++i)
    csv += io::format_double(curve.c[i]) + "," + io::format_double(curve.r[i]) + "\n";
  const fs::path out(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  io::write_text(out, csv);
  auto manifest = out;
  manifest += ".manifest.txt";
  write_manifest(manifest, "extract-retardation",
                 {{"ckpt", o.ckpt},
                  {"out", o.out},
                  {"c_min", io::format_double(o.c_min)},
                  {"c_max", io::format_double(o.c_max_curve)},
                  {"points", std::to_string(o.points)}});
  if (!o.svg.empty())
    io::write_svg(o.svg, io::svg_line_chart("retardation factor", "c [kg/m^3]", "R",
                                            {{"FINN", curve.c, curve.r, false}}));
  log.info("D_e estimate " + sci(effective_de(params, model)) + "; curve written to " + o.out);
  return kOk;
}

int cmd_experiment(const Options& o, const Log& log, std::ostream& out) {
  if (o.preset != "synthetic") throw ConfigError("experiment supports --preset synthetic");
  const fs::path dir(o.out);
  fs::create_directories(dir);
  Dataset train, test;
  if (!o.train_dir.empty() && !o.test_dir.empty()) {
    train = io::read_dataset(o.train_dir);
    test = io::read_dataset(o.test_dir);
  } else {
    log.info("generating synthetic train/test data");
    train = io::generate_dataset(io::preset("synthetic-train"));
    test = io::generate_dataset(io::preset("synthetic-test"));
    io::write_dataset(dir / "data_train", train);
    io::write_dataset(dir / "data_test", test);
  }

  ExperimentConfig ec;
  ec.model = model_config(train.meta, o.model);
  ec.train.epochs = o.epochs;
  ec.train.lr = o.lr;
  ec.train.noise_sigma = o.train_noise;
  ec.train.window = {0, std::min(o.window_end, train.steps())};
  ec.train.mask = parse_mask(o.mask);
  ec.train.integrator = parse_integrator(o.integrator);
  ec.train.substeps = o.substeps;
  ec.train.clip = o.clip;
  ec.train.truncate_every = o.truncate;
  ec.eval.train_end = ec.train.window.end;
  ec.eval.rollout = eval_rollout(o.eval_integrator);
  ec.n_seeds = o.seeds;
  ec.first_seed = o.first_seed;
  ec.threads = o.threads;
  ec.out_dir = dir;
  std::mutex mu;
  ec.on_progress = [&](std::uint64_t seed, const std::string& line) {
    std::lock_guard lock(mu);
    log.debug("[seed " + std::to_string(seed) + "] " + line);
  };

  const ExperimentReport rep = run_experiment(ec, train, test);
  for (const auto& w : rep.warnings) log.warn(w);
  const std::string table = experiment_table(rep);
  out << table;
  io::write_text(dir / "summary.csv", experiment_csv(rep));
  io::write_text(dir / "summary.txt", table);
  auto m = model_manifest(o.model);
  m.insert(m.end(), {{"preset", o.preset},
                     {"seeds", std::to_string(o.seeds)},
                     {"first_seed", std::to_string(o.first_seed)},
                     {"threads", std::to_string(o.threads)},
                     {"out", o.out},
                     {"train", o.train_dir.empty() ? "generated" : o.train_dir},
                     {"test", o.test_dir.empty() ? "generated" : o.test_dir},
                     {"epochs", std::to_string(o.epochs)},
                     {"mask", o.mask},
                     {"lr", io::format_double(o.lr)},
                     {"noise", io::format_double(o.train_noise)},
                     {"window_end", std::to_string(o.window_end)},
                     {"clip", opt_str(o.clip)},
                     {"truncate", std::to_string(o.truncate)},
                     {"integrator", o.integrator},
                     {"substeps", std::to_string(o.substeps)},
                     {"eval_integrator", o.eval_integrator}});
  write_manifest(dir / "manifest.txt", "experiment", m);
  return rep.survivors == rep.seeds.size() ? kOk : kNumerical;
}

void add_training_flags(CLI::App* sub, Options& o) {
  sub->add_option("--epochs", o.epochs, "Training epochs");
  sub->add_option("--seed", o.seed, "Random seed (initialization and noise)");
  sub->add_option("--mask", o.mask, "Loss mask: full | breakthrough | profile")
      ->check(CLI::IsMember({"full", "breakthrough", "profile"}));
  sub->add_option("--lr", o.lr, "ADAM learning rate");
  sub->add_option("--noise", o.train_noise, "Gaussian noise sigma added to the training data");
  sub->add_option("--window-end", o.window_end, "Rows used for training (exclusive end)");
  sub->add_option("--clip", o.clip, "Global gradient-norm clip");
  sub->add_option("--truncate", o.truncate, "Backpropagation truncation window in steps");
  sub->add_option("--integrator", o.integrator, "euler | rk4")->check(CLI::IsMember({"euler", "rk4"}));
  sub->add_option("--substeps", o.substeps, "Integrator steps per data interval");
  add_model_flags(sub, o.model);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite volume neural network: simulate, train and evaluate", "finn"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Simulate a scenario into a dataset directory");
  gen->add_option("--preset", o.preset, "synthetic-train | synthetic-test | core1 | core2 | core2b");
  gen->add_option("--config", o.config, "Scenario key-value file");
  gen->add_option("--out", o.out, "Output directory")->required();
  gen->add_option("--noise", o.noise, "Gaussian noise sigma");
  gen->add_option("--seed", o.seed, "Noise seed");
  gen->add_option("--t-end", o.t_end, "Override the simulated time span [days]");
  gen->add_option("--c-s", o.c_s, "Override the top concentration");
  gen->add_option("--svg", o.svg, "Breakthrough chart output");

  auto* train = app.add_subcommand("train", "Train FINN on a dataset");
  train->add_option("--data", o.data, "Training dataset directory")->required();
  train->add_option("--out", o.out, "Output directory")->required();
  train->add_option("--svg", o.svg, "Loss chart output");
  add_training_flags(train, o);

  auto* predict = app.add_subcommand("predict", "Closed-loop rollout of a trained model");
  predict->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  predict->add_option("--preset", o.preset, "Scenario preset");
  predict->add_option("--config", o.config, "Scenario key-value file");
  predict->add_option("--out", o.out, "Output dataset directory")->required();
  predict->add_option("--t-end", o.t_end, "Rollout time span [days]");
  predict->add_option("--c-s", o.c_s, "Top concentration");
  predict->add_option("--integrator", o.eval_integrator, "adaptive | rk4 | euler")
      ->check(CLI::IsMember({"adaptive", "rk4", "euler"}));
  predict->add_option("--svg", o.svg, "Breakthrough chart output");

  auto* eval = app.add_subcommand("evaluate", "Training / extrapolated / unseen MSE");
  eval->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  eval->add_option("--train", o.train_dir, "Training dataset directory")->required();
  eval->add_option("--test", o.test_dir, "Test dataset directory")->required();
  eval->add_option("--out", o.out, "Directory for report.csv (default .)");
  eval->add_option("--window-end", o.window_end, "End of the training window (exclusive)");
  eval->add_option("--integrator", o.eval_integrator, "adaptive | rk4 | euler")
      ->check(CLI::IsMember({"adaptive", "rk4", "euler"}));

  auto* extract = app.add_subcommand("extract-retardation", "Learned R(c) curve");
  extract->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  extract->add_option("--out", o.out, "Output CSV")->required();
  extract->add_option("--c-min", o.c_min, "Lowest concentration");
  extract->add_option("--c-max", o.c_max_curve, "Highest concentration");
  extract->add_option("--points", o.points, "Number of points");
  extract->add_option("--svg", o.svg, "Curve chart output");

  auto* exp = app.add_subcommand("experiment", "Multi-seed train + evaluate");
  exp->add_option("--preset", o.preset, "synthetic")->required();
  exp->add_option("--seeds", o.seeds, "Number of seeds");
  exp->add_option("--first-seed", o.first_seed, "First seed");
  exp->add_option("--threads", o.threads, "Concurrent runs (0: all cores)");
  exp->add_option("--out", o.out, "Output directory")->required();
  exp->add_option("--train", o.train_dir, "Existing training dataset");
  exp->add_option("--test", o.test_dir, "Existing test dataset");
  exp->add_option("--eval-integrator", o.eval_integrator, "adaptive | rk4 | euler")
      ->check(CLI::IsMember({"adaptive", "rk4", "euler"}));
  add_training_flags(exp, o);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    Log log{level_from_env(), &out, &err};
    log.debug("simd kernels: " + std::string(simd::isa_name(simd::active().isa)));
    if (gen->parsed()) return cmd_generate(o, log);
    if (train->parsed()) return cmd_train(o, log);
    if (predict->parsed()) return cmd_predict(o, log);
    if (eval->parsed()) return cmd_evaluate(o, log, out);
    if (extract->parsed()) return cmd_extract(o, log);
    if (exp->parsed()) return cmd_experiment(o, log, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace finn::cli
