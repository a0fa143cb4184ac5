#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "finn/cli/cli.hpp"
#include "finn/io/checkpoint.hpp"
#include "finn/io/dataset_io.hpp"
#include "finn/io/kv.hpp"
#include "finn/io/presets.hpp"
#include "finn/model/finn.hpp"
#include "support.hpp"

using namespace finn;
using finn::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run finn_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "finn");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

double report_value(const std::filesystem::path& csv, const std::string& window) {
  std::istringstream in(io::read_text(csv));
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(window + ",", 0) == 0) return std::stod(line.substr(window.size() + 1));
  FAIL("window missing from report: " << window);
  return 0.0;
}

}  // namespace

TEST_CASE("generate writes the synthetic dataset") {
  TempDir dir;
  const Run r = finn_cli({"generate", "--preset", "synthetic-train", "--out", (dir / "train").string()});
  REQUIRE(r.code == 0);
  const Dataset d = io::read_dataset(dir / "train");
  CHECK(d.steps() == 2000);
  CHECK(d.volumes() == 26);
  CHECK(io::parse_csv(io::read_text(dir / "train" / "t.csv"), "t").size() == 2000);
  const io::KvDoc m = io::read_kv(dir / "train" / "manifest.txt");
  CHECK(m.text("command") == "generate");

  // reproducible from the written scenario file
  const Run again = finn_cli({"generate", "--config", (dir / "train" / "scenario.kv").string(), "--out",
                         (dir / "again").string()});
  REQUIRE(again.code == 0);
  CHECK(io::read_dataset(dir / "again").c == d.c);
}

TEST_CASE("train with zero epochs stores the initialization and evaluate scores frozen physics") {
  TempDir dir;
  const auto train = (dir / "train").string(), test = (dir / "test").string();
  REQUIRE(finn_cli({"generate", "--preset", "synthetic-train", "--out", train}).code == 0);
  REQUIRE(finn_cli({"generate", "--preset", "synthetic-test", "--out", test}).code == 0);

  const Run t0 = finn_cli({"train", "--data", train, "--out", (dir / "m0").string(), "--epochs", "0", "--seed", "3"});
  REQUIRE(t0.code == 0);
  const ParamStore ck = io::load_checkpoint(dir / "m0" / "model.ckpt");
  CHECK(ck == finn_init(load_config(ck), 3));
  CHECK(std::filesystem::exists(dir / "m0" / "history.csv"));
  CHECK(io::read_kv(dir / "m0" / "manifest.txt").text("command") == "train");

  const Run phys = finn_cli({"train", "--data", train, "--out", (dir / "phys").string(), "--epochs", "0", "--init", "physics"});
  REQUIRE(phys.code == 0);
  const Run ev = finn_cli({"evaluate", "--ckpt", (dir / "phys" / "model.ckpt").string(), "--train", train,
                      "--test", test, "--out", (dir / "ev").string()});
  REQUIRE(ev.code == 0);
  for (const char* w : {"training", "extrapolated", "unseen"}) CHECK(report_value(dir / "ev" / "report.csv", w) < 1e-8);
  CHECK(ev.out.find("unseen") != std::string::npos);

  const Run ex = finn_cli({"extract-retardation", "--ckpt", (dir / "phys" / "model.ckpt").string(), "--out",
                      (dir / "r.csv").string(), "--points", "5", "--c-min", "0.2", "--c-max", "1.0"});
  REQUIRE(ex.code == 0);
  const auto rows = io::parse_csv(io::read_text(dir / "r.csv").substr(4), "r.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows.back()[1] == doctest::Approx(3.1754).epsilon(1e-3));
  CHECK(std::filesystem::exists(dir / "r.csv.manifest.txt"));

  const Run pr = finn_cli({"predict", "--ckpt", (dir / "phys" / "model.ckpt").string(), "--preset", "synthetic-test",
                      "--out", (dir / "pred").string(), "--t-end", "500"});
  REQUIRE(pr.code == 0);
  const Dataset pd = io::read_dataset(dir / "pred");
  CHECK(pd.steps() == 100);
  const Dataset td = io::read_dataset(test);
  for (std::size_t i = 0; i < 26; ++i) CHECK(pd.c[99][i] == doctest::Approx(td.c[99][i]).epsilon(1e-5));
}

TEST_CASE("short training run and experiment") {
  TempDir dir;
  const auto train = (dir / "train").string();
  REQUIRE(finn_cli({"generate", "--preset", "synthetic-train", "--out", train}).code == 0);
  const Run t = finn_cli({"train", "--data", train, "--out", (dir / "m").string(), "--epochs", "2",
                     "--window-end", "21", "--svg", (dir / "loss.svg").string()});
  REQUIRE(t.code == 0);
  CHECK(std::filesystem::exists(dir / "m" / "final.ckpt"));
  CHECK(std::filesystem::exists(dir / "loss.svg"));

  const Run e = finn_cli({"experiment", "--preset", "synthetic", "--seeds", "2", "--threads", "1", "--epochs", "1",
                     "--window-end", "21", "--out", (dir / "exp").string()});
  REQUIRE(e.code == 0);
  CHECK(std::filesystem::exists(dir / "exp" / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "exp" / "seed_1" / "model.ckpt"));
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(finn_cli({}).code == 1);
  CHECK(finn_cli({"--help"}).code == 0);
  CHECK(finn_cli({"frobnicate"}).code == 1);
  CHECK(finn_cli({"generate", "--out", (dir / "x").string(), "--bogus"}).code == 1);
  CHECK(finn_cli({"generate", "--preset", "nope", "--out", (dir / "x").string()}).code == 1);
  CHECK(finn_cli({"train", "--data", (dir / "missing").string(), "--out", (dir / "o").string()}).code == 2);

  io::write_text(dir / "bad.ckpt", "garbage");
  const Run bad = finn_cli({"extract-retardation", "--ckpt", (dir / "bad.ckpt").string(), "--out", (dir / "r.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("bad.ckpt") != std::string::npos);

  // a model that blows up is a numerical failure
  FinnConfig cfg = io::finn_config_for(io::preset("synthetic-train"));
  ParamStore p = finn_init(cfg, 0);
  p.at("stencil").values = {3.0, 1.0};
  io::save_checkpoint(dir / "boom.ckpt", p);
  const Run boom = finn_cli({"predict", "--ckpt", (dir / "boom.ckpt").string(), "--preset", "synthetic-train",
                        "--out", (dir / "boom").string(), "--integrator", "rk4"});
  CHECK(boom.code == 3);
}
