#include <cmath>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "finn/errors.hpp"
#include "finn/io/checkpoint.hpp"
#include "finn/io/dataset_io.hpp"
#include "finn/io/kv.hpp"
#include "finn/io/observables.hpp"
#include "finn/io/presets.hpp"
#include "finn/io/svg.hpp"
#include "finn/model/finn.hpp"
#include "support.hpp"

using namespace finn;
using finn::testing::TempDir;

namespace {

Dataset toy() {
  Dataset d;
  d.t = {0.0, 0.1};
  d.c = {{0.0, 1.0 / 3.0, 2.0}, {1e-300, -4.5, 0.1 + 0.2}};
  d.c_t = {{5.0, 6.0, 7.0}, {8.0, 9.0, std::nextafter(1.0, 2.0)}};
  d.meta.grid = Grid1D{3, 0.5, 1.5};
  d.meta.soil = SoilParams{5e-4, 0.29, 2880.0, 3.53e-4, 0.874};
  d.meta.left = Dirichlet{0.7};
  d.meta.right = Cauchy{1.01e-4};
  d.meta.provenance = "hand";
  return d;
}

void overwrite(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary | std::ios::trunc) << text;
}

}  // namespace

TEST_CASE("key-value documents") {
  io::KvDoc d;
  d.set("a.b", 0.1);
  d.set("name", "x y");
  d.set("n", std::size_t{26});
  const io::KvDoc back = io::KvDoc::parse(d.str());
  CHECK(back.number("a.b") == 0.1);
  CHECK(back.text("name") == "x y");
  CHECK(back.count("n") == 26);
  CHECK(back.entries() == d.entries());

  const io::KvDoc c = io::KvDoc::parse("# comment\n\n  k = 3 \n");
  CHECK(c.number("k") == 3.0);
  CHECK_THROWS_AS(c.text("missing"), FormatError);
  CHECK_THROWS_AS(io::KvDoc::parse("k = v").number("k"), FormatError);

  try {
    io::KvDoc::parse("a = 1\nno equals sign\n", "cfg");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(io::KvDoc::parse("a = 1\na = 2\n"), ParseError);
  CHECK_THROWS_AS(io::KvDoc::parse(" = 2\n"), ParseError);
  CHECK_THROWS_AS(io::KvDoc::parse("a b = 2\n"), ParseError);
}

TEST_CASE("double formatting round trips bitwise") {
  for (double v : finn::testing::uniform(200, -1e6, 1e6, 1)) CHECK(*io::parse_double(io::format_double(v)) == v);
  for (double v : {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0})
    CHECK(*io::parse_double(io::format_double(v)) == v);
  CHECK(!io::parse_double("1.0x"));
  CHECK(!io::parse_double(""));
}

TEST_CASE("csv parsing") {
  const auto rows = io::parse_csv("1,2,3\n4,5,6\n", "x.csv");
  CHECK(rows == std::vector<std::vector<double>>{{1, 2, 3}, {4, 5, 6}});
  CHECK(io::parse_csv(io::format_csv(rows), "y") == rows);
  try {
    io::parse_csv("1,2\n3,abc\n", "bad.csv");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);  // character column
  }
  try {
    io::parse_csv("1,2\n3\n", "ragged.csv");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("dataset round trip and corruption") {
  TempDir dir;
  const Dataset d = toy();
  io::write_dataset(dir / "ds", d);
  CHECK(io::read_dataset(dir / "ds") == d);

  Dataset no_soil = d;
  no_soil.meta.soil.reset();
  no_soil.meta.right = Neumann{0.0};
  io::write_dataset(dir / "ds2", no_soil);
  CHECK(io::read_dataset(dir / "ds2") == no_soil);

  overwrite(dir / "ds" / "c.csv", "1,2,3\n");
  CHECK_THROWS_AS(io::read_dataset(dir / "ds"), FormatError);
  io::write_dataset(dir / "ds", d);
  overwrite(dir / "ds" / "ct.csv", "1,2,3\n4,5\n");
  CHECK_THROWS_AS(io::read_dataset(dir / "ds"), ParseError);
  io::write_dataset(dir / "ds", d);
  overwrite(dir / "ds" / "t.csv", "0\n0\n");
  CHECK_THROWS_AS(io::read_dataset(dir / "ds"), FormatError);
  CHECK_THROWS_AS(io::read_dataset(dir / "nowhere"), FormatError);
}

TEST_CASE("checkpoint round trip") {
  TempDir dir;
  FinnConfig cfg;
  cfg.grid = Grid1D{26, 0.04, 1.0};
  const ParamStore p = finn_init(cfg, 7);
  io::save_checkpoint(dir / "m.ckpt", p);
  const ParamStore back = io::load_checkpoint(dir / "m.ckpt");
  CHECK(back == p);
  const MlpParams a = load_mlp(p, "d_c"), b = load_mlp(back, "d_c");
  for (double x : {0.0, 0.3, 1.9}) CHECK(mlp_forward(a, x) == mlp_forward(b, x));
  CHECK(!std::filesystem::exists(dir / "m.ckpt.tmp"));
}

TEST_CASE("checkpoint corruption is detected") {
  TempDir dir;
  ParamStore p;
  p.add("w", {2, 2}, {1, 2, 3, 4});
  p.add("frozen", {1}, {5}, false);
  io::save_checkpoint(dir / "m.ckpt", p);
  const std::string bytes = io::read_text(dir / "m.ckpt");

  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{12}, bytes.size() - 1}) {
    overwrite(dir / "t.ckpt", bytes.substr(0, cut));
    CHECK_THROWS_AS(io::load_checkpoint(dir / "t.ckpt"), FormatError);
  }
  std::string magic = bytes;
  magic[0] = 'X';
  overwrite(dir / "t.ckpt", magic);
  CHECK_THROWS_AS(io::load_checkpoint(dir / "t.ckpt"), FormatError);
  std::string version = bytes;
  version[8] = 9;
  overwrite(dir / "t.ckpt", version);
  CHECK_THROWS_AS(io::load_checkpoint(dir / "t.ckpt"), FormatError);
  overwrite(dir / "t.ckpt", bytes + "x");
  CHECK_THROWS_AS(io::load_checkpoint(dir / "t.ckpt"), FormatError);
}

TEST_CASE("presets carry the tabulated constants") {
  const auto tr = io::preset("synthetic-train");
  CHECK(tr.soil == SoilParams{5e-4, 0.29, 2880.0, 3.53e-4, 0.874});
  CHECK(tr.grid.n_volumes == 26);
  CHECK(tr.grid.dx == 0.04);
  CHECK(tr.grid.length == 1.0);
  CHECK(tr.t_end == 1e4);
  CHECK(tr.dt == 5.0);
  CHECK(tr.c_s == 1.0);
  CHECK(tr.left == BoundaryCondition{Dirichlet{1.0}});
  CHECK(tr.right == BoundaryCondition{Cauchy{1.0}});
  CHECK(tr.steps() == 2000);

  const auto te = io::preset("synthetic-test");
  CHECK(te.c_s == 0.7);
  CHECK(te.left == BoundaryCondition{Dirichlet{0.7}});
  CHECK(te.soil == tr.soil);
  CHECK(te.grid == tr.grid);

  const auto c1 = io::preset("core1");
  CHECK(c1.soil.D_e == 2.00e-5);
  CHECK(c1.soil.phi == 0.288);
  CHECK(c1.soil.rho_s == 1957.0);
  CHECK(c1.grid.length == 0.0254);
  CHECK(c1.radius == 0.02375);
  CHECK(c1.t_end == 38.81);
  CHECK(c1.flow_rate == 1.01e-4);
  CHECK(c1.right == BoundaryCondition{Cauchy{1.01e-4}});
  CHECK(c1.c_s == 1.4);

  const auto c2 = io::preset("core2");
  CHECK(c2.soil.D_e == 2.00e-5);
  CHECK(c2.grid.length == 0.02604);
  CHECK(c2.radius == 0.02375);
  CHECK(c2.t_end == 39.82);
  CHECK(c2.flow_rate == 1.04e-4);
  CHECK(c2.c_s == 1.6);

  const auto c2b = io::preset("core2b");
  CHECK(c2b.soil.D_e == 2.78e-5);
  CHECK(c2b.soil.phi == 0.288);
  CHECK(c2b.grid.length == 0.105);
  CHECK(c2b.t_end == 48.88);
  CHECK(c2b.c_s == 1.4);
  CHECK(!c2b.radius);
  CHECK(!c2b.flow_rate);
  CHECK(c2b.right == BoundaryCondition{Neumann{0.0}});

  CHECK_THROWS_AS(io::preset("core3"), ConfigError);
  CHECK(io::preset_names().size() == 5);
}

TEST_CASE("scenario key-value round trip") {
  for (const auto& name : io::preset_names()) {
    const auto s = io::preset(name);
    const auto back = io::scenario_from_kv(io::KvDoc::parse(io::scenario_to_kv(s).str()));
    CHECK(back.soil == s.soil);
    CHECK(back.grid == s.grid);
    CHECK(back.left == s.left);
    CHECK(back.right == s.right);
    CHECK(back.t_end == s.t_end);
    CHECK(back.dt == s.dt);
    CHECK(back.radius == s.radius);
    CHECK(back.flow_rate == s.flow_rate);
  }
}

TEST_CASE("generated synthetic data") {
  const Dataset d = io::generate_dataset(io::preset("synthetic-train"));
  CHECK(d.steps() == 2000);
  CHECK(d.c.front().size() == 26);
  CHECK(d.c_t.back().size() == 26);
  CHECK(d.meta.provenance == "simulator:synthetic-train");

  const auto bt = io::extract_breakthrough(d);
  CHECK(bt.t == d.t);
  CHECK(bt.value.front() == 0.0);
  for (std::size_t k = 1; k < bt.value.size(); ++k) CHECK(bt.value[k] >= bt.value[k - 1] - 1e-12);
  for (double v : io::extract_profile(d, io::Field::c, 0)) CHECK(v == 0.0);
}

TEST_CASE("core2b final total-concentration profile is non-increasing") {
  const Dataset d = io::generate_dataset(io::preset("core2b"));
  const auto prof = io::extract_profile(d, io::Field::c_t, d.steps() - 1);
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] <= prof[i - 1] + 1e-12);
  CHECK(prof.front() > prof.back());
}

TEST_CASE("observables on a hand-built dataset") {
  const Dataset d = toy();
  const auto bt = io::extract_breakthrough(d);
  CHECK(bt.value == std::vector<double>{2.0, 0.1 + 0.2});
  CHECK(io::extract_profile(d, io::Field::c_t, 1) == d.c_t[1]);
  CHECK(io::extract_profile(d, io::Field::c, 0) == d.c[0]);
  CHECK_THROWS_AS(io::extract_profile(d, io::Field::c, 2), ShapeError);
}

TEST_CASE("svg chart") {
  const std::string svg = io::svg_line_chart(
      "R(c) & more", "c", "R", {io::SvgSeries{"a<b", {0, 1, 2}, {3, 2, 1}, false},
                                io::SvgSeries{"ref", {0, 2}, {1, 1}, true}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("&amp;") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
}
