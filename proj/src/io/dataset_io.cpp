#include "finn/io/dataset_io.hpp"

#include <cmath>

#include "finn/errors.hpp"

namespace finn::io {

std::string format_csv(const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t line = 0;
  std::size_t pos = 0;
  std::size_t width = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view l(text.data() + pos, end - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    ++line;
    pos = end + 1;
    if (l.empty()) {
      if (pos < text.size()) throw ParseError(source, line, 1, "empty row");
      break;
    }
    std::vector<double> row;
    std::size_t cell = 0;
    while (true) {
      const std::size_t comma = l.find(',', cell);
      const std::string_view tok = l.substr(cell, comma == std::string_view::npos ? l.size() - cell : comma - cell);
      const auto v = parse_double(tok);
      if (!v) throw ParseError(source, line, cell + 1, "not a number: '" + std::string(tok) + "'");
      row.push_back(*v);
      if (comma == std::string_view::npos) break;
      cell = comma + 1;
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError(source, line, 1,
                       "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void store_meta(KvDoc& doc, const DatasetMeta& m) {
  doc.set("grid.n_volumes", m.grid.n_volumes);
  doc.set("grid.dx", m.grid.dx);
  doc.set("grid.length", m.grid.length);
  if (m.soil) {
    doc.set("soil.D_e", m.soil->D_e);
    doc.set("soil.phi", m.soil->phi);
    doc.set("soil.rho_s", m.soil->rho_s);
    doc.set("soil.K_f", m.soil->K_f);
    doc.set("soil.n_f", m.soil->n_f);
  }
  doc.set("bc.left.kind", bc_kind(m.left));
  doc.set("bc.left.value", bc_value(m.left));
  doc.set("bc.right.kind", bc_kind(m.right));
  doc.set("bc.right.value", bc_value(m.right));
  doc.set("provenance", m.provenance);
}

DatasetMeta load_meta(const KvDoc& doc) {
  DatasetMeta m;
  m.grid.n_volumes = doc.count("grid.n_volumes");
  m.grid.dx = doc.number("grid.dx");
  m.grid.length = doc.number("grid.length");
  if (doc.contains("soil.D_e"))
    m.soil = SoilParams{doc.number("soil.D_e"), doc.number("soil.phi"), doc.number("soil.rho_s"),
                        doc.number("soil.K_f"), doc.number("soil.n_f")};
  try {
    m.left = make_bc(doc.text("bc.left.kind"), doc.number("bc.left.value"));
    m.right = make_bc(doc.text("bc.right.kind"), doc.number("bc.right.value"));
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
  m.provenance = doc.get("provenance").value_or("");
  return m;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& data) {
  data.validate();
  std::filesystem::create_directories(dir);
  KvDoc meta;
  meta.set("format", "finn-dataset");
  meta.set("version", std::size_t{1});
  meta.set("steps", data.steps());
  store_meta(meta, data.meta);
  write_kv(dir / "meta", meta);

  std::string t;
  for (double v : data.t) t += format_double(v) + "\n";
  write_text(dir / "t.csv", t);
  write_text(dir / "c.csv", format_csv(data.c));
  write_text(dir / "ct.csv", format_csv(data.c_t));
}

Dataset read_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw FormatError("dataset directory '" + dir.string() + "' does not exist");
  const KvDoc meta = read_kv(dir / "meta");
  if (meta.get("format") != "finn-dataset") throw FormatError(dir.string() + ": not a dataset");
  if (meta.count("version") != 1)
    throw FormatError(dir.string() + ": unsupported dataset version " + meta.text("version"));

  Dataset d;
  d.meta = load_meta(meta);
  const auto t_rows = parse_csv(read_text(dir / "t.csv"), (dir / "t.csv").string());
  for (const auto& r : t_rows) {
    if (r.size() != 1) throw FormatError((dir / "t.csv").string() + " must have one column");
    d.t.push_back(r[0]);
  }
  d.c = parse_csv(read_text(dir / "c.csv"), (dir / "c.csv").string());
  d.c_t = parse_csv(read_text(dir / "ct.csv"), (dir / "ct.csv").string());
  if (meta.contains("steps") && meta.count("steps") != d.t.size())
    throw FormatError(dir.string() + ": meta declares " + meta.text("steps") + " steps, t.csv has " +
                      std::to_string(d.t.size()));
  d.validate();
  return d;
}

}  // namespace finn::io
