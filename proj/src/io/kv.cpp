#include "finn/io/kv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "finn/errors.hpp"

namespace finn::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

void KvDoc::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void KvDoc::set(const std::string& key, double value) { set(key, format_double(value)); }
void KvDoc::set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }

std::optional<std::string> KvDoc::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

std::string KvDoc::text(const std::string& key) const {
  if (auto v = get(key)) return *v;
  throw FormatError(source_ + ": missing key '" + key + "'");
}

double KvDoc::number(const std::string& key) const {
  const std::string s = text(key);
  if (auto v = parse_double(s)) return *v;
  throw FormatError(source_ + ": key '" + key + "' is not a number: '" + s + "'");
}

std::size_t KvDoc::count(const std::string& key) const {
  const double v = number(key);
  if (!(v >= 0.0) || v != std::floor(v))
    throw FormatError(source_ + ": key '" + key + "' is not a non-negative integer");
  return static_cast<std::size_t>(v);
}

KvDoc KvDoc::parse(const std::string& text, const std::string& source) {
  KvDoc doc;
  doc.source_ = source;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, 1, "expected 'key = value'");
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string value(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ParseError(source, lineno, 1, "empty key");
    if (key.find_first_of(" \t") != std::string::npos)
      throw ParseError(source, lineno, 1, "key contains whitespace");
    if (doc.contains(key)) throw ParseError(source, lineno, 1, "duplicate key '" + key + "'");
    doc.entries_.emplace_back(key, value);
  }
  return doc;
}

std::string KvDoc::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

KvDoc read_kv(const std::filesystem::path& path) { return KvDoc::parse(read_text(path), path.string()); }

void write_kv(const std::filesystem::path& path, const KvDoc& doc) { write_text(path, doc.str()); }

}  // namespace finn::io
