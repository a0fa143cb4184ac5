#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace finn::io {

/// Flat `key = value` document. Keys are dotted paths; order of insertion is
/// kept on output. Lines starting with '#' are comments.
class KvDoc {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, std::size_t value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return get(key).has_value(); }
  /// Throws FormatError when missing.
  std::string text(const std::string& key) const;
  /// Throws FormatError when missing or not a number.
  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Throws ParseError with the 1-based position of the offending line.
  static KvDoc parse(const std::string& text, const std::string& source = "<kv>");
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string source_ = "<kv>";
};

KvDoc read_kv(const std::filesystem::path& path);
void write_kv(const std::filesystem::path& path, const KvDoc& doc);

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);
/// Strict full-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace finn::io
