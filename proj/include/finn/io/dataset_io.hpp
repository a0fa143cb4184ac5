#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "finn/dataset.hpp"
#include "finn/io/kv.hpp"

namespace finn::io {

/// Directory with `meta` (key-value), `t.csv` (one column), `c.csv` and
/// `ct.csv` (T rows x n columns). Values are written with 17 significant
/// digits so reading back is bit-exact.
void write_dataset(const std::filesystem::path& dir, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& dir);

/// Parses a numeric CSV. Ragged rows and non-numeric cells raise ParseError
/// with the 1-based line and column.
std::vector<std::vector<double>> parse_csv(const std::string& text, const std::string& source);
std::string format_csv(const std::vector<std::vector<double>>& rows);

void store_meta(KvDoc& doc, const DatasetMeta& meta);
DatasetMeta load_meta(const KvDoc& doc);

}  // namespace finn::io
