#pragma once

#include <cstdint>
#include <filesystem>

#include "finn/autodiff/param_store.hpp"

namespace finn::io {

inline constexpr char kCheckpointMagic[8] = {'F', 'I', 'N', 'N', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Little-endian binary container:
///   magic[8] version:u32 count:u32
///   per tensor: name_len:u32 name trainable:u8 rank:u32 dims:u64[rank] values:f64[prod(dims)]
/// Written to a sibling temporary and renamed into place.
void save_checkpoint(const std::filesystem::path& path, const ParamStore& params);

/// Throws FormatError on bad magic, unknown version or truncation. Nothing is
/// returned unless the whole file parsed.
ParamStore load_checkpoint(const std::filesystem::path& path);

}  // namespace finn::io
