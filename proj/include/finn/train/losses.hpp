#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "finn/autodiff/tape.hpp"
#include "finn/dataset.hpp"

namespace finn {

struct FullField {};
/// c at the last volume only.
struct BreakthroughOnly {};
/// c_t at the last time index only.
struct FinalProfileOnly {};

using LossMask = std::variant<FullField, BreakthroughOnly, FinalProfileOnly>;

std::string mask_name(const LossMask& m);
/// Accepts full, breakthrough, profile.
LossMask parse_mask(const std::string& name);

/// Copy of `data` with i.i.d. N(0, sigma^2) added to every c and c_t entry.
Dataset add_noise(const Dataset& data, double sigma, std::uint64_t seed);

/// Rows [begin, end) of a dataset.
struct TimeWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Mean squared error over the masked entries of rows in `window`. Full-field
/// MSE averages over both fields.
double mse(const Dataset& pred, const Dataset& target, const LossMask& mask, TimeWindow window);
double mse(const Dataset& pred, const Dataset& target, const LossMask& mask = FullField{});

/// Tape version: `pred[k]` is the concatenated (c, c_t) state matching
/// target row `first_row + k`.
ad::Var mse_loss(std::span<const ad::Var> pred, const Dataset& target, const LossMask& mask,
                 std::size_t first_row = 0);

}  // namespace finn
