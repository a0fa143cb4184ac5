#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace finn {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamHyper&) const = default;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
  AdamHyper hyper;

  static AdamState fresh(std::size_t n, AdamHyper hyper = {});
  bool operator==(const AdamState&) const = default;
};

/// One bias-corrected ADAM update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

/// Rescales `grads` so its Euclidean norm is at most `max_norm`. Returns the
/// norm before clipping.
double clip_global_norm(std::span<double> grads, double max_norm);

}  // namespace finn
