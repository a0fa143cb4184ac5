#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "finn/autodiff/param_store.hpp"
#include "finn/autodiff/tape.hpp"

namespace finn {

struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  // out x in, row-major
  std::vector<double> bias;    // out

  bool operator==(const DenseLayer&) const = default;
};

/// Feedforward network with tanh hidden layers and a positive output
/// `scale * sigmoid(z)`. The scale is stored through its softplus
/// pre-image so that any real `raw_scale` maps to a positive scale.
struct MlpParams {
  std::vector<DenseLayer> layers;
  double raw_scale = 0.0;

  double scale() const;
  void set_scale(double scale);
  /// Weights + biases + the scale.
  std::size_t parameter_count() const;
  std::vector<std::size_t> layer_sizes() const;

  bool operator==(const MlpParams&) const = default;
};

/// Xavier-uniform weights, zero biases, scale 1. Deterministic per seed.
MlpParams mlp_init(std::span<const std::size_t> layer_sizes, std::uint64_t seed);
MlpParams mlp_init(std::initializer_list<std::size_t> layer_sizes, std::uint64_t seed);

/// Plain double evaluation.
double mlp_forward(const MlpParams& params, double x);

/// Writes the network as tensors `<prefix>.w<k>`, `<prefix>.b<k>` and
/// `<prefix>.raw_scale`.
void store_mlp(ParamStore& store, const std::string& prefix, const MlpParams& params,
               bool trainable = true);
MlpParams load_mlp(const ParamStore& store, const std::string& prefix);

/// Tape view of a network bound through BoundParams.
struct MlpVars {
  std::vector<ad::Var> weights;
  std::vector<ad::Var> biases;
  std::vector<std::size_t> sizes;
  ad::Var raw_scale;
};

MlpVars bind_mlp(const BoundParams& bound, const ParamStore& store, const std::string& prefix);

/// Batched tape forward: `x` holds one scalar input per batch entry and the
/// result has the same length.
ad::Var mlp_forward(const MlpVars& net, ad::Var x);

}  // namespace finn
