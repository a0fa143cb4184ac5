#include "finn/autodiff/mlp.hpp"

#include <cmath>
#include <random>

#include "finn/errors.hpp"

namespace finn {

double MlpParams::scale() const { return ad::softplus(raw_scale); }
void MlpParams::set_scale(double s) { raw_scale = ad::softplus_inverse(s); }

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 1;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<std::size_t> MlpParams::layer_sizes() const {
  std::vector<std::size_t> s;
  if (layers.empty()) return s;
  s.push_back(layers.front().in);
  for (const auto& l : layers) s.push_back(l.out);
  return s;
}

MlpParams mlp_init(std::span<const std::size_t> sizes, std::uint64_t seed) {
  if (sizes.size() < 2) throw ConfigError("mlp_init: need at least two layer sizes");
  for (std::size_t s : sizes)
    if (s == 0) throw ConfigError("mlp_init: layer sizes must be positive");

  // mt19937_64 is fully specified, and the unit-interval mapping is done by
  // hand so the draw sequence does not depend on the standard library.
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  MlpParams p;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    DenseLayer l;
    l.in = sizes[k];
    l.out = sizes[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
    l.weight.resize(l.in * l.out);
    for (double& w : l.weight) w = (2.0 * unit() - 1.0) * limit;
    l.bias.assign(l.out, 0.0);
    p.layers.push_back(std::move(l));
  }
  p.set_scale(1.0);
  return p;
}

MlpParams mlp_init(std::initializer_list<std::size_t> sizes, std::uint64_t seed) {
  return mlp_init(std::span(sizes.begin(), sizes.size()), seed);
}

double mlp_forward(const MlpParams& params, double x) {
  if (!std::isfinite(x)) throw NumericInputError("mlp_forward: non-finite input");
  if (params.layers.empty() || params.layers.front().in != 1)
    throw ShapeError("mlp_forward: scalar evaluation needs a network with one input");
  std::vector<double> h{x};
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const auto& l = params.layers[k];
    std::vector<double> z(l.out);
    for (std::size_t o = 0; o < l.out; ++o) {
      double acc = l.bias[o];
      for (std::size_t i = 0; i < l.in; ++i) acc += l.weight[o * l.in + i] * h[i];
      z[o] = k + 1 < params.layers.size() ? std::tanh(acc) : acc;
    }
    h = std::move(z);
  }
  if (h.size() != 1) throw ShapeError("mlp_forward: scalar evaluation needs one output");
  return params.scale() * ad::sigmoid(h[0]);
}

void store_mlp(ParamStore& store, const std::string& prefix, const MlpParams& params,
               bool trainable) {
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const auto& l = params.layers[k];
    store.add(prefix + ".w" + std::to_string(k), {l.out, l.in}, l.weight, trainable);
    store.add(prefix + ".b" + std::to_string(k), {l.out}, l.bias, trainable);
  }
  store.add(prefix + ".raw_scale", {1}, {params.raw_scale}, trainable);
}

MlpParams load_mlp(const ParamStore& store, const std::string& prefix) {
  MlpParams p;
  for (std::size_t k = 0;; ++k) {
    const auto* w = store.find(prefix + ".w" + std::to_string(k));
    if (!w) break;
    const auto& b = store.at(prefix + ".b" + std::to_string(k));
    if (w->shape.size() != 2 || b.values.size() != w->shape[0])
      throw FormatError("network '" + prefix + "' layer " + std::to_string(k) +
                        " has inconsistent shapes");
    DenseLayer l;
    l.out = w->shape[0];
    l.in = w->shape[1];
    l.weight = w->values;
    l.bias = b.values;
    if (!p.layers.empty() && p.layers.back().out != l.in)
      throw FormatError("network '" + prefix + "' layer chain is inconsistent at layer " +
                        std::to_string(k));
    p.layers.push_back(std::move(l));
  }
  if (p.layers.empty()) throw FormatError("network '" + prefix + "' has no layers");
  p.raw_scale = store.at(prefix + ".raw_scale").values.at(0);
  return p;
}

MlpVars bind_mlp(const BoundParams& bound, const ParamStore& store, const std::string& prefix) {
  MlpVars v;
  for (std::size_t k = 0;; ++k) {
    const std::string w = prefix + ".w" + std::to_string(k);
    const auto* t = store.find(w);
    if (!t) break;
    if (k == 0) v.sizes.push_back(t->shape[1]);
    v.sizes.push_back(t->shape[0]);
    v.weights.push_back(bound[w]);
    v.biases.push_back(bound[prefix + ".b" + std::to_string(k)]);
  }
  if (v.weights.empty()) throw FormatError("network '" + prefix + "' has no layers");
  v.raw_scale = bound[prefix + ".raw_scale"];
  return v;
}

ad::Var mlp_forward(const MlpVars& net, ad::Var x) {
  for (double xi : x.value())
    if (!std::isfinite(xi)) throw NumericInputError("mlp_forward: non-finite input");
  const std::size_t in = net.sizes.front();
  if (x.size() % in != 0) throw ShapeError("mlp_forward: input length not a multiple of width");
  const std::size_t batch = x.size() / in;
  ad::Var h = x;
  const std::size_t n_layers = net.weights.size();
  for (std::size_t k = 0; k < n_layers; ++k) {
    const simd::DenseDims d{net.sizes[k], net.sizes[k + 1], batch};
    h = k + 1 < n_layers ? ad::dense_tanh(h, net.weights[k], net.biases[k], d)
                         : ad::dense(h, net.weights[k], net.biases[k], d);
  }
  return ad::softplus(net.raw_scale) * ad::sigmoid(h);
}

}  // namespace finn
