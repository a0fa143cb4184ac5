#include "finn/autodiff/param_store.hpp"

#include <functional>
#include <numeric>

#include "finn/errors.hpp"

namespace finn {

Tensor& ParamStore::add(std::string name, std::vector<std::size_t> shape,
                        std::vector<double> values, bool trainable) {
  if (contains(name)) throw ConfigError("duplicate tensor name '" + name + "'");
  const std::size_t expected =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (expected != values.size())
    throw ShapeError("tensor '" + name + "' has " + std::to_string(values.size()) +
                     " values but shape implies " + std::to_string(expected));
  tensors_.push_back(Tensor{std::move(name), std::move(shape), std::move(values), trainable});
  return tensors_.back();
}

const Tensor* ParamStore::find(std::string_view name) const {
  for (const auto& t : tensors_)
    if (t.name == name) return &t;
  return nullptr;
}

Tensor* ParamStore::find(std::string_view name) {
  for (auto& t : tensors_)
    if (t.name == name) return &t;
  return nullptr;
}

const Tensor& ParamStore::at(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw FormatError("parameter store has no tensor '" + std::string(name) + "'");
}

Tensor& ParamStore::at(std::string_view name) {
  if (auto* t = find(name)) return *t;
  throw FormatError("parameter store has no tensor '" + std::string(name) + "'");
}

std::size_t ParamStore::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.numel();
  return n;
}

std::size_t ParamStore::trainable_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_)
    if (t.trainable) n += t.numel();
  return n;
}

std::vector<double> ParamStore::flatten_trainable() const {
  std::vector<double> flat;
  flat.reserve(trainable_count());
  for (const auto& t : tensors_)
    if (t.trainable) flat.insert(flat.end(), t.values.begin(), t.values.end());
  return flat;
}

void ParamStore::assign_trainable(std::span<const double> flat) {
  if (flat.size() != trainable_count())
    throw ShapeError("assign_trainable: got " + std::to_string(flat.size()) + " values for " +
                     std::to_string(trainable_count()) + " trainable parameters");
  std::size_t off = 0;
  for (auto& t : tensors_) {
    if (!t.trainable) continue;
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(off),
              flat.begin() + static_cast<std::ptrdiff_t>(off + t.numel()), t.values.begin());
    off += t.numel();
  }
}

BoundParams::BoundParams(ad::Tape& tape, const ParamStore& store) : store_(&store) {
  vars_.reserve(store.size());
  for (const auto& t : store.tensors())
    vars_.push_back(t.trainable ? tape.leaf(t.values) : tape.constant(t.values));
}

ad::Var BoundParams::operator[](std::string_view name) const {
  const auto tensors = store_->tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i)
    if (tensors[i].name == name) return vars_[i];
  throw FormatError("parameter store has no tensor '" + std::string(name) + "'");
}

std::vector<double> BoundParams::flat_gradient(const ad::Gradients& grads) const {
  std::vector<double> flat;
  flat.reserve(store_->trainable_count());
  const auto tensors = store_->tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (!tensors[i].trainable) continue;
    const auto g = grads.of(vars_[i]);
    flat.insert(flat.end(), g.begin(), g.end());
  }
  return flat;
}

}  // namespace finn
