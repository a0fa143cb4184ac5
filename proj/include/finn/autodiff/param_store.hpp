#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finn/autodiff/tape.hpp"

namespace finn {

/// A named, shaped block of doubles. Row-major.
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
  bool trainable = true;

  std::size_t numel() const noexcept { return values.size(); }
  bool operator==(const Tensor&) const = default;
};

/// Ordered container of every parameter a model owns. The order is the one
/// used to flatten gradients and optimizer state, and it is preserved by
/// checkpoints.
class ParamStore {
 public:
  Tensor& add(std::string name, std::vector<std::size_t> shape, std::vector<double> values,
              bool trainable = true);

  const Tensor* find(std::string_view name) const;
  Tensor* find(std::string_view name);
  /// Throws FormatError when the tensor is absent.
  const Tensor& at(std::string_view name) const;
  Tensor& at(std::string_view name);
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::span<const Tensor> tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

  std::size_t parameter_count() const;
  std::size_t trainable_count() const;
  std::vector<double> flatten_trainable() const;
  void assign_trainable(std::span<const double> flat);

  bool operator==(const ParamStore&) const = default;

 private:
  std::vector<Tensor> tensors_;
};

/// A ParamStore registered on a tape: trainable tensors become leaves, the
/// rest constants. `vars[i]` corresponds to `store.tensors()[i]`.
class BoundParams {
 public:
  BoundParams(ad::Tape& tape, const ParamStore& store);

  ad::Var operator[](std::string_view name) const;
  bool contains(std::string_view name) const { return store_->contains(name); }

  /// Gradient of the trainable tensors, flattened in store order.
  std::vector<double> flat_gradient(const ad::Gradients& grads) const;

 private:
  const ParamStore* store_;
  std::vector<ad::Var> vars_;
};

}  // namespace finn
