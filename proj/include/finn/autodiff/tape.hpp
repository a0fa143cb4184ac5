#pragma once

// Reverse-mode automatic differentiation over vector-valued nodes.
//
// A Tape is an append-only list of nodes. Every operation evaluates eagerly
// and records its inputs, so node ids are topologically ordered by
// construction and backward() is a single reverse sweep. Values are flat
// double vectors; scalars are vectors of length one and broadcast against
// longer operands in add/sub/mul.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "finn/simd/kernels.hpp"

namespace finn::ad {

class Tape;

/// Handle to a node on a tape. Cheap to copy; only valid while the tape lives
/// and has not been truncated below its id.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const noexcept { return tape != nullptr && id >= 0; }
  std::size_t size() const;
  std::span<const double> value() const;
  double scalar() const;
};

/// Elementwise function with its derivative, for custom unary nodes.
struct ElementwiseFn {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

enum class OpKind : std::uint8_t {
  leaf,
  constant,
  add,
  sub,
  mul,
  scale,
  offset,
  lincomb,
  tanh,
  sigmoid,
  softplus,
  clamp,
  dense,
  dense_tanh,
  slice,
  concat,
  sum,
  sq_err,
  elementwise,
};

class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(std::vector<std::vector<double>> g, std::vector<std::size_t> sizes)
      : grads_(std::move(g)), sizes_(std::move(sizes)) {}

  /// Gradient of the output with respect to `v`; zeros if `v` does not
  /// influence the output.
  std::vector<double> of(Var v) const;

 private:
  std::vector<std::vector<double>> grads_;
  std::vector<std::size_t> sizes_;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  /// Differentiable input.
  Var leaf(std::span<const double> values);
  Var leaf(std::initializer_list<double> values) { return leaf(std::span(values.begin(), values.size())); }
  /// Input that never receives a gradient.
  Var constant(std::span<const double> values);
  Var constant(std::initializer_list<double> values) {
    return constant(std::span(values.begin(), values.size()));
  }
  Var constant(double value) { return constant({value}); }

  std::size_t size() const noexcept { return nodes_.size(); }
  OpKind kind(Var v) const;
  std::span<const double> value(Var v) const;
  const std::vector<int>& inputs(Var v) const;

  /// Drops every node with id >= n. Used to reuse a tape holding parameter
  /// leaves across many forward-only evaluations.
  void truncate(std::size_t n);

  /// Reverse sweep from a scalar node. Every node is visited once, in
  /// decreasing id order.
  Gradients backward(Var output) const;

  /// Internal node record; exposed for the op implementations.
  struct NodeData {
    OpKind op = OpKind::constant;
    std::vector<int> in;
    std::vector<double> value;
    std::vector<double> aux;
    std::size_t p0 = 0, p1 = 0, p2 = 0;
    double s0 = 0.0, s1 = 0.0;
    std::shared_ptr<const ElementwiseFn> fn;
  };

 private:
  Var push(NodeData&& node);
  const NodeData& node(Var v) const;
  void check(Var v) const;

  std::vector<NodeData> nodes_;

  friend Var add(Var, Var);
  friend Var sub(Var, Var);
  friend Var mul(Var, Var);
  friend Var scale(Var, double);
  friend Var offset(Var, double);
  friend Var lincomb(std::span<const double>, std::span<const Var>);
  friend Var tanh(Var);
  friend Var sigmoid(Var);
  friend Var softplus(Var);
  friend Var clamp(Var, double, double);
  friend Var dense(Var, Var, Var, simd::DenseDims);
  friend Var dense_tanh(Var, Var, Var, simd::DenseDims);
  friend Var slice(Var, std::size_t, std::size_t);
  friend Var concat(std::span<const Var>);
  friend Var sum(Var);
  friend Var sq_err(Var, std::span<const double>);
  friend Var elementwise(Var, std::shared_ptr<const ElementwiseFn>);
  friend Var detach(Var);
};

// Binary ops broadcast a length-1 operand.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double k);
Var offset(Var a, double k);
/// sum_i coef[i] * xs[i]; all xs share one length.
Var lincomb(std::span<const double> coef, std::span<const Var> xs);
Var tanh(Var a);
Var sigmoid(Var a);
/// log(1 + exp(a)), evaluated without overflow.
Var softplus(Var a);
/// Gradient passes only where lo <= a <= hi.
Var clamp(Var a, double lo, double hi);
/// Feature-major dense layer: x is (in x batch), w is (out x in), b is (out).
Var dense(Var x, Var w, Var b, simd::DenseDims dims);
/// tanh(dense(...)) as one node.
Var dense_tanh(Var x, Var w, Var b, simd::DenseDims dims);
Var slice(Var a, std::size_t offset, std::size_t length);
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
Var sum(Var a);
/// sum_i (a_i - target_i)^2 as a scalar node.
Var sq_err(Var a, std::span<const double> target);
Var elementwise(Var a, std::shared_ptr<const ElementwiseFn> fn);
/// Copy of `a` as a constant: gradient flow stops here.
Var detach(Var a);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }
inline Var operator*(double k, Var a) { return scale(a, k); }
inline Var operator*(Var a, double k) { return scale(a, k); }

double softplus(double x);
/// Inverse of softplus for y > 0.
double softplus_inverse(double y);
double sigmoid(double x);

}  // namespace finn::ad
