#include "finn/autodiff/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finn/errors.hpp"

namespace finn::ad {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double softplus_inverse(double y) {
  if (!(y > 0.0)) throw DomainError("softplus_inverse: argument must be positive");
  // log(exp(y) - 1) = y + log(1 - exp(-y))
  return y + std::log(-std::expm1(-y));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t Var::size() const { return value().size(); }
std::span<const double> Var::value() const {
  if (!tape) throw GraphError("Var is not attached to a tape");
  return tape->value(*this);
}
double Var::scalar() const {
  const auto v = value();
  if (v.size() != 1) throw ShapeError("Var::scalar on a node of length " + std::to_string(v.size()));
  return v[0];
}

std::vector<double> Gradients::of(Var v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= sizes_.size())
    throw GraphError("gradient requested for unknown node " + std::to_string(v.id));
  const auto& g = grads_[static_cast<std::size_t>(v.id)];
  if (g.empty()) return std::vector<double>(sizes_[static_cast<std::size_t>(v.id)], 0.0);
  return g;
}

void Tape::check(Var v) const {
  if (v.tape != this || v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size())
    throw GraphError("node id " + std::to_string(v.id) + " out of range for tape of size " +
                     std::to_string(nodes_.size()));
}

const Tape::NodeData& Tape::node(Var v) const {
  check(v);
  return nodes_[static_cast<std::size_t>(v.id)];
}

OpKind Tape::kind(Var v) const { return node(v).op; }
std::span<const double> Tape::value(Var v) const { return node(v).value; }
const std::vector<int>& Tape::inputs(Var v) const { return node(v).in; }

Var Tape::push(NodeData&& n) {
  for (int id : n.in) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw GraphError("input id " + std::to_string(id) + " out of range");
  }
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::leaf(std::span<const double> values) {
  NodeData n;
  n.op = OpKind::leaf;
  n.value.assign(values.begin(), values.end());
  return push(std::move(n));
}

Var Tape::constant(std::span<const double> values) {
  NodeData n;
  n.op = OpKind::constant;
  n.value.assign(values.begin(), values.end());
  return push(std::move(n));
}

void Tape::truncate(std::size_t n) {
  if (n < nodes_.size()) nodes_.resize(n);
}

namespace {

Tape& same_tape(Var a, Var b) {
  if (!a.tape || a.tape != b.tape) throw GraphError("operands live on different tapes");
  return *a.tape;
}

std::size_t broadcast_size(std::size_t na, std::size_t nb) {
  if (na == nb) return na;
  if (na == 1) return nb;
  if (nb == 1) return na;
  throw ShapeError("incompatible operand lengths " + std::to_string(na) + " and " +
                   std::to_string(nb));
}

Tape::NodeData make_node(OpKind kind, std::initializer_list<int> inputs) {
  Tape::NodeData n;
  n.op = kind;
  n.in.assign(inputs.begin(), inputs.end());
  return n;
}

}  // namespace

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const auto va = t.value(a), vb = t.value(b);
  const std::size_t m = broadcast_size(va.size(), vb.size());
  auto n = make_node(OpKind::add, {a.id, b.id});
  n.value.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    n.value[i] = va[va.size() == 1 ? 0 : i] + vb[vb.size() == 1 ? 0 : i];
  return t.push(std::move(n));
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const auto va = t.value(a), vb = t.value(b);
  const std::size_t m = broadcast_size(va.size(), vb.size());
  auto n = make_node(OpKind::sub, {a.id, b.id});
  n.value.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    n.value[i] = va[va.size() == 1 ? 0 : i] - vb[vb.size() == 1 ? 0 : i];
  return t.push(std::move(n));
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const auto va = t.value(a), vb = t.value(b);
  const std::size_t m = broadcast_size(va.size(), vb.size());
  auto n = make_node(OpKind::mul, {a.id, b.id});
  n.value.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    n.value[i] = va[va.size() == 1 ? 0 : i] * vb[vb.size() == 1 ? 0 : i];
  return t.push(std::move(n));
}

Var scale(Var a, double k) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::scale, {a.id});
  n.s0 = k;
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = k * va[i];
  return t.push(std::move(n));
}

Var offset(Var a, double k) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::offset, {a.id});
  n.s0 = k;
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = va[i] + k;
  return t.push(std::move(n));
}

Var lincomb(std::span<const double> coef, std::span<const Var> xs) {
  if (xs.empty() || coef.size() != xs.size())
    throw ShapeError("lincomb: coefficient/operand count mismatch");
  Tape& t = *xs[0].tape;
  const std::size_t m = t.value(xs[0]).size();
  Tape::NodeData n;
  n.op = OpKind::lincomb;
  n.aux.assign(coef.begin(), coef.end());
  n.value.assign(m, 0.0);
  const auto& k = simd::active();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].tape != &t) throw GraphError("operands live on different tapes");
    const auto v = t.value(xs[j]);
    if (v.size() != m) throw ShapeError("lincomb: operand lengths differ");
    n.in.push_back(xs[j].id);
    k.axpy(coef[j], v, n.value);
  }
  return t.push(std::move(n));
}

Var tanh(Var a) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::tanh, {a.id});
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = std::tanh(va[i]);
  return t.push(std::move(n));
}

Var sigmoid(Var a) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::sigmoid, {a.id});
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = sigmoid(va[i]);
  return t.push(std::move(n));
}

Var softplus(Var a) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::softplus, {a.id});
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = softplus(va[i]);
  return t.push(std::move(n));
}

Var clamp(Var a, double lo, double hi) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::clamp, {a.id});
  n.s0 = lo;
  n.s1 = hi;
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = std::clamp(va[i], lo, hi);
  return t.push(std::move(n));
}

namespace {

Tape::NodeData dense_node(Var x, Var w, Var b, simd::DenseDims d, OpKind kind) {
  Tape& t = *x.tape;
  if (w.tape != &t || b.tape != &t) throw GraphError("dense: operands live on different tapes");
  const auto vx = t.value(x), vw = t.value(w), vb = t.value(b);
  if (vx.size() != d.in * d.batch || vw.size() != d.out * d.in || vb.size() != d.out)
    throw ShapeError("dense: operand sizes do not match dims " + std::to_string(d.out) + "x" +
                     std::to_string(d.in) + " batch " + std::to_string(d.batch));
  Tape::NodeData n;
  n.op = kind;
  n.in = {x.id, w.id, b.id};
  n.p0 = d.in;
  n.p1 = d.out;
  n.p2 = d.batch;
  n.value.resize(d.out * d.batch);
  simd::active().dense_forward(d, vw, vb, vx, n.value);
  return n;
}

}  // namespace

Var dense(Var x, Var w, Var b, simd::DenseDims dims) {
  return x.tape->push(dense_node(x, w, b, dims, OpKind::dense));
}

Var dense_tanh(Var x, Var w, Var b, simd::DenseDims dims) {
  auto n = dense_node(x, w, b, dims, OpKind::dense_tanh);
  for (double& v : n.value) v = std::tanh(v);
  return x.tape->push(std::move(n));
}

Var slice(Var a, std::size_t off, std::size_t length) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  if (off + length > va.size())
    throw ShapeError("slice [" + std::to_string(off) + ", " + std::to_string(off + length) +
                     ") exceeds length " + std::to_string(va.size()));
  auto n = make_node(OpKind::slice, {a.id});
  n.p0 = off;
  n.value.assign(va.begin() + static_cast<std::ptrdiff_t>(off),
                 va.begin() + static_cast<std::ptrdiff_t>(off + length));
  return t.push(std::move(n));
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat of zero parts");
  Tape& t = *parts[0].tape;
  Tape::NodeData n;
  n.op = OpKind::concat;
  for (Var p : parts) {
    if (p.tape != &t) throw GraphError("operands live on different tapes");
    const auto v = t.value(p);
    n.in.push_back(p.id);
    n.value.insert(n.value.end(), v.begin(), v.end());
  }
  return t.push(std::move(n));
}

Var concat(std::initializer_list<Var> parts) { return concat(std::span(parts.begin(), parts.size())); }

Var sum(Var a) {
  Tape& t = *a.tape;
  auto n = make_node(OpKind::sum, {a.id});
  n.value = {simd::active().sum(t.value(a))};
  return t.push(std::move(n));
}

Var sq_err(Var a, std::span<const double> target) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  if (va.size() != target.size())
    throw ShapeError("sq_err: prediction length " + std::to_string(va.size()) +
                     " != target length " + std::to_string(target.size()));
  auto n = make_node(OpKind::sq_err, {a.id});
  n.aux.assign(target.begin(), target.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - target[i];
    acc += d * d;
  }
  n.value = {acc};
  return t.push(std::move(n));
}

Var elementwise(Var a, std::shared_ptr<const ElementwiseFn> fn) {
  Tape& t = *a.tape;
  const auto va = t.value(a);
  auto n = make_node(OpKind::elementwise, {a.id});
  n.value.resize(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) n.value[i] = fn->f(va[i]);
  n.fn = std::move(fn);
  return t.push(std::move(n));
}

Var detach(Var a) { return a.tape->constant(a.tape->value(a)); }

Gradients Tape::backward(Var output) const {
  check(output);
  const auto out_id = static_cast<std::size_t>(output.id);
  if (nodes_[out_id].value.size() != 1)
    throw GraphError("backward requires a scalar output node, got length " +
                     std::to_string(nodes_[out_id].value.size()));

  // Which nodes depend on a leaf at all; constants and their descendants are
  // skipped entirely.
  std::vector<char> live(out_id + 1, 0);
  for (std::size_t i = 0; i <= out_id; ++i) {
    const auto& n = nodes_[i];
    if (n.op == OpKind::leaf) {
      live[i] = 1;
      continue;
    }
    for (int j : n.in)
      if (live[static_cast<std::size_t>(j)]) {
        live[i] = 1;
        break;
      }
  }

  std::vector<std::vector<double>> g(nodes_.size());
  std::vector<std::size_t> sizes(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) sizes[i] = nodes_[i].value.size();
  g[out_id] = {1.0};

  auto grad_of = [&](int id) -> std::vector<double>* {
    const auto u = static_cast<std::size_t>(id);
    if (!live[u]) return nullptr;
    if (g[u].empty()) g[u].assign(sizes[u], 0.0);
    return &g[u];
  };

  const auto& k = simd::active();
  std::vector<double> scratch;

  for (std::size_t idx = out_id + 1; idx-- > 0;) {
    const auto& n = nodes_[idx];
    if (g[idx].empty() || !live[idx]) continue;
    const std::vector<double>& gy = g[idx];
    switch (n.op) {
      case OpKind::leaf:
      case OpKind::constant:
        break;
      case OpKind::add:
      case OpKind::sub: {
        const double sign_b = n.op == OpKind::add ? 1.0 : -1.0;
        for (int pos = 0; pos < 2; ++pos) {
          auto* ga = grad_of(n.in[static_cast<std::size_t>(pos)]);
          if (!ga) continue;
          const double s = pos == 0 ? 1.0 : sign_b;
          if (ga->size() == gy.size())
            k.axpy(s, gy, *ga);
          else
            (*ga)[0] += s * k.sum(gy);
        }
        break;
      }
      case OpKind::mul: {
        for (int pos = 0; pos < 2; ++pos) {
          auto* ga = grad_of(n.in[static_cast<std::size_t>(pos)]);
          if (!ga) continue;
          const auto& other = nodes_[static_cast<std::size_t>(n.in[static_cast<std::size_t>(1 - pos)])].value;
          if (ga->size() == gy.size() && other.size() == gy.size()) {
            k.mul_accumulate(gy, other, *ga);
          } else if (ga->size() == gy.size()) {
            k.axpy(other[0], gy, *ga);
          } else if (other.size() == gy.size()) {
            (*ga)[0] += k.dot(gy, other);
          } else {
            (*ga)[0] += gy[0] * other[0];
          }
        }
        break;
      }
      case OpKind::scale:
        if (auto* ga = grad_of(n.in[0])) k.axpy(n.s0, gy, *ga);
        break;
      case OpKind::offset:
        if (auto* ga = grad_of(n.in[0])) k.axpy(1.0, gy, *ga);
        break;
      case OpKind::lincomb:
        for (std::size_t j = 0; j < n.in.size(); ++j)
          if (auto* ga = grad_of(n.in[j])) k.axpy(n.aux[j], gy, *ga);
        break;
      case OpKind::tanh:
        if (auto* ga = grad_of(n.in[0])) k.tanh_backward(n.value, gy, *ga);
        break;
      case OpKind::sigmoid:
        if (auto* ga = grad_of(n.in[0])) k.sigmoid_backward(n.value, gy, *ga);
        break;
      case OpKind::softplus:
        if (auto* ga = grad_of(n.in[0])) {
          const auto& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
          for (std::size_t i = 0; i < x.size(); ++i) (*ga)[i] += gy[i] * sigmoid(x[i]);
        }
        break;
      case OpKind::clamp:
        if (auto* ga = grad_of(n.in[0])) {
          const auto& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
          for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] >= n.s0 && x[i] <= n.s1) (*ga)[i] += gy[i];
        }
        break;
      case OpKind::dense:
      case OpKind::dense_tanh: {
        const simd::DenseDims d{n.p0, n.p1, n.p2};
        std::span<const double> dz = gy;
        if (n.op == OpKind::dense_tanh) {
          scratch.assign(gy.size(), 0.0);
          k.tanh_backward(n.value, gy, scratch);
          dz = scratch;
        }
        const auto& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
        const auto& w = nodes_[static_cast<std::size_t>(n.in[1])].value;
        auto* gx = grad_of(n.in[0]);
        auto* gw = grad_of(n.in[1]);
        auto* gb = grad_of(n.in[2]);
        std::vector<double> dw_tmp, db_tmp;
        if (!gw) dw_tmp.assign(w.size(), 0.0);
        if (!gb) db_tmp.assign(d.out, 0.0);
        k.dense_backward(d, w, x, dz, gx ? std::span<double>(*gx) : std::span<double>(),
                         gw ? std::span<double>(*gw) : std::span<double>(dw_tmp),
                         gb ? std::span<double>(*gb) : std::span<double>(db_tmp));
        break;
      }
      case OpKind::slice:
        if (auto* ga = grad_of(n.in[0]))
          k.axpy(1.0, gy, std::span<double>(*ga).subspan(n.p0, gy.size()));
        break;
      case OpKind::concat: {
        std::size_t off = 0;
        for (int id : n.in) {
          const std::size_t len = sizes[static_cast<std::size_t>(id)];
          if (auto* ga = grad_of(id)) k.axpy(1.0, std::span<const double>(gy).subspan(off, len), *ga);
          off += len;
        }
        break;
      }
      case OpKind::sum:
        if (auto* ga = grad_of(n.in[0]))
          for (double& v : *ga) v += gy[0];
        break;
      case OpKind::sq_err:
        if (auto* ga = grad_of(n.in[0])) {
          const auto& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
          for (std::size_t i = 0; i < x.size(); ++i) (*ga)[i] += 2.0 * gy[0] * (x[i] - n.aux[i]);
        }
        break;
      case OpKind::elementwise:
        if (auto* ga = grad_of(n.in[0])) {
          const auto& x = nodes_[static_cast<std::size_t>(n.in[0])].value;
          for (std::size_t i = 0; i < x.size(); ++i) (*ga)[i] += gy[i] * n.fn->df(x[i]);
        }
        break;
    }
  }
  return Gradients(std::move(g), std::move(sizes));
}

}  // namespace finn::ad
