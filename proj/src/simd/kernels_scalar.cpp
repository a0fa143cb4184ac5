#include "finn/simd/kernels.hpp"

namespace finn::simd {
namespace {

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void add_scaled(std::span<const double> x, double a, std::span<const double> y,
                std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

void dense_forward(DenseDims d, std::span<const double> w, std::span<const double> b,
                   std::span<const double> x, std::span<double> y) {
  for (std::size_t o = 0; o < d.out; ++o) {
    double* yo = y.data() + o * d.batch;
    for (std::size_t j = 0; j < d.batch; ++j) yo[j] = b[o];
    for (std::size_t i = 0; i < d.in; ++i) {
      const double wi = w[o * d.in + i];
      const double* xi = x.data() + i * d.batch;
      for (std::size_t j = 0; j < d.batch; ++j) yo[j] += wi * xi[j];
    }
  }
}

void dense_backward(DenseDims d, std::span<const double> w, std::span<const double> x,
                    std::span<const double> dy, std::span<double> dx, std::span<double> dw,
                    std::span<double> db) {
  for (std::size_t o = 0; o < d.out; ++o) {
    const auto dyo = dy.subspan(o * d.batch, d.batch);
    db[o] += sum(dyo);
    for (std::size_t i = 0; i < d.in; ++i) {
      const auto xi = x.subspan(i * d.batch, d.batch);
      dw[o * d.in + i] += dot(dyo, xi);
      if (!dx.empty()) axpy(w[o * d.in + i], dyo, dx.subspan(i * d.batch, d.batch));
    }
  }
}

void tanh_backward(std::span<const double> y, std::span<const double> dy, std::span<double> dx) {
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
}

void sigmoid_backward(std::span<const double> y, std::span<const double> dy,
                      std::span<double> dx) {
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] += dy[i] * y[i] * (1.0 - y[i]);
}

void mul_accumulate(std::span<const double> dy, std::span<const double> other,
                    std::span<double> dx) {
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * other[i];
}

void second_difference(double coef, std::span<const double> ext, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = coef * (ext[i] - 2.0 * ext[i + 1] + ext[i + 2]);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      .isa = Isa::scalar,
      .axpy = axpy,
      .add_scaled = add_scaled,
      .dot = dot,
      .sum = sum,
      .dense_forward = dense_forward,
      .dense_backward = dense_backward,
      .tanh_backward = tanh_backward,
      .sigmoid_backward = sigmoid_backward,
      .mul_accumulate = mul_accumulate,
      .second_difference = second_difference,
  };
  return table;
}

}  // namespace finn::simd
