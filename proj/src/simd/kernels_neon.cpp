// NEON (aarch64) variants. Advanced SIMD is mandatory on aarch64, so no
// runtime probe is needed beyond the build-time architecture check.

#include <arm_neon.h>

#include "finn/simd/kernels.hpp"

namespace finn::simd::neon {
namespace {

constexpr std::size_t kLanes = 2;

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    vst1q_f64(y.data() + i, vfmaq_f64(vld1q_f64(y.data() + i), va, vld1q_f64(x.data() + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_scaled(std::span<const double> x, double a, std::span<const double> y,
                std::span<double> out) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    vst1q_f64(out.data() + i, vfmaq_f64(vld1q_f64(x.data() + i), va, vld1q_f64(y.data() + i)));
  for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    acc = vfmaq_f64(acc, vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = vaddq_f64(acc, vld1q_f64(x.data() + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

void dense_forward(DenseDims d, std::span<const double> w, std::span<const double> b,
                   std::span<const double> x, std::span<double> y) {
  for (std::size_t o = 0; o < d.out; ++o) {
    double* yo = y.data() + o * d.batch;
    const double* wo = w.data() + o * d.in;
    std::size_t j = 0;
    for (; j + kLanes <= d.batch; j += kLanes) {
      float64x2_t acc = vdupq_n_f64(b[o]);
      for (std::size_t i = 0; i < d.in; ++i)
        acc = vfmaq_n_f64(acc, vld1q_f64(x.data() + i * d.batch + j), wo[i]);
      vst1q_f64(yo + j, acc);
    }
    for (; j < d.batch; ++j) {
      double acc = b[o];
      for (std::size_t i = 0; i < d.in; ++i) acc += wo[i] * x[i * d.batch + j];
      yo[j] = acc;
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
      dw[o * d.in + i] += dot(dyo, x.subspan(i * d.batch, d.batch));
      if (!dx.empty()) axpy(w[o * d.in + i], dyo, dx.subspan(i * d.batch, d.batch));
    }
  }
}

void tanh_backward(std::span<const double> y, std::span<const double> dy, std::span<double> dx) {
  const std::size_t n = y.size();
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t vy = vld1q_f64(y.data() + i);
    const float64x2_t deriv = vfmsq_f64(one, vy, vy);
    vst1q_f64(dx.data() + i, vfmaq_f64(vld1q_f64(dx.data() + i), vld1q_f64(dy.data() + i), deriv));
  }
  for (; i < n; ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
}

void sigmoid_backward(std::span<const double> y, std::span<const double> dy,
                      std::span<double> dx) {
  const std::size_t n = y.size();
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t vy = vld1q_f64(y.data() + i);
    const float64x2_t deriv = vmulq_f64(vy, vsubq_f64(one, vy));
    vst1q_f64(dx.data() + i, vfmaq_f64(vld1q_f64(dx.data() + i), vld1q_f64(dy.data() + i), deriv));
  }
  for (; i < n; ++i) dx[i] += dy[i] * y[i] * (1.0 - y[i]);
}

void mul_accumulate(std::span<const double> dy, std::span<const double> other,
                    std::span<double> dx) {
  const std::size_t n = dy.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    vst1q_f64(dx.data() + i, vfmaq_f64(vld1q_f64(dx.data() + i), vld1q_f64(dy.data() + i),
                                       vld1q_f64(other.data() + i)));
  for (; i < n; ++i) dx[i] += dy[i] * other[i];
}

void second_difference(double coef, std::span<const double> ext, std::span<double> out) {
  const std::size_t n = out.size();
  const float64x2_t vc = vdupq_n_f64(coef);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t lr = vaddq_f64(vld1q_f64(ext.data() + i), vld1q_f64(ext.data() + i + 2));
    const float64x2_t s = vfmsq_f64(lr, two, vld1q_f64(ext.data() + i + 1));
    vst1q_f64(out.data() + i, vmulq_f64(vc, s));
  }
  for (; i < n; ++i) out[i] = coef * (ext[i] - 2.0 * ext[i + 1] + ext[i + 2]);
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{
      .isa = Isa::neon,
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
  return t;
}

}  // namespace finn::simd::neon
