// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "finn/simd/kernels.hpp"

namespace finn::simd::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), vy));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_scaled(std::span<const double> x, double a, std::span<const double> y,
                std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vx = _mm256_loadu_pd(x.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y.data() + i), vx));
  }
  for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i + kLanes),
                           _mm256_loadu_pd(y.data() + i + kLanes), acc1);
  }
  for (; i + kLanes <= n; i += kLanes)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  double s = hsum(acc);
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
      __m256d acc = _mm256_set1_pd(b[o]);
      for (std::size_t i = 0; i < d.in; ++i)
        acc = _mm256_fmadd_pd(_mm256_set1_pd(wo[i]), _mm256_loadu_pd(x.data() + i * d.batch + j),
                              acc);
      _mm256_storeu_pd(yo + j, acc);
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
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    const __m256d deriv = _mm256_fnmadd_pd(vy, vy, one);
    const __m256d vdx = _mm256_loadu_pd(dx.data() + i);
    _mm256_storeu_pd(dx.data() + i, _mm256_fmadd_pd(_mm256_loadu_pd(dy.data() + i), deriv, vdx));
  }
  for (; i < n; ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
}

void sigmoid_backward(std::span<const double> y, std::span<const double> dy,
                      std::span<double> dx) {
  const std::size_t n = y.size();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vy = _mm256_loadu_pd(y.data() + i);
    const __m256d deriv = _mm256_mul_pd(vy, _mm256_sub_pd(one, vy));
    const __m256d vdx = _mm256_loadu_pd(dx.data() + i);
    _mm256_storeu_pd(dx.data() + i, _mm256_fmadd_pd(_mm256_loadu_pd(dy.data() + i), deriv, vdx));
  }
  for (; i < n; ++i) dx[i] += dy[i] * y[i] * (1.0 - y[i]);
}

void mul_accumulate(std::span<const double> dy, std::span<const double> other,
                    std::span<double> dx) {
  const std::size_t n = dy.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vdx = _mm256_loadu_pd(dx.data() + i);
    _mm256_storeu_pd(dx.data() + i, _mm256_fmadd_pd(_mm256_loadu_pd(dy.data() + i),
                                                    _mm256_loadu_pd(other.data() + i), vdx));
  }
  for (; i < n; ++i) dx[i] += dy[i] * other[i];
}

void second_difference(double coef, std::span<const double> ext, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d vc = _mm256_set1_pd(coef);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d left = _mm256_loadu_pd(ext.data() + i);
    const __m256d mid = _mm256_loadu_pd(ext.data() + i + 1);
    const __m256d right = _mm256_loadu_pd(ext.data() + i + 2);
    const __m256d s = _mm256_fnmadd_pd(two, mid, _mm256_add_pd(left, right));
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(vc, s));
  }
  for (; i < n; ++i) out[i] = coef * (ext[i] - 2.0 * ext[i + 1] + ext[i + 2]);
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{
      .isa = Isa::avx2,
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

}  // namespace finn::simd::avx2
