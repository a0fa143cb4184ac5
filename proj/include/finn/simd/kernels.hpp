#pragma once

// Data-parallel inner loops shared by the tape, the FVM reference path and the
// fixed-step integrators. Every kernel has a scalar reference implementation;
// AVX2 (x86-64) and NEON (aarch64) variants are compiled when the target
// allows it and selected once at startup.
//
// Layout convention for dense layers is feature-major: an activation block of
// `features x batch` stores each feature's batch contiguously, so the batch
// dimension is the one that gets vectorized.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace finn::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct DenseDims {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t batch = 0;
};

struct KernelTable {
  Isa isa = Isa::scalar;

  // y += a * x
  void (*axpy)(double a, std::span<const double> x, std::span<double> y) = nullptr;
  // out = x + a * y
  void (*add_scaled)(std::span<const double> x, double a, std::span<const double> y,
                     std::span<double> out) = nullptr;
  double (*dot)(std::span<const double> x, std::span<const double> y) = nullptr;
  double (*sum)(std::span<const double> x) = nullptr;

  // y[o, j] = b[o] + sum_i w[o, i] * x[i, j]     (w is out x in, row-major)
  void (*dense_forward)(DenseDims d, std::span<const double> w, std::span<const double> b,
                        std::span<const double> x, std::span<double> y) = nullptr;
  // dx += w^T dy (skipped when dx is empty), dw += dy x^T, db += rowsum(dy)
  void (*dense_backward)(DenseDims d, std::span<const double> w, std::span<const double> x,
                         std::span<const double> dy, std::span<double> dx, std::span<double> dw,
                         std::span<double> db) = nullptr;

  // dx += dy * (1 - y^2)           (y = tanh(x))
  void (*tanh_backward)(std::span<const double> y, std::span<const double> dy,
                        std::span<double> dx) = nullptr;
  // dx += dy * y * (1 - y)         (y = sigmoid(x))
  void (*sigmoid_backward)(std::span<const double> y, std::span<const double> dy,
                           std::span<double> dx) = nullptr;
  // dx += dy * other
  void (*mul_accumulate)(std::span<const double> dy, std::span<const double> other,
                         std::span<double> dx) = nullptr;

  // out[i] = coef * (ext[i] - 2 ext[i+1] + ext[i+2]); ext.size() == out.size() + 2
  void (*second_difference)(double coef, std::span<const double> ext,
                            std::span<double> out) = nullptr;
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The table used by the library. Chosen on first call: the widest available
/// ISA unless FINN_SIMD=scalar|avx2|neon overrides it.
const KernelTable& active();

/// Overrides the active table (tests and benchmarks). Not thread-safe with
/// concurrent kernel use.
void set_active(const KernelTable& table);

}  // namespace finn::simd
