#pragma once

// Dense arithmetic kernels behind the vector fields, the integrator and the
// Lyapunov evaluations. Each kernel has a portable scalar reference and, on
// x86-64, an AVX2/FMA variant compiled in its own translation unit. The
// variant is chosen once per process from CPUID; COMMONS_DYN_KERNELS=scalar
// forces the reference path (useful to reproduce byte streams across hosts).

#include <cstddef>
#include <string_view>

namespace commons::kernels {

enum class Variant { kScalar, kAvx2 };

std::string_view to_string(Variant v) noexcept;

struct Table {
  // y = M x, M row-major rows x cols.
  void (*matvec)(const double* m, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*norm1)(const double* a, std::size_t n);
  double (*norm_inf)(const double* a, std::size_t n);
  // sum_i s_i a_i^2
  double (*weighted_sumsq)(const double* s, const double* a, std::size_t n);
  // out = x + a * k
  void (*waxpy)(const double* x, double a, const double* k, double* out,
                std::size_t n);
  // out = c * p - q .* r
  void (*scaled_diff)(double c, const double* p, const double* q,
                      const double* r, double* out, std::size_t n);
  // x += h/6 (k1 + 2 k2 + 2 k3 + k4)
  void (*rk4_combine)(double* x, const double* k1, const double* k2,
                      const double* k3, const double* k4, double h,
                      std::size_t n);
};

const Table& scalar_table() noexcept;
// Null when the build or the host lacks AVX2/FMA.
const Table* avx2_table() noexcept;

bool variant_available(Variant v) noexcept;
Variant active_variant() noexcept;
const Table& active() noexcept;
const Table& table(Variant v);

}  // namespace commons::kernels
