#include <cmath>

#include "commons/kernels.hpp"

namespace commons::kernels {
namespace {

void matvec(const double* m, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = m + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double norm1(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

double norm_inf(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(a[i]);
    // NaN must propagate so callers can detect blow-up.
    if (v > m || v != v) m = v;
    if (m != m) return m;
  }
  return m;
}

double weighted_sumsq(const double* s, const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += s[i] * a[i] * a[i];
  return acc;
}

void waxpy(const double* x, double a, const double* k, double* out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * k[i];
}

void scaled_diff(double c, const double* p, const double* q, const double* r,
                 double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c * p[i] - q[i] * r[i];
}

void rk4_combine(double* x, const double* k1, const double* k2,
                 const double* k3, const double* k4, double h, std::size_t n) {
  const double w = h / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

constexpr Table kScalar{matvec,         dot,   sum,         norm1,      norm_inf,
                        weighted_sumsq, waxpy, scaled_diff, rk4_combine};

}  // namespace

const Table& scalar_table() noexcept { return kScalar; }

}  // namespace commons::kernels
