// Built with -mavx2 -mfma; only reached after the dispatcher has confirmed
// host support.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "commons/kernels.hpp"

namespace commons::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec(const double* m, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(m + r * cols, x, cols);
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double norm1(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, vabs(_mm256_loadu_pd(a + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double norm_inf(const double* a, std::size_t n) {
  __m256d mx = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(v, v, _CMP_UNORD_Q));
    mx = _mm256_max_pd(mx, vabs(v));
  }
  if (_mm256_movemask_pd(nan) != 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, mx);
  double m = lanes[0];
  for (int k = 1; k < 4; ++k) m = lanes[k] > m ? lanes[k] : m;
  for (; i < n; ++i) {
    const double v = std::fabs(a[i]);
    if (v != v) return v;
    if (v > m) m = v;
  }
  return m;
}

double weighted_sumsq(const double* s, const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(s + i), v), v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += s[i] * a[i] * a[i];
  return r;
}

void waxpy(const double* x, double a, const double* k, double* out,
           std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(k + i),
                                              _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + a * k[i];
}

void scaled_diff(double c, const double* p, const double* q, const double* r,
                 double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d qr =
        _mm256_mul_pd(_mm256_loadu_pd(q + i), _mm256_loadu_pd(r + i));
    _mm256_storeu_pd(out + i, _mm256_fmsub_pd(vc, _mm256_loadu_pd(p + i), qr));
  }
  for (; i < n; ++i) out[i] = c * p[i] - q[i] * r[i];
}

void rk4_combine(double* x, const double* k1, const double* k2,
                 const double* k3, const double* k4, double h, std::size_t n) {
  const double w = h / 6.0;
  const __m256d vw = _mm256_set1_pd(w);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
    s = _mm256_fmadd_pd(two, s,
                        _mm256_add_pd(_mm256_loadu_pd(k1 + i),
                                      _mm256_loadu_pd(k4 + i)));
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(vw, s, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

constexpr Table kAvx2{matvec,         dot,   sum,         norm1,      norm_inf,
                      weighted_sumsq, waxpy, scaled_diff, rk4_combine};

}  // namespace

const Table* avx2_table_impl() noexcept { return &kAvx2; }

}  // namespace commons::kernels
