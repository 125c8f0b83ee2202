#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "commons/kernels.hpp"
#include "commons/scenarios.hpp"

using namespace commons;
using namespace commons::kernels;

namespace {

// Sizes straddle the 4-lane vector width and its unrolled multiples.
constexpr std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 25, 26, 63, 100};

Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(-2, 2);
  return v;
}

bool close(double a, double b, double scale) {
  return std::fabs(a - b) <= 1e-13 * (1 + scale);
}

class Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!variant_available(Variant::kAvx2)) GTEST_SKIP() << "avx2 not available";
    s = &scalar_table();
    v = &table(Variant::kAvx2);
  }
  const Table* s = nullptr;
  const Table* v = nullptr;
  Rng rng{77};
};

}  // namespace

TEST(Dispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(variant_available(Variant::kScalar));
  EXPECT_EQ(&table(Variant::kScalar), &scalar_table());
  EXPECT_EQ(to_string(Variant::kScalar), "scalar");
  EXPECT_EQ(to_string(Variant::kAvx2), "avx2");
}

TEST(Dispatch, ActiveVariantHonoursEnvironment) {
  const char* env = std::getenv("COMMONS_DYN_KERNELS");
  if (env && std::string(env) == "scalar") {
    EXPECT_EQ(active_variant(), Variant::kScalar);
  } else {
    EXPECT_EQ(active_variant(),
              variant_available(Variant::kAvx2) ? Variant::kAvx2 : Variant::kScalar);
  }
  EXPECT_EQ(&active(), &table(active_variant()));
}

TEST(ScalarKernels, SmallExamples) {
  const Table& t = scalar_table();
  const double a[] = {1, -2, 3};
  const double b[] = {4, 5, -6};
  EXPECT_EQ(t.dot(a, b, 3), 4 - 10 - 18);
  EXPECT_EQ(t.sum(a, 3), 2);
  EXPECT_EQ(t.norm1(a, 3), 6);
  EXPECT_EQ(t.norm_inf(a, 3), 3);
  EXPECT_EQ(t.weighted_sumsq(b, a, 3), 4 + 20 - 54);
  const double m[] = {1, 2, 3, 4, 5, 6};
  double y[2];
  t.matvec(m, a, y, 2, 3);
  EXPECT_EQ(y[0], 1 - 4 + 9);
  EXPECT_EQ(y[1], 4 - 10 + 18);
  double out[3];
  t.waxpy(a, 2.0, b, out, 3);
  EXPECT_EQ(out[2], 3 - 12);
  t.scaled_diff(2.0, a, b, a, out, 3);
  EXPECT_EQ(out[1], -4 - 5 * -2);
  double x[] = {1, 1, 1};
  const double one[] = {1, 1, 1};
  t.rk4_combine(x, one, one, one, one, 0.6, 3);
  EXPECT_NEAR(x[0], 1.6, 1e-15);
}

TEST_F(Equivalence, Reductions) {
  for (std::size_t n : kSizes) {
    const Vector a = random_vector(rng, n), b = random_vector(rng, n);
    Vector w = random_vector(rng, n);
    for (double& x : w) x = std::fabs(x);
    EXPECT_TRUE(close(s->dot(a.data(), b.data(), n), v->dot(a.data(), b.data(), n), 4.0 * n)) << n;
    EXPECT_TRUE(close(s->sum(a.data(), n), v->sum(a.data(), n), 2.0 * n)) << n;
    EXPECT_TRUE(close(s->norm1(a.data(), n), v->norm1(a.data(), n), 2.0 * n)) << n;
    EXPECT_EQ(s->norm_inf(a.data(), n), v->norm_inf(a.data(), n)) << n;
    EXPECT_TRUE(close(s->weighted_sumsq(w.data(), a.data(), n),
                      v->weighted_sumsq(w.data(), a.data(), n), 8.0 * n))
        << n;
  }
}

TEST_F(Equivalence, Matvec) {
  for (std::size_t rows : {1, 2, 5, 25}) {
    for (std::size_t cols : kSizes) {
      const Vector m = random_vector(rng, rows * cols), x = random_vector(rng, cols);
      Vector ys(rows), yv(rows);
      s->matvec(m.data(), x.data(), ys.data(), rows, cols);
      v->matvec(m.data(), x.data(), yv.data(), rows, cols);
      for (std::size_t i = 0; i < rows; ++i) EXPECT_TRUE(close(ys[i], yv[i], 4.0 * cols));
    }
  }
}

TEST_F(Equivalence, ElementwiseKernels) {
  for (std::size_t n : kSizes) {
    const Vector x = random_vector(rng, n), p = random_vector(rng, n), q = random_vector(rng, n),
                 r = random_vector(rng, n), k2 = random_vector(rng, n),
                 k3 = random_vector(rng, n);
    Vector os(n), ov(n);
    s->waxpy(x.data(), 0.37, p.data(), os.data(), n);
    v->waxpy(x.data(), 0.37, p.data(), ov.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(close(os[i], ov[i], 2.0));
    s->scaled_diff(1.3, p.data(), q.data(), r.data(), os.data(), n);
    v->scaled_diff(1.3, p.data(), q.data(), r.data(), ov.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(close(os[i], ov[i], 8.0));
    Vector xs(x), xv(x);
    s->rk4_combine(xs.data(), p.data(), k2.data(), k3.data(), q.data(), 0.01, n);
    v->rk4_combine(xv.data(), p.data(), k2.data(), k3.data(), q.data(), 0.01, n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(close(xs[i], xv[i], 2.0));
  }
}

TEST_F(Equivalence, NonFiniteInputsPropagate) {
  const Vector a{1, 2, NAN, 4, 5, 6, 7, 8, 9};
  EXPECT_TRUE(std::isnan(s->sum(a.data(), a.size())));
  EXPECT_TRUE(std::isnan(v->sum(a.data(), a.size())));
  EXPECT_TRUE(std::isnan(s->norm_inf(a.data(), a.size())));
  EXPECT_TRUE(std::isnan(v->norm_inf(a.data(), a.size())));
  EXPECT_TRUE(std::isnan(v->norm_inf(a.data(), 3)));
  const Vector b{1, 2, 3, 4, INFINITY, 6, 7, 8, 9};
  EXPECT_EQ(v->norm1(b.data(), b.size()), INFINITY);
}
