#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fcagenda/kernels.hpp"

namespace fcagenda::kernels {
namespace {

std::vector<Word> random_words(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<Word> w(n, 0);
  for (auto& x : w) {
    for (int b = 0; b < 64; ++b) {
      if (bit(rng)) x |= Word{1} << b;
    }
  }
  return w;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    fast_ = avx2_table();
    if (fast_ == nullptr) GTEST_SKIP() << "no vector kernels on this machine";
  }
  const KernelTable& ref_ = scalar_table();
  const KernelTable* fast_ = nullptr;
};

TEST_F(KernelEquivalence, BitOperationsAgreeOnAllLengths) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 37; ++n) {
    for (double density : {0.0, 0.05, 0.5, 0.95, 1.0}) {
      const auto a = random_words(rng, n, density);
      auto b = random_words(rng, n, density);
      std::vector<Word> r1(n), r2(n);
      ref_.and_words(r1.data(), a.data(), b.data(), n);
      fast_->and_words(r2.data(), a.data(), b.data(), n);
      EXPECT_EQ(r1, r2);

      auto d1 = a, d2 = a;
      ref_.and_assign(d1.data(), b.data(), n);
      fast_->and_assign(d2.data(), b.data(), n);
      EXPECT_EQ(d1, d2);

      EXPECT_EQ(ref_.popcount(a.data(), n), fast_->popcount(a.data(), n));
      EXPECT_EQ(ref_.and_popcount(a.data(), b.data(), n), fast_->and_popcount(a.data(), b.data(), n));
      EXPECT_EQ(ref_.intersects(a.data(), b.data(), n), fast_->intersects(a.data(), b.data(), n));
      EXPECT_EQ(ref_.is_subset(a.data(), b.data(), n), fast_->is_subset(a.data(), b.data(), n));
      EXPECT_EQ(ref_.equal(a.data(), b.data(), n), fast_->equal(a.data(), b.data(), n));

      // subsets and equal copies exercise the true branches
      EXPECT_TRUE(fast_->is_subset(r1.data(), a.data(), n));
      EXPECT_TRUE(fast_->equal(a.data(), a.data(), n));
      if (n > 0) {
        b = a;
        b[n - 1] ^= Word{1} << 63;
        EXPECT_FALSE(fast_->equal(a.data(), b.data(), n));
      }
    }
  }
}

TEST_F(KernelEquivalence, ReductionsAgreeWithinRounding) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 0; n <= 67; ++n) {
    std::vector<double> a(n), b(n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      mag += std::abs(a[i] * b[i]) + std::abs(a[i]);
    }
    EXPECT_NEAR(ref_.dot(a.data(), b.data(), n), fast_->dot(a.data(), b.data(), n), 1e-14 * (mag + 1));
    EXPECT_NEAR(ref_.sum(a.data(), n), fast_->sum(a.data(), n), 1e-14 * (mag + 1));
  }
}

TEST(Kernels, ScalarReference) {
  const auto& k = scalar_table();
  const std::vector<Word> a = {0b1011, ~Word{0}};
  const std::vector<Word> b = {0b0011, 0};
  EXPECT_EQ(k.popcount(a.data(), 2), 67U);
  EXPECT_EQ(k.and_popcount(a.data(), b.data(), 2), 2U);
  EXPECT_TRUE(k.is_subset(b.data(), a.data(), 2));
  EXPECT_FALSE(k.is_subset(a.data(), b.data(), 2));
  const double x[] = {1.0, 2.0, 3.0};
  const double y[] = {4.0, 5.0, 6.0};
  EXPECT_EQ(k.dot(x, y, 3), 32.0);
  EXPECT_EQ(k.sum(x, 3), 6.0);
}

TEST(Kernels, ActiveTableIsOneOfTheVariants) {
  const auto& a = active();
  EXPECT_TRUE(&a == &scalar_table() || &a == avx2_table());
}

}  // namespace
}  // namespace fcagenda::kernels
