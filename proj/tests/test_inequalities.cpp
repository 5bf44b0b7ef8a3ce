#include <gtest/gtest.h>

#include "ntuple/inequalities.hpp"
#include "oracles.hpp"

using namespace ntuple;

namespace {

BigIntSeq from_dp(std::size_t N) { return BigIntSeq{0, oracle::partitions_dp(N)}; }

BigIntSeq factorial_weighted(const BigIntSeq& s) {
  BigIntSeq r = s;
  mpz_class f = 1;
  for (std::size_t n = 0; n < r.size(); ++n) {
    if (n > 0) f *= static_cast<unsigned long>(n);
    r.values[n] *= f;
  }
  return r;
}

TEST(Inequalities, PartitionLogConcavity) {
  const BigIntSeq p = pentagonal_p(10001);
  const auto r = log_concavity_scan(p, 2, 10000);
  EXPECT_EQ(r.minimal_threshold, 26u);
  std::vector<std::size_t> expected;
  for (std::size_t n = 3; n <= 25; n += 2) expected.push_back(n);
  EXPECT_EQ(r.violations, expected);
  EXPECT_TRUE(r.equalities.empty());
  EXPECT_EQ(r.property, "log-concavity");
}

TEST(Inequalities, SmallViolationExample) {
  const BigIntSeq p = from_dp(10);
  const auto r = log_concavity_scan(p, 5, 5);
  ASSERT_EQ(r.violations.size(), 1u);  // 49 < 55
  EXPECT_EQ(r.violations[0], 5u);
}

TEST(Inequalities, ScanMatchesNaiveDefinition) {
  const BigIntSeq s = expand_product(ntuple_exponent(3), 400);
  const auto r = log_concavity_scan(s, 1, 399);
  std::vector<std::size_t> naive;
  for (std::size_t n = 1; n <= 399; ++n) {
    if (s[n] * s[n] < s[n + 1] * s[n - 1]) naive.push_back(n);
  }
  EXPECT_EQ(r.violations, naive);
  EXPECT_EQ(r.minimal_threshold, naive.empty() ? 1u : naive.back() + 1);
}

TEST(Inequalities, NtupleThreeWindow) {
  const BigIntSeq s = expand_product(ntuple_exponent(3), 3001);
  EXPECT_TRUE(log_concavity_scan(s, 22, 3000).violations.empty());
}

TEST(Inequalities, ConstantSequenceIsBoth) {
  BigIntSeq c{0, std::vector<mpz_class>(20, 5)};
  const auto a = log_concavity_scan(c, 1, 18);
  const auto b = log_convexity_scan(c, 2, 18);
  EXPECT_TRUE(a.violations.empty());
  EXPECT_TRUE(b.violations.empty());
  EXPECT_EQ(a.equalities.size(), 18u);
  EXPECT_EQ(b.equalities.size(), 17u);
}

TEST(Inequalities, LogConvexityOfFactorialWeighted) {
  const BigIntSeq w = factorial_weighted(pentagonal_p(3001));
  const auto r = log_convexity_scan(w, 2, 3000);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_THROW(log_convexity_scan(w, 1, 10), std::invalid_argument);
}

TEST(Inequalities, BessenrodtOnoPartition) {
  const BigIntSeq p = pentagonal_p(200);
  const auto r = bessenrodt_ono_scan(p, 200);
  for (const auto& [a, b] : r.violations) EXPECT_TRUE(a == 1 || a + b <= 8) << a << ',' << b;
  // equality holds at (2,7) with 2 * 15 = 30 = p(9)
  EXPECT_NE(std::find(r.equalities.begin(), r.equalities.end(), IndexPair{2, 7}), r.equalities.end());
  // (3,6): 3 * 11 = 33 > 30
  EXPECT_EQ(std::find(r.violations.begin(), r.violations.end(), IndexPair{3, 6}), r.violations.end());
  EXPECT_EQ(std::find(r.equalities.begin(), r.equalities.end(), IndexPair{3, 6}), r.equalities.end());
  // Domain a, b > 1 with a + b > 8: only (2,7) is an equality there, none are violations.
  for (const auto& [a, b] : r.equalities) {
    if (a > 1 && a + b > 8) EXPECT_EQ(IndexPair(a, b), IndexPair(2, 7));
  }
}

TEST(Inequalities, BessenrodtOnoNaive) {
  const BigIntSeq p = pentagonal_p(60);
  const auto r = bessenrodt_ono_scan(p, 60);
  std::vector<IndexPair> v, e;
  for (std::size_t a = 1; 2 * a <= 60; ++a) {
    for (std::size_t b = a; a + b <= 60; ++b) {
      const mpz_class prod = p[a] * p[b];
      if (prod < p[a + b]) v.emplace_back(a, b);
      if (prod == p[a + b]) e.emplace_back(a, b);
    }
  }
  EXPECT_EQ(r.violations, v);
  EXPECT_EQ(r.equalities, e);
}

TEST(Inequalities, ParallelScansAreIdentical) {
  const BigIntSeq p = pentagonal_p(2001);
  const auto a = log_concavity_scan(p, 2, 2000, 1);
  const auto b = bessenrodt_ono_scan(p, 300, 1);
  for (unsigned t : {2u, 3u, 7u}) {
    const auto a2 = log_concavity_scan(p, 2, 2000, t);
    EXPECT_EQ(a2.violations, a.violations);
    EXPECT_EQ(a2.equalities, a.equalities);
    EXPECT_EQ(a2.minimal_threshold, a.minimal_threshold);
    const auto b2 = bessenrodt_ono_scan(p, 300, t);
    EXPECT_EQ(b2.violations, b.violations);
    EXPECT_EQ(b2.equalities, b.equalities);
  }
}

TEST(Inequalities, Errors) {
  BigIntSeq z{0, {1, 0, 1, 2, 3}};
  EXPECT_THROW(log_concavity_scan(z, 1, 3), std::domain_error);
  const BigIntSeq p = pentagonal_p(10);
  EXPECT_THROW(log_concavity_scan(p, 2, 10), std::out_of_range);
  EXPECT_THROW(log_concavity_scan(p, 0, 5), std::invalid_argument);
  EXPECT_THROW(bessenrodt_ono_scan(p, 11), std::out_of_range);
}

}  // namespace
