#include <gtest/gtest.h>

#include "ntuple/lfunction.hpp"
#include "oracles.hpp"

using namespace ntuple;

namespace {

const Real kTol("1e-30");

std::vector<mpq_class> positions(const LSeriesData& d) {
  std::vector<mpq_class> r;
  for (const auto& p : d.poles) r.push_back(p.position);
  return r;
}

TEST(LFunction, PoleSets) {
  PrecisionContext ctx;
  EXPECT_EQ(positions(lf_data_ntuple(2, ctx)), (std::vector<mpq_class>{1}));
  EXPECT_EQ(positions(lf_data_ntuple(3, ctx)), (std::vector<mpq_class>{2, 1}));
  for (unsigned ell = 4; ell <= 9; ++ell) {
    EXPECT_EQ(positions(lf_data_ntuple(ell, ctx)), (std::vector<mpq_class>{ell - 1, ell - 2, ell - 3}))
        << ell;
    EXPECT_EQ(lf_data_ntuple(ell, ctx).alpha, ell - 1);
  }
  EXPECT_THROW(lf_data_ntuple(1, ctx), std::invalid_argument);
}

TEST(LFunction, EllThreeData) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  const LSeriesData d = lf_data_ntuple(3, ctx);
  const Real p = oracle::pi();
  EXPECT_LT(oracle::rel_diff(d.poles[0].residue, p * p / 6), kTol);
  EXPECT_LT(oracle::rel_diff(d.poles[1].residue, Real(-1) / 2), kTol);
  EXPECT_EQ(d.l_at_zero_exact, mpq_class(1, 24));
  const Real lp = log(2 * p) / 24 - oracle::zeta_prime(-1) / 2;
  EXPECT_LT(oracle::rel_diff(d.l_prime_at_zero, lp), kTol);
  EXPECT_LT(oracle::rel_diff(*d.c1, p * p * oracle::zeta(3) / 3), kTol);
  EXPECT_LT(oracle::rel_diff(*d.c2, -p * p / 12), kTol);
}

TEST(LFunction, ResidueAtZero) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  const Real z2 = oracle::zeta_prime(-2);
  EXPECT_LT(oracle::rel_diff(lstar_residue_at_zero(lf_data_ntuple(4, ctx)), z2 / 24), kTol);
  EXPECT_LT(oracle::rel_diff(lstar_residue_at_zero(lf_data_ntuple(5, ctx)), z2 / 2880), kTol);
  for (unsigned ell = 6; ell <= 9; ++ell) {
    const LSeriesData d = lf_data_ntuple(ell, ctx);
    EXPECT_EQ(d.l_at_zero_exact, 0);
    EXPECT_EQ(d.l_prime_at_zero, 0);
  }
  EXPECT_EQ(lf_data_ntuple(4, ctx).l_at_zero_exact, 0);
  EXPECT_EQ(lf_data_ntuple(2, ctx).l_at_zero_exact, mpq_class(-1, 2));
}

TEST(LFunction, ResiduesAreProductsOfOtherFactors) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  for (unsigned ell = 4; ell <= 8; ++ell) {
    const LSeriesData d = lf_data_ntuple(ell, ctx);
    for (const auto& pole : d.poles) {
      const long nu = pole.position.get_num().get_si();
      Real expected = 1;
      for (long k = 0; k + 2 <= static_cast<long>(ell); ++k) {
        if (k == nu - 1) continue;
        expected *= oracle::zeta(nu - k);
      }
      EXPECT_LT(oracle::rel_diff(pole.residue, expected), kTol) << ell << ' ' << nu;
    }
  }
}

TEST(LFunction, ThreePoleConstants) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  const Real z2 = oracle::zeta(2), z3 = oracle::zeta(3), z4 = oracle::zeta(4);
  const ThreePoleConstants c = c_constants(4, ctx);
  EXPECT_LT(oracle::rel_diff(c.c1, 6 * z2 * z3 * z4), kTol);
  EXPECT_LT(oracle::rel_diff(c.c2, -z2 * z3), kTol);
  EXPECT_LT(oracle::rel_diff(c.c3, z2 / 24), kTol);
  EXPECT_GT(c.c3, 0);
  for (unsigned ell = 4; ell <= 9; ++ell) {
    const ThreePoleConstants cc = c_constants(ell, ctx);
    const LSeriesData d = lf_data_ntuple(ell, ctx);
    EXPECT_LT(oracle::rel_diff(cc.c1, *d.c1), kTol) << ell;
    EXPECT_LT(oracle::rel_diff(cc.c2, *d.c2), kTol) << ell;
    EXPECT_LT(oracle::rel_diff(cc.c3, *d.c3), kTol) << ell;
  }
  EXPECT_THROW(c_constants(3, ctx), std::invalid_argument);
}

TEST(LFunction, PowerFamily) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  const LSeriesData d0 = lf_data_power(0, ctx);
  ASSERT_EQ(d0.poles.size(), 1u);
  EXPECT_EQ(d0.poles[0].position, 1);
  EXPECT_EQ(d0.poles[0].residue, 1);
  EXPECT_EQ(d0.l_at_zero_exact, mpq_class(-1, 2));
  const LSeriesData d1 = lf_data_power(1, ctx);
  EXPECT_EQ(d1.alpha, 2);
  EXPECT_EQ(d1.l_at_zero_exact, mpq_class(-1, 12));
  EXPECT_LT(oracle::rel_diff(d1.l_prime_at_zero, oracle::zeta_prime(-1)), kTol);
  const LSeriesData d2 = lf_data_power(2, ctx);
  EXPECT_LT(oracle::rel_diff(d2.l_prime_at_zero, -oracle::zeta(3) / (4 * oracle::pi() * oracle::pi())), kTol);
  EXPECT_THROW(lf_data_power(5, ctx), std::domain_error);
}

TEST(LFunction, PoleWeight) {
  PrecisionContext ctx;
  auto scope = ctx.activate();
  const Pole p{mpq_class(2), Real(3)};
  EXPECT_LT(oracle::rel_diff(pole_weight(p, ctx), 3 * 2 * oracle::zeta(3)), kTol);
  EXPECT_LT(oracle::rel_diff(lstar_residue(p, ctx), 3 * oracle::zeta(3)), kTol);
}

}  // namespace
