#include <gtest/gtest.h>

#include "bsp/suites.hpp"

using namespace bsp;

namespace {

const RingSpec kH{Theory::H, 0, std::nullopt};
RingSpec ring_k(int n) { return RingSpec{Theory::K, n, std::nullopt}; }

}  // namespace

TEST(Operators, ReflectionSwapsNeighbours) {
  EXPECT_EQ(s_action(2, Poly::parse("x[2]^2*x[3] + c[1]"), kH), Poly::parse("x[3]^2*x[2] + c[1]"));
}

TEST(Operators, ReflectionAtZeroMovesChernClasses) {
  // s_0 c_1 = c_1 + x~_0 - x~_1 = c_1 - x_0 + x_1 in cohomology.
  EXPECT_EQ(s_action(0, var(Var::c(1)), kH), Poly::parse("c[1] - x[0] + x[1]"));
}

TEST(Operators, ReflectionAtZeroIsAnInvolution) {
  const int n = 4;
  const Poly c2 = var(Var::c(2)).truncated(n);
  EXPECT_EQ(s_action(0, s_action(0, c2, ring_k(n)), ring_k(n)), c2);
  EXPECT_EQ(s_action(0, s_action(0, var(Var::c(3)), kH), kH), var(Var::c(3)));
}

TEST(Operators, DividedDifferenceOnChernClassesMatchesClosedForm) {
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(divided_difference(0, var(Var::c(k)), kH), d0_chern_closed(k)) << k;
}

TEST(Operators, IsobaricOnChernClassesMatchesClosedForm) {
  const int n = 6;
  for (int k = 1; k <= 4; ++k)
    EXPECT_EQ(isobaric(0, var(Var::c(k)).truncated(n), ring_k(n)), pi0_chern_closed(k, n)) << k;
}

TEST(Operators, DividedDifferenceOfASymmetricFunctionVanishes) {
  EXPECT_TRUE(divided_difference(1, Poly::parse("x[1]*x[2] + x[1] + x[2] + y[5]"), kH).is_zero());
  EXPECT_EQ(divided_difference(1, var(Var::x(1)), kH), Poly(1));
  EXPECT_EQ(divided_difference(-1, var(Var::x(-1), 2), kH), Poly::parse("x[-1] + x[0]"));
}

TEST(Operators, IsobaricOfOneIsMinusBeta) {
  EXPECT_EQ(isobaric(1, Poly(1).truncated(4), ring_k(4)), (Poly(0) - beta()).truncated(4));
  EXPECT_TRUE(isobaric(1, var(Var::x(1)) * var(Var::x(2)), kH).is_zero());
}

TEST(Operators, RandomizedRelations) {
  const auto r = operators_suite(20, 7);
  EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(r.checks, 100);
}
