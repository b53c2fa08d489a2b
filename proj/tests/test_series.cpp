#include <gtest/gtest.h>

#include "bsp/series.hpp"

using namespace bsp;

TEST(Series, ChernSeriesCoefficients) {
  const TSeries c = TSeries::chern();
  EXPECT_EQ(c[0], Poly(1));
  EXPECT_EQ(c[3], var(Var::c(3)));
  EXPECT_EQ(c[-1], Poly(0));
}

TEST(Series, LinearFactorsCancel) {
  const Poly a = var(Var::x(1));
  const TSeries s = TSeries::chern().times_linear(a).over_linear(a);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(s[k], TSeries::chern()[k]) << k;
}

TEST(Series, ProductAndQuotient) {
  const TSeries p = TSeries::polynomial({Poly(1), var(Var::y(1))});
  const TSeries q = TSeries::polynomial({Poly(1), var(Var::y(2))});
  const TSeries r = (p * q) / q;
  for (int k = 0; k <= 5; ++k) EXPECT_EQ(r[k], p[k]) << k;
  EXPECT_THROW(p / TSeries::polynomial({Poly(2)}), DomainError);
}

TEST(Series, RowSeriesCancelsTails) {
  // p = q = 0 leaves c itself.
  const RingSpec h{Theory::H, 0, std::nullopt};
  const TSeries s = row_series(0, 0, h);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(s[k], TSeries::chern()[k]);
  // p = 1: divide by (1 - x_1 t).
  EXPECT_EQ(row_series(1, 0, h)[2], Poly::parse("c[2] + c[1]*x[1] + x[1]^2"));
  // q = 1: multiply by (1 + y_1 t).
  EXPECT_EQ(row_series(0, 1, h)[1], Poly::parse("c[1] + y[1]"));
}

TEST(Series, DeterminantByCofactors) {
  const Poly a = var(Var::x(1)), b = var(Var::x(2)), c = var(Var::y(1)), d = var(Var::y(2));
  EXPECT_EQ(determinant({{a, b}, {c, d}}), a * d - b * c);
  EXPECT_EQ(determinant({}), Poly(1));
  std::vector<std::vector<Poly>> id(5, std::vector<Poly>(5));
  for (int i = 0; i < 5; ++i) id[i][i] = Poly(1);
  EXPECT_EQ(determinant(id), Poly(1));
  EXPECT_THROW(determinant({{a, b}}), DomainError);
}

TEST(Series, TheoryNames) {
  EXPECT_EQ(parse_theory("H"), Theory::H);
  EXPECT_EQ(parse_theory("K"), Theory::K);
  EXPECT_THROW(parse_theory("Q"), DomainError);
}
