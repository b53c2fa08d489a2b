#include <gtest/gtest.h>

#include "bsp/poly.hpp"

using namespace bsp;

namespace {

Poly P(const char* s, std::optional<int> n = std::nullopt) { return Poly::parse(s, n); }

}  // namespace

TEST(Poly, ParseAndPrintRoundTrip) {
  for (const char* s : {"0", "1", "-3", "c[3]", "x[-1]^2*z[0] - 2*b*c[1]", "y[-1] - y[1] + 4"}) {
    const Poly f = P(s);
    EXPECT_EQ(P(f.str().c_str()), f) << s;
  }
  EXPECT_EQ(P("x[1] + x[1]"), P("2*x[1]"));
  EXPECT_TRUE(P("x[1] - x[1]").is_zero());
}

TEST(Poly, JsonRoundTrip) {
  const Poly f = P("b^2*c[3]*x[-1] - 7*z[2] + 1", 4);
  const Poly g = Poly::from_json(f.to_json());
  EXPECT_EQ(g, f);
  EXPECT_EQ(g.trunc(), 4);
  EXPECT_FALSE(Poly::from_json(P("y[1]").to_json()).trunc());
}

TEST(Poly, ArithmeticIsExact) {
  const Poly a = P("x[1] + y[2]"), b = P("x[1] - y[2]");
  EXPECT_EQ(a * b, P("x[1]^2 - y[2]^2"));
  EXPECT_EQ((a + b).pow(3), P("8*x[1]^3"));
  const Poly big = Poly(Integer::parse("123456789012345678901234567890"));
  EXPECT_EQ((big * big - big * big), Poly(0));
  EXPECT_EQ((big * P("c[1]")).coeff(Monomial(Var::c(1))).str(), "123456789012345678901234567890");
}

TEST(Poly, TruncationTakesTheMinimum) {
  const Poly a = Poly(1).truncated(2) + P("b*c[1]", 2);
  const Poly b = P("b^2*c[2]", 4);
  const Poly prod = a * b;
  EXPECT_EQ(prod.trunc(), 2);
  EXPECT_EQ(prod, P("b^2*c[2]", 2));
  EXPECT_FALSE((P("c[1]") * P("c[2]")).trunc());
}

TEST(Poly, TruncationIsCoherent) {
  const Poly u = var(Var::x(1)), v = var(Var::z(0));
  EXPECT_EQ(ominus(u, v, 6).truncated(3), ominus(u, v, 3));
  EXPECT_EQ(x_tilde(2, 5).truncated(2), x_tilde(2, 2));
}

TEST(Poly, FormalGroupLaw) {
  const int n = 6;
  const Poly u = var(Var::x(1)), v = var(Var::y(2)), w = var(Var::z(3));
  EXPECT_EQ(oplus(oplus(u, v), w), oplus(u, oplus(v, w)));
  EXPECT_TRUE(ominus(oplus(u, v), v, n).truncated(n) == u.truncated(n));
  EXPECT_TRUE(oplus(oneg(u, n), u).truncated(n).is_zero());
  // x~_1 = -x_1 + b x_1^2 - b^2 x_1^3 + ...
  EXPECT_EQ(x_tilde(1, 2), P("-x[1] + b*x[1]^2 - b^2*x[1]^3", 2));
}

TEST(Poly, DivisionByADifference) {
  const Poly f = P("x[1]^3 - x[2]^3");
  EXPECT_EQ(divide_by_difference(f, Var::x(1), Var::x(2)), P("x[1]^2 + x[1]*x[2] + x[2]^2"));
  EXPECT_THROW(divide_by_difference(P("x[1]^2 + x[2]"), Var::x(1), Var::x(2)), ConsistencyError);
  EXPECT_EQ(divide_by_difference(P("x[1]^2 - 1"), Var::x(1), Poly(-1)), P("x[1] - 1"));
}

TEST(Poly, ExactDivision) {
  const Poly g = P("x[1] + y[1]");
  const Poly q = P("c[2] - 3*x[1]*y[1]");
  EXPECT_EQ(exact_divide(g * q, g), q);
  EXPECT_THROW(exact_divide(P("x[1]^2 + 1"), g), ConsistencyError);
  EXPECT_THROW(exact_divide(g, Poly(0)), DomainError);
}

TEST(Poly, Substitution) {
  const Poly f = P("x[1]^2*c[1] + y[0]");
  const Poly g = substitute(f, {{Var::x(1), P("x[1] + x[2]")}, {Var::y(0), Poly(3)}});
  EXPECT_EQ(g, P("x[1]^2*c[1] + 2*x[1]*x[2]*c[1] + x[2]^2*c[1] + 3"));
}

TEST(Poly, HomogeneousDegreeCountsBetaNegatively) {
  EXPECT_EQ(P("c[2] + b*c[3] + x[1]*x[2]").homogeneous_degree(), 2);
  EXPECT_FALSE(P("c[2] + c[1]").homogeneous_degree());
}

TEST(Poly, RejectsMalformedText) {
  EXPECT_THROW(P("q[1]"), DomainError);
  EXPECT_THROW(P("x1"), DomainError);
}
