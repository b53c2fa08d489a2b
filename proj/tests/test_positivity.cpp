#include <gtest/gtest.h>

#include "bsp/suites.hpp"

using namespace bsp;

namespace {

Poly y(int i) { return var(Var::y(i)); }
Poly z(int i) { return var(Var::z(i)); }

// e^{y_i - y_j} - 1, the K-theory generator when i comes before j.
Laurent ratio_minus_one(int i, int j) { return Laurent::character(i) * Laurent::character(j, -1) - Laurent::constant(1); }

}  // namespace

TEST(Positivity, OrderIsTheChain) {
  const PrecOrder o(2);
  EXPECT_EQ(o.length(), 4);
  EXPECT_EQ(o.at(1), 1);
  EXPECT_EQ(o.at(4), 0);
  EXPECT_TRUE(o.precedes(2, -1));
  EXPECT_FALSE(o.precedes(0, 1));
  EXPECT_EQ(o.generator_names(), (std::vector<std::string>{"u(1,2)", "u(2,-1)", "u(-1,0)"}));
  EXPECT_THROW(o.position(3), DomainError);
}

TEST(Positivity, CohomologyTelescopes) {
  const auto cert = certify_cohomology(y(-1) - y(1), PrecOrder(2));
  ASSERT_TRUE(cert.certified());
  EXPECT_EQ(cert.expansion, Poly::parse("x[1] + x[2]"));
  EXPECT_TRUE(certify_cohomology(Poly(), PrecOrder(2)).certified());
}

TEST(Positivity, CohomologyRejections) {
  const auto neg = certify_cohomology(y(1) - y(-1), PrecOrder(2));
  EXPECT_FALSE(neg.certified());
  EXPECT_EQ(neg.reason, "negative coefficient");
  ASSERT_TRUE(neg.offending_coefficient);
  EXPECT_EQ(neg.offending_coefficient->sign(), -1);
  const auto lone = certify_cohomology(y(1), PrecOrder(2));
  EXPECT_FALSE(lone.certified());
  EXPECT_EQ(lone.reason, "not shift-invariant");
}

TEST(Positivity, EveryConeGeneratorCertifies) {
  for (int m = 1; m <= 3; ++m) {
    const PrecOrder o(m);
    for (int a = 1; a <= o.length(); ++a)
      for (int b = a + 1; b <= o.length(); ++b) {
        const int i = o.at(a), j = o.at(b);
        EXPECT_TRUE(certify_cohomology(y(j) - y(i), o).certified()) << i << " " << j;
        EXPECT_FALSE(certify_cohomology(y(i) - y(j), o).certified()) << i << " " << j;
        EXPECT_TRUE(certify_laurent(ratio_minus_one(i, j), o).certified()) << i << " " << j;
        EXPECT_FALSE(certify_laurent(ratio_minus_one(j, i), o).certified()) << i << " " << j;
      }
  }
}

TEST(Positivity, LaurentOutsideTheGeneratorsIsRejected) {
  const auto cert = certify_laurent(ratio_minus_one(1, 2) * ratio_minus_one(1, 2) + Laurent::character(2) - Laurent::character(1),
                                    PrecOrder(2));
  EXPECT_FALSE(cert.certified());
  const auto shifted = certify_laurent(Laurent::character(1), PrecOrder(2));
  EXPECT_FALSE(shifted.certified());
}

TEST(Positivity, KTheoryValue) {
  const int n = 6;
  // At beta = -1, z_0 (-) z_1 becomes 1 - e^{y_1 - y_0}. With the sign it is
  // e^{y_1 - y_0} - 1, a generator since 1 comes before 0.
  const Poly d = ominus(z(0), z(1), n);
  const Laurent v = evaluate_beta_minus_one(d);
  EXPECT_EQ(v, Laurent::constant(1) - Laurent::character(1) * Laurent::character(0, -1));
  EXPECT_TRUE(certify_ktheory(ominus(z(0), z(1), n), 1, PrecOrder(2)).certified());
  EXPECT_FALSE(certify_ktheory(ominus(z(1), z(0), n), 1, PrecOrder(2)).certified());
  EXPECT_FALSE(certify_ktheory(ominus(z(0), z(1), n), 0, PrecOrder(2)).certified());
}

TEST(Positivity, ExampleEntryCertifies) {
  const int n = 6;
  for (const auto& ex : example_values()) {
    if (ex.w != "[2,1,0,-1]" || ex.mu != "(2,2)") continue;
    const int sign = Permutation::parse(ex.w).length() - parse_partition(ex.mu).size() - Permutation::parse(ex.v).length();
    EXPECT_TRUE(certify_ktheory(ex.value(n), sign, PrecOrder(2)).certified());
  }
}

TEST(Positivity, UndeterminedValueIsRejected) {
  // A truncated 1/(1 - 2 beta z_1) has no denominator of the admitted shape.
  Poly d;
  for (int k = 0; k <= 4; ++k) d += Poly(Integer(1 << k)) * var(Var::beta(), k) * var(Var::z(1), k);
  const auto cert = certify_ktheory(d.truncated(4), 0, PrecOrder(1));
  EXPECT_FALSE(cert.certified());
  EXPECT_EQ(cert.reason, "cannot determine the beta = -1 value at this truncation");
}

TEST(Positivity, JsonShape) {
  const auto ok = certify_cohomology(y(-1) - y(1), PrecOrder(2)).to_json();
  EXPECT_EQ(ok["status"], "certified");
  EXPECT_EQ(ok["generators"].size(), 3u);
  ASSERT_EQ(ok["expansion"].size(), 2u);
  EXPECT_EQ(ok["expansion"][0]["coeff"], 1);
  EXPECT_FALSE(ok.contains("reason"));
  const auto bad = certify_cohomology(y(1) - y(-1), PrecOrder(2)).to_json();
  EXPECT_EQ(bad["status"], "rejected");
  EXPECT_EQ(bad["reason"], "negative coefficient");
  EXPECT_TRUE(bad.contains("monomial"));
  EXPECT_EQ(bad["coeff"], -1);
}

TEST(Positivity, SuiteOnSmallWindow) {
  const auto r = positivity_suite(5, 2);
  EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
}
