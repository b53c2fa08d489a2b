#include <gtest/gtest.h>

#include "bsp/suites.hpp"

using namespace bsp;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }

bool same(const Poly& a, const Poly& b) {
  const auto n = Poly::min_trunc(a.trunc(), b.trunc());
  return (a.truncated(n) - b.truncated(n)).is_zero();
}

}  // namespace

TEST(Families, BaseCases) {
  EXPECT_EQ(schubert(P("[1,0]")), var(Var::c(1)));
  EXPECT_EQ(schubert(P("[1,2]")), Poly(1));
  EXPECT_EQ(grothendieck(Permutation(), 4), Poly(1).truncated(4));
  const Poly g = grothendieck(P("[1,0]"), 4);
  EXPECT_EQ(g, Poly::parse("c[1] + b*c[2] + b^2*c[3] + b^3*c[4] + b^4*c[5]", 4));
}

TEST(Families, DegreeEqualsLength) {
  for (const auto& w : permutations_in_window(2)) {
    EXPECT_EQ(schubert(w).homogeneous_degree(), w.length()) << w.str();
    EXPECT_EQ(grothendieck(w, 4).homogeneous_degree(), w.length()) << w.str();
  }
}

TEST(Families, RoutesAgree) {
  for (const auto& w : permutations_in_window(2)) {
    EXPECT_EQ(schubert(w, 2, Route::Vexillary), schubert(w, 2, Route::Longest)) << w.str();
    EXPECT_TRUE(same(grothendieck(w, 5, 2, Route::Vexillary), grothendieck(w, 5, 2, Route::Longest))) << w.str();
  }
}

TEST(Families, VexillaryFastPathMatchesRecursion) {
  const auto w = grassmannian_of_partition(Partition({2, 1}));
  const auto tau = triple_of(w);
  ASSERT_TRUE(tau);
  EXPECT_TRUE(same(vexillary_fast_path(*tau, RingSpec{Theory::K, 4, std::nullopt}), grothendieck(w, 4, std::nullopt, Route::Longest)));
}

TEST(Families, GrassmannianMembersHaveNoX) {
  for (const auto& mu : partitions_in_box(2, 2)) {
    const auto w = grassmannian_of_partition(mu);
    EXPECT_FALSE(schubert(w).contains_family(Family::X)) << mu.str();
    EXPECT_FALSE(grothendieck(w, 4).contains_family(Family::X)) << mu.str();
  }
}

TEST(Families, WindowStability) {
  for (const char* s : {"[2,1]", "[0,-1,2,1]", "[2,0,1]", "[1,-1,2,0]"}) {
    const auto w = P(s);
    EXPECT_EQ(schubert(w, 2), schubert(w, 3)) << s;
    EXPECT_EQ(grothendieck(w, 5, 2), grothendieck(w, 5, 3)) << s;
  }
}

TEST(Families, BetaZeroGivesSchubert) {
  EXPECT_EQ(beta_zero(grothendieck(P("[1,0]"), 4)), var(Var::c(1)));
  EXPECT_EQ(beta_zero(Poly(1)), Poly(1));
  for (const auto& w : permutations_in_window(2))
    if (w.length() <= 3) EXPECT_EQ(beta_zero(grothendieck(w, 4, 2)), schubert(w, 2)) << w.str();
}

TEST(Families, FiniteSpecializations) {
  // Gamma_[2,1] = x_1 + z_1 - x_1 z_1.
  EXPECT_EQ(specialize_finite(grothendieck(P("[2,1]"), 4), Theory::K), Poly::parse("x[1] + z[1] - x[1]*z[1]"));
  // Finite double Schubert of s_1 is x_1 - y_1.
  EXPECT_EQ(specialize_finite(schubert(P("[2,1]")), Theory::H), Poly::parse("x[1] - y[1]"));
  EXPECT_EQ(specialize_finite(schubert(Permutation()), Theory::H), Poly(1));
  const auto r = dominant_suite(3);
  EXPECT_TRUE(r.ok());
}

TEST(Families, FiniteGrothendieckMatchesFiniteBase) {
  const int n = 4, big_m = 2;
  FiniteGrothendieck fg(big_m, n);
  for (const auto& u : permutations_in_window(big_m)) {
    const Poly expect = family(u, RingSpec{Theory::K, n, big_m}, Route::Vexillary, big_m);
    EXPECT_TRUE(same(fg(u), expect)) << u.str();
  }
}

TEST(Families, DominantProductFormula) {
  const int n = 6;
  const auto u = P("[2,1,0,-1]");
  ASSERT_TRUE(FiniteGrothendieck::is_dominant(u, 2));
  Poly expect = Poly(1).truncated(n);
  for (long long i = -1; i <= 2; ++i)
    for (long long j = -1; j <= 2; ++j)
      if (j < u(i) && i < u.inverse()(j)) expect = expect * oplus(var(Var::x(static_cast<int>(i))), var(Var::z(static_cast<int>(j))));
  EXPECT_TRUE(same(FiniteGrothendieck(2, n)(u), expect));
}

TEST(Families, BackStableLiftHasNoChernClasses) {
  const Poly g = to_back_stable(grothendieck(P("[1,0]"), 4), 4, 1);
  EXPECT_FALSE(g.contains_family(Family::C));
  EXPECT_TRUE(g.contains_family(Family::X));
  EXPECT_EQ(to_back_stable(Poly(1).truncated(4), 4, 1), Poly(1).truncated(4));
}

TEST(Families, WindowTooSmall) {
  EXPECT_THROW(schubert(P("[3,1,2]"), 1), DomainError);
}

TEST(Families, CacheReturnsIdenticalValues) {
  FamilyCache cache;
  const RingSpec ring{Theory::K, 4, std::nullopt};
  const auto w = P("[2,0,1]");
  const Poly a = family(w, ring, Route::Vexillary, std::nullopt, &cache);
  EXPECT_GT(cache.size(), 0u);
  EXPECT_EQ(family(w, ring, Route::Vexillary, std::nullopt, &cache), a);
  EXPECT_EQ(family(w, ring, Route::Vexillary, std::nullopt, nullptr), a);
}
