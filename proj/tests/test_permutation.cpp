#include <gtest/gtest.h>

#include <set>

#include "bsp/permutation.hpp"

using namespace bsp;

namespace {

Permutation P(const char* s) { return Permutation::parse(s); }

// Independent Bruhat oracle: v <= w iff some subword of a reduced word of w
// is a reduced word of v.
bool subword_leq(const Permutation& v, const Permutation& w) {
  const auto word = w.reduced_word();
  const int n = static_cast<int>(word.size());
  const int lv = v.length();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != lv) continue;
    Permutation u;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) u = u * Permutation::simple(word[k]);
    if (u.length() == lv && u == v) return true;
  }
  return false;
}

}  // namespace

TEST(Permutation, ParsesOneLineNotation) {
  const auto w = P("[3,2]");
  EXPECT_EQ(w(2), 3);
  EXPECT_EQ(w(3), 2);
  EXPECT_EQ(w(7), 7);
  EXPECT_EQ(w.lo(), 1);
  EXPECT_EQ(w.hi(), 3);

  const auto u = P("[-1,2,1,-2,0]");
  EXPECT_EQ(u(-2), -1);
  EXPECT_EQ(u(-1), 2);
  EXPECT_EQ(u(0), 1);
  EXPECT_EQ(u(1), -2);
  EXPECT_EQ(u(2), 0);

  EXPECT_TRUE(P("[1,2]").is_identity());
  EXPECT_EQ(P("[1,2]").str(), "e");
}

TEST(Permutation, RejectsMalformedInput) {
  EXPECT_THROW(P("[1,1]"), DomainError);
  EXPECT_THROW(P("[1,3]"), DomainError);
  EXPECT_THROW(P("1,2"), DomainError);
  EXPECT_THROW(P("[1,x]"), DomainError);
}

TEST(Permutation, CanonicalWindowRoundTrip) {
  EXPECT_EQ(P("[0,2,1,3]").str(), "[2,1]");
  for (const auto& w : permutations_in_window(2)) {
    EXPECT_EQ(P(w.str().c_str()), w);
    EXPECT_EQ(Permutation::from_json(w.to_json()), w);
  }
}

TEST(Permutation, Length) {
  EXPECT_EQ(length(Permutation()), 0);
  EXPECT_EQ(length(P("[1,0]")), 1);
  EXPECT_EQ(length(P("[2,1,0,-1]")), 6);
}

TEST(Permutation, DimensionFunction) {
  const Permutation e;
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q) EXPECT_EQ(dimension_function(e, p, q), p > q ? p - q : 0);
  const auto w21 = grassmannian_of_partition(Partition({2, 1}));
  EXPECT_EQ(dimension_function(w21, 0, 2 - 1), 1);
  EXPECT_EQ(dimension_function(w21, 0, 1 - 2), 2);
  EXPECT_EQ(dimension_function(P("[3,2]"), 2, 2), 1);
}

TEST(Permutation, DimensionFunctionMatchesBruteForce) {
  for (const auto& w : permutations_in_window(2))
    for (int p = -4; p <= 4; ++p)
      for (int q = -4; q <= 4; ++q) {
        long long count = 0;
        for (int i = -40; i <= p; ++i) count += w(i) > q;
        EXPECT_EQ(w.dimension(p, q), count);
      }
}

TEST(Permutation, BruhatAgreesWithSubwordOrder) {
  const auto all = permutations_in_window(2);
  int pairs = 0;
  for (const auto& v : all)
    for (const auto& w : all) {
      EXPECT_EQ(bruhat_leq(v, w), subword_leq(v, w)) << v.str() << " <= " << w.str();
      ++pairs;
    }
  EXPECT_EQ(pairs, 576);
  EXPECT_TRUE(bruhat_leq(P("[1,0]"), P("[2,1,0,-1]")));
  EXPECT_FALSE(bruhat_leq(P("[2,1,0,-1]"), P("[1,0]")));
}

TEST(Permutation, ReducedWordMultipliesBack) {
  for (const auto& w : permutations_in_window(2)) {
    const auto word = w.reduced_word();
    EXPECT_EQ(static_cast<int>(word.size()), w.length());
    Permutation u;
    for (auto j : word) u = u * Permutation::simple(j);
    EXPECT_EQ(u, w);
  }
}

TEST(Permutation, GrassmannianBijection) {
  EXPECT_TRUE(grassmannian_of_partition(Partition()).is_identity());
  EXPECT_EQ(grassmannian_of_partition(Partition({1})), P("[1,0]"));
  for (int n = 0; n <= 6; ++n)
    for (const auto& mu : partitions_of(n)) {
      const auto w = grassmannian_of_partition(mu);
      EXPECT_TRUE(is_grassmannian(w));
      EXPECT_EQ(partition_of(w), mu);
      EXPECT_EQ(w.length(), mu.size());
      for (int i = 1; i <= mu.length(); ++i) EXPECT_EQ(w.dimension(0, mu[i] - i), i);
    }
  EXPECT_THROW(partition_of(P("[2,1,3]").times_simple(2)), DomainError);
}

TEST(Permutation, LongestElement) {
  EXPECT_EQ(longest(1), P("[1,0]"));
  EXPECT_EQ(longest(2), P("[2,1,0,-1]"));
  EXPECT_EQ(longest(3).length(), 15);
  EXPECT_THROW(longest(0), DomainError);
}

TEST(Permutation, Oslash) {
  EXPECT_EQ(oslash(Partition({1}), Permutation(), 1), P("[0,1,2,-1]"));
  EXPECT_EQ(oslash(Partition(), Permutation(), 1), x_perm(1));
  // The construction adds 2m^2 = l(x^(m)) on top of |mu| + l(v).
  for (int m = 1; m <= 2; ++m)
    for (const auto& mu : partitions_in_box(m, m))
      for (const auto& v : permutations_in_window(m))
        EXPECT_EQ(oslash(mu, v, m).length(), 2 * m * m + mu.size() + v.length());
  EXPECT_THROW(oslash(Partition({2}), Permutation(), 1), DomainError);
}

TEST(Permutation, XPerm) {
  EXPECT_EQ(x_perm(1), P("[-1,1,2,0]"));
  EXPECT_EQ(x_perm(2), P("[-3,-2,1,2,3,4,-1,0]"));
  for (int m = 1; m <= 3; ++m) {
    const auto x = x_perm(m);
    EXPECT_EQ(x.descents(), std::vector<long long>{m});
    EXPECT_EQ(x.length(), 2 * m * m);
  }
}

TEST(Permutation, VexillaryFromTriple) {
  for (int m = 1; m <= 3; ++m) {
    auto [w, lambda] = vexillary_from_triple(longest_triple(m));
    EXPECT_EQ(w, longest(m));
    std::vector<int> stair;
    for (int k = 2 * m - 1; k >= 1; --k) stair.push_back(k);
    EXPECT_EQ(lambda, Partition(stair));
  }
  auto [w2, lam2] = vexillary_from_triple(Triple{{1}, {0}, {1}});
  EXPECT_EQ(lam2, Partition({2}));
  EXPECT_EQ(w2, grassmannian_of_partition(Partition({2})));
  EXPECT_THROW(vexillary_from_triple(Triple{{1, 2}, {0, 0}, {0, 1}}), DomainError);
}

TEST(Permutation, MinimalWitnessAgreesWithBruteForce) {
  // The triple construction returns the shortest permutation meeting the
  // rank conditions; compare against a search over a padded window.
  const auto pool = permutations_in_window(3);
  const std::vector<Triple> triples = {
      Triple{{1}, {0}, {1}}, Triple{{1}, {0}, {0}}, Triple{{1}, {-1}, {1}},
      Triple{{1, 2}, {0, 0}, {1, -1}}, Triple{{2}, {1}, {0}}, Triple{{1, 2}, {-1, 1}, {1, 0}}};
  for (const auto& tau : triples) {
    auto [w, lambda] = vexillary_from_triple(tau);
    int best = 1 << 30;
    std::vector<Permutation> minimal;
    for (const auto& u : pool) {
      bool ok = true;
      for (int j = 0; j < tau.size(); ++j) ok = ok && u.dimension(tau.p[j], tau.q[j]) >= tau.k[j];
      if (!ok) continue;
      if (u.length() < best) best = u.length(), minimal = {u};
      else if (u.length() == best) minimal.push_back(u);
    }
    ASSERT_EQ(minimal.size(), 1u);
    EXPECT_EQ(minimal[0], w);
    EXPECT_EQ(w.length(), lambda.size());
  }
}

TEST(Permutation, TripleOfRecoversEveryVexillaryPermutation) {
  int vex = 0;
  for (const auto& w : permutations_in_window(3)) {
    auto tau = triple_of(w);
    if (w.is_identity()) continue;
    EXPECT_EQ(tau.has_value(), is_vexillary(w)) << w.str();
    if (tau) {
      ++vex;
      EXPECT_EQ(vexillary_from_triple(*tau).first, w);
    }
  }
  EXPECT_GT(vex, 0);
  const auto tau = triple_of(P("[2,1,0,-1]"));
  ASSERT_TRUE(tau);
  EXPECT_EQ(*tau, longest_triple(2));
  const auto t21 = triple_of(P("[0,2,-1,1]"));
  ASSERT_TRUE(t21);
  EXPECT_EQ(*t21, (Triple{{1, 2}, {0, 0}, {1, -1}}));
}

TEST(Partition, ParseAndPrint) {
  EXPECT_EQ(Partition::parse("(2,2)").size(), 4);
  EXPECT_EQ(Partition::parse("()").length(), 0);
  EXPECT_EQ(Partition::parse("(3,1)").str(), "(3,1)");
  EXPECT_THROW(Partition::parse("(1,2)"), DomainError);
  EXPECT_EQ(partitions_of(4).size(), 5u);
  EXPECT_EQ(partitions_in_box(2, 2).size(), 6u);
}
