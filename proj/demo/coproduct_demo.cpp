// Walks through one coproduct computation: the Grothendieck polynomial of
// w = [2,1,0,-1], its coefficient table, and a positivity certificate.

#include <iostream>

#include "bsp/bsp.hpp"

using namespace bsp;

int main() {
  const auto w = Permutation::parse("[2,1,0,-1]");
  const int n = 6;
  std::cout << "w = " << w.str() << ", length " << w.length() << "\n";
  std::cout << "S_w has " << schubert(w).size() << " terms; G_w to order " << n << " has " << grothendieck(w, n).size()
            << " terms\n\n";

  const auto h = coproduct_coefficients(w, Theory::H);
  std::cout << "cohomology table (" << h.entries.size() << " entries), e.g.\n";
  for (const auto& [key, p] : h.entries)
    if (key.mu.size() == 2) std::cout << "  (" << key.mu.str() << ", " << key.v.str() << ") : " << p.str() << "\n";

  const auto k = coproduct_coefficients(w, Theory::K, std::nullopt, n);
  const Partition mu({2, 2});
  const auto v = Permutation::parse("[1,0,-1]");
  const Poly d = k.at(mu, v);
  std::cout << "\nK-theory table has " << k.entries.size() << " entries; the (2,2), [1,0,-1] entry:\n  " << d.str() << "\n";
  std::cout << "at beta = -1:\n  " << evaluate_beta_minus_one(d).str() << "\n";

  const int sign = mu.size() + v.length() - w.length();
  const auto cert = certify_ktheory(d, sign, PrecOrder(k.m));
  std::cout << "\ncertificate (generators " << cert.generators.size() << "):\n";
  for (const auto& [m, c] : cert.expansion.sorted_terms()) std::cout << "  " << c << " * " << cert.monomial_name(m) << "\n";

  const auto all = certify_table(k);
  std::cout << "\nall " << all.rows.size() << " entries certified: " << (all.all_certified() ? "yes" : "no") << "\n";
}
