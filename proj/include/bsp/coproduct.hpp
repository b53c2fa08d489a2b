#pragma once

// The coproduct c_k -> sum c_{k-i} c'_i, expansion of Delta(F_w) in the
// basis F_mu(c) F_v(c'; x), and the product route through mu (/)_m v.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expansion.hpp"
#include "families.hpp"

namespace bsp {

/// Ring homomorphism c_k -> sum_{i=0}^k c_{k-i} c'_i, fixing x, y, z, beta.
inline Poly delta(const Poly& f) {
  if (f.contains_family(Family::CPrime)) throw DomainError("delta expects a polynomial without c' variables");
  const int kmax = detail::max_index(f, Family::C);
  std::map<Var, Poly> assign;
  for (int k = 1; k <= kmax; ++k) {
    Poly img = var(Var::c(k)) + var(Var::cp(k));
    for (int i = 1; i < k; ++i) img += var(Var::c(k - i)) * var(Var::cp(i));
    assign[Var::c(k)] = img;
  }
  return substitute(f, assign);
}

struct PairKey {
  Partition mu;
  Permutation v;
  auto operator<=>(const PairKey& o) const {
    if (auto c = mu.size() + v.length() <=> o.mu.size() + o.v.length(); c != 0) return c;
    if (auto c = mu <=> o.mu; c != 0) return c;
    return v <=> o.v;
  }
  bool operator==(const PairKey&) const = default;
};

/// Coefficients of Delta F_w in the pair basis, keyed by (mu, v).
struct CoproductTable {
  Permutation w;
  Theory theory = Theory::H;
  int m = 1;
  int trunc = kDefaultTrunc;
  std::map<PairKey, Poly> entries;

  Poly at(const Partition& mu, const Permutation& v) const {
    auto it = entries.find(PairKey{mu, v});
    if (it != entries.end()) return it->second;
    return theory == Theory::K ? Poly::zero(trunc) : Poly();
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, coeff] : entries)
      rows.push_back({{"mu", key.mu.parts()}, {"v", key.v.str()}, {"coeff", coeff.str()}, {"poly", coeff.to_json()}});
    nlohmann::json j{{"w", w.str()}, {"theory", theory_name(theory)}, {"m", m}, {"entries", rows}};
    j["N"] = theory == Theory::K ? nlohmann::json(trunc) : nlohmann::json(nullptr);
    return j;
  }
  static CoproductTable from_json(const nlohmann::json& j) {
    CoproductTable t;
    t.w = Permutation::parse(j.at("w").get<std::string>());
    t.theory = parse_theory(j.at("theory").get<std::string>());
    t.m = j.at("m").get<int>();
    if (!j.at("N").is_null()) t.trunc = j.at("N").get<int>();
    for (const auto& row : j.at("entries"))
      t.entries[PairKey{Partition(row.at("mu").get<std::vector<int>>()), Permutation::parse(row.at("v").get<std::string>())}] =
          Poly::from_json(row.at("poly"));
    return t;
  }
};

namespace detail {

/// s_mu(c) = det(c_{mu_i - i + j}).
inline Poly schur_in_c(const Partition& mu, Family fam = Family::C) {
  const int s = mu.length();
  std::vector<std::vector<Poly>> a(s, std::vector<Poly>(s));
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j <= s; ++j) {
      const int idx = mu[i] - i + j;
      a[i - 1][j - 1] = idx == 0 ? Poly(1) : idx < 0 ? Poly() : var(Var(fam, idx));
    }
  return determinant(a);
}

inline Poly to_cprime(const Poly& f) {
  return rename(f, [](Var v) { return v.family() == Family::C ? Var::cp(v.index()) : v; });
}

inline Poly kill_scalars(const Poly& f) {
  return f.select([](const Monomial& m) {
           for (const auto& fac : m.factors()) {
             const Family fam = Var::from_id(fac.var).family();
             if (fam == Family::Y || fam == Family::Z || fam == Family::Beta) return false;
           }
           return true;
         })
      .mark_exact();
}

inline RingSpec generic_ring(Theory theory, int trunc) { return RingSpec{theory, trunc, std::nullopt}; }

}  // namespace detail

/// Coefficients of g in the basis F_mu(c; .) F_v(c'; x; .) with v in S_(-m,m].
inline CoproductTable expand_pair_basis(const Poly& g, Theory theory, int m, int trunc,
                                        Route route = Route::Vexillary) {
  const RingSpec ring = detail::generic_ring(theory, trunc);
  CoproductTable table;
  table.theory = theory;
  table.m = m;
  table.trunc = trunc;

  // Stage 1: expand in F_mu(c; .), with c', x, y/z as scalars.
  std::vector<Partition> mus;
  EchelonBasis grass([&](int d) {
    std::vector<EchelonBasis::Candidate> out;
    for (const auto& mu : partitions_of(d)) {
      out.push_back({mu.str(), [mu] { return detail::schur_in_c(mu); },
                     [mu, ring, route] { return family(grassmannian_of_partition(mu), ring, route); }});
      mus.push_back(mu);
    }
    return out;
  });
  const Expansion first = expand(g, [](Var v) { return v.family() != Family::C; }, grass);

  // Stage 2: expand each F_mu coefficient in F_v(c'; x; .), scalars y/z.
  std::map<int, std::vector<Permutation>> by_length;
  for (const auto& v : permutations_in_window(m)) by_length[v.length()].push_back(v);
  std::vector<Permutation> vs;
  EchelonBasis flags([&](int d) {
    std::vector<EchelonBasis::Candidate> out;
    for (const auto& v : by_length[d]) {
      out.push_back({v.str(),
                     [v, route] {
                       return detail::kill_scalars(detail::to_cprime(family(v, detail::generic_ring(Theory::H, 0), route)));
                     },
                     [v, ring, route] { return detail::to_cprime(family(v, ring, route)); }});
      vs.push_back(v);
    }
    return out;
  });
  // Build the stage-1 label index before expanding stage 2.
  std::map<std::string, Partition> mu_of;
  for (const auto& mu : mus) mu_of.emplace(mu.str(), mu);
  for (const auto& [k, fmu] : first.coefficients) {
    const Partition mu = mu_of.at(grass.label(k));
    const Expansion second =
        expand(fmu, [](Var v) { return v.family() == Family::Y || v.family() == Family::Z; }, flags);
    for (const auto& [kv, coeff] : second.coefficients)
      table.entries[PairKey{mu, Permutation::parse(flags.label(kv))}] = coeff;
  }
  return table;
}

/// d-hat / c-hat table of w by expanding Delta F_w.
inline CoproductTable coproduct_coefficients(const Permutation& w, Theory theory, std::optional<int> window = std::nullopt,
                                             int trunc = kDefaultTrunc, Route route = Route::Vexillary) {
  const int m = window.value_or(w.min_window());
  if (!w.fits_window(m)) throw DomainError("window too small for " + w.str());
  const Poly g = delta(family(w, detail::generic_ring(theory, trunc), route, m));
  CoproductTable t = expand_pair_basis(g, theory, m, trunc, route);
  t.w = w;
  return t;
}

// ---------------------------------------------------------------------------
// Product route

namespace detail {

/// Lehmer code of u on positions lo+1 .. lo+n.
inline std::vector<int> lehmer_code(const Permutation& u, long long lo, int n) {
  std::vector<int> code(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) code[a] += u(lo + 1 + a) > u(lo + 1 + b);
  return code;
}

inline std::optional<Permutation> from_lehmer_code(const std::vector<int>& code, long long lo) {
  const int n = static_cast<int>(code.size());
  std::vector<long long> avail;
  for (int a = 0; a < n; ++a) avail.push_back(lo + 1 + a);
  std::vector<long long> imgs;
  for (int a = 0; a < n; ++a) {
    if (code[a] < 0 || code[a] >= static_cast<int>(avail.size())) return std::nullopt;
    imgs.push_back(avail[code[a]]);
    avail.erase(avail.begin() + code[a]);
  }
  return Permutation::from_window(lo, imgs);
}

/// Keep only terms of z-degree <= cap.
inline Poly cap_z_degree(const Poly& f, int cap) {
  return f.select([cap](const Monomial& m) {
    int e = 0;
    for (const auto& fac : m.factors())
      if (Var::from_id(fac.var).family() == Family::Z) e += fac.exp;
    return e <= cap;
  });
}

}  // namespace detail

/// Inverse of mu (/)_m v, when u has that shape.
inline std::optional<std::pair<Partition, Permutation>> split_oslash(const Permutation& u, int m) {
  std::vector<long long> wmu, v;
  for (long long j = -m + 1; j <= 0; ++j) wmu.push_back(u(j - m) + m);
  for (long long j = 1; j <= m; ++j) wmu.push_back(u(j + m) + m);
  for (long long j = -m + 1; j <= m; ++j) v.push_back(u(j) - m);
  try {
    const Permutation pw = Permutation::from_window(-m, wmu);
    const Permutation pv = Permutation::from_window(-m, v);
    if (!is_grassmannian(pw)) return std::nullopt;
    const Partition mu = partition_of(pw);
    if (oslash(mu, pv, m) != u) return std::nullopt;
    return std::make_pair(mu, pv);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

/// Position j of the doubled window (-2m, 2m] read through bold z
/// (tilde = false) or bold z tilde (tilde = true).
inline int doubled_z_index(int j, int m, bool tilde) {
  if (j <= -2 * m || j > 2 * m) throw DomainError("z index outside the doubled window");
  if (!tilde) return j <= 0 ? j + m : j - m;
  return j <= -m ? j + m : j <= m ? j : j - m;
}

/// Expansion of a packed polynomial in the finite Grothendieck polynomials
/// G_u of `basis`, with coefficients in z and beta. Slices (z-degree, beta
/// power) are cleared in increasing order. Within a slice each scalar
/// monomial carries a combination of Schubert polynomials, peeled through
/// their lex-smallest monomials x^code(u) (x_{-M+1} weighted first).
inline std::map<Permutation, PackedPoly> expand_finite(PackedPoly residual, FiniteGrothendieck& basis, int big_m) {
  const PackedLayout& layout = basis.layout();
  const PackedLimits& limits = basis.limits();
  std::vector<int> x_slots;
  PackedKey x_mask = 0;
  for (int i = -big_m + 1; i <= big_m; ++i) {
    x_slots.push_back(layout.slot(Var::x(i)));
    x_mask |= layout.field_mask(x_slots.back());
  }
  auto slice = [&](PackedKey k) {
    int e = 0;
    for (int s : limits.capped) e += layout.exponent(k, s);
    return std::pair<int, int>{e, layout.exponent(k, *limits.beta_slot)};
  };

  std::map<Permutation, PackedPoly> out;
  std::optional<std::pair<int, int>> last;
  while (!residual.empty()) {
    std::pair<int, int> key{1 << 30, 1 << 30};
    for (const auto& [k, c] : residual.terms()) key = std::min(key, slice(k));
    if (last && key <= *last) throw ConsistencyError("finite expansion did not clear a slice");
    last = key;

    std::map<PackedKey, PackedPoly> groups;
    for (const auto& [k, c] : residual.terms())
      if (slice(k) == key) groups[k & ~x_mask].add(k & x_mask, c);

    std::map<Permutation, std::vector<std::pair<PackedKey, std::int64_t>>> step;
    for (auto& [scalar, part] : groups) {
      while (!part.empty()) {
        PackedKey best = part.terms().begin()->first;
        for (const auto& [k, c] : part.terms()) best = std::min(best, k);
        std::vector<int> code;
        for (int s : x_slots) code.push_back(layout.exponent(best, s));
        auto u = detail::from_lehmer_code(code, -big_m);
        if (!u) throw DomainError("not in the span of finite Grothendieck polynomials: " + layout.decode(best).str());
        const PackedPoly& lead = basis.leading(*u);
        const std::int64_t top = lead.coeff(best), c = part.coeff(best);
        if (top != 1 && top != -1) throw ConsistencyError("unexpected leading coefficient for " + u->str());
        const std::int64_t a = top * c;
        part.add_scaled(lead, -a, 0, layout, PackedLimits{});
        step[*u].emplace_back(scalar, a);
      }
    }
    for (const auto& [u, coeffs] : step) {
      const PackedPoly& full = basis.packed(u);
      auto& acc = out[u];
      for (const auto& [scalar, a] : coeffs) {
        residual.add_scaled(full, -a, scalar, layout, limits);
        acc.add(scalar, a);
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
  return out;
}

/// d-hat table of w computed as the coefficients of G_{mu (/) v}(bold c; x; bold z)
/// in G_w(bold c~; x; bold z~) * G_{x^(m)}(bold c; x; bold z). Everything lives
/// in the doubled window (-2m, 2m] with the finite base there, so each factor
/// is a finite double Grothendieck polynomial. Terms of z-degree above
/// l(w) + N cannot reach a coefficient term of beta power <= N and are dropped.
/// Basis elements that are not of the form mu (/) v are reported in `others`.
struct ProductRouteResult {
  CoproductTable table;
  std::map<Permutation, Poly> others;
};

inline ProductRouteResult product_route_expansion(const Permutation& w, int m, int trunc) {
  if (!w.fits_window(m)) throw DomainError("window too small for " + w.str());
  const int big_m = 2 * m;
  const int cap = w.length() + trunc;
  FiniteGrothendieck plain(big_m, trunc, [m](int j) { return doubled_z_index(j, m, false); }, cap);
  FiniteGrothendieck tilde(big_m, trunc, [m](int j) { return doubled_z_index(j, m, true); }, cap);
  // Both layouts list x, then the z targets (-m, m], then beta.
  const PackedPoly product =
      PackedPoly::product(tilde.packed(w), plain.packed(x_perm(m)), plain.layout(), plain.limits());
  ProductRouteResult res;
  res.table.w = w;
  res.table.theory = Theory::K;
  res.table.m = m;
  res.table.trunc = trunc;
  for (const auto& [u, coeff] : expand_finite(product, plain, big_m)) {
    Poly c = coeff.to_poly(plain.layout(), trunc);
    if (auto split = split_oslash(u, m)) res.table.entries[PairKey{split->first, split->second}] = std::move(c);
    else res.others[u] = std::move(c);
  }
  return res;
}

namespace detail {

/// Evaluation x_i -> (-)z_{t(i)} of packed polynomials from a
/// FiniteGrothendieck, truncated by its limits.
class MinusZEvaluator {
 public:
  MinusZEvaluator(FiniteGrothendieck& fg, int big_m, const std::function<int(int)>& target)
      : layout_(fg.layout()), limits_(fg.limits()) {
    for (int i = -big_m + 1; i <= big_m; ++i) {
      const int xs = layout_.slot(Var::x(i));
      x_slots_.push_back(xs);
      x_mask_ |= layout_.field_mask(xs);
      to_z_.push_back(layout_.unit(layout_.slot(Var::z(target(i)))));
    }
  }

  PackedPoly operator()(const PackedPoly& f) {
    // Group by the exponent vector collapsed onto the z targets.
    std::map<PackedKey, PackedPoly> groups;
    for (const auto& [k, c] : f.terms()) {
      PackedKey ev = 0;
      for (std::size_t n = 0; n < x_slots_.size(); ++n)
        ev = layout_.mul(ev, to_z_[n] * static_cast<unsigned>(layout_.exponent(k, x_slots_[n])));
      groups[ev].add(k & ~x_mask_, c);
    }
    PackedPoly out;
    for (const auto& [ev, scalars] : groups) {
      const PackedPoly prod = PackedPoly::product(minus_z_power(ev), scalars, layout_, limits_);
      for (const auto& [k, c] : prod.terms()) out.add(k, c);
    }
    return out;
  }

 private:
  // prod_k ((-)z_k)^{e_k}, with (-)z = -z / (1 + beta z).
  const PackedPoly& minus_z_power(PackedKey ev) {
    if (auto it = powers_.find(ev); it != powers_.end()) return it->second;
    PackedPoly acc;
    acc.add(0, 1);
    for (int s : limits_.capped) {
      const int e = layout_.exponent(ev, s);
      if (e == 0) continue;
      PackedPoly single;
      const PackedKey z = layout_.unit(s), b = layout_.unit(*limits_.beta_slot);
      for (int j = 0; j <= limits_.beta_max; ++j) {
        const Integer bin = binomial(e + j - 1, j);
        const std::int64_t c = std::stoll(bin.str()) * (((e + j) % 2) ? -1 : 1);
        const PackedKey key = z * static_cast<unsigned>(e + j) + b * static_cast<unsigned>(j);
        if (limits_.keep(layout_, key)) single.add(key, c);
      }
      acc = PackedPoly::product(acc, single, layout_, limits_);
    }
    return powers_.emplace(ev, std::move(acc)).first->second;
  }

  const PackedLayout& layout_;
  const PackedLimits& limits_;
  std::vector<int> x_slots_;
  std::vector<PackedKey> to_z_;
  PackedKey x_mask_ = 0;
  std::map<PackedKey, PackedPoly> powers_;
};

}  // namespace detail

/// d-hat table of w by the product route, reading each coefficient off with
/// the dual functional f -> (pi_{a_1} ... then pi_{a_l} f)(x = (-)z), where
/// a is a reduced word of u^{-1}: it sends G_v to (-beta)^(l(u)-l(v)) when
/// v reduces to e along a, and to 0 otherwise. The product is never formed:
/// G_{x^(m)} is symmetric in x_i, x_{i+1} for every i but m, so pi_i passes
/// through it, and at the exceptional letters the Leibniz rule
/// pi_i(fg) = pi_i(f) g + (1 + beta x_i) s_i(f) d_i(g) splits the term.
/// Only coefficients of mu (/) v with mu in the m-box are solved for; the
/// expansion by peeling (product_route_expansion) checks that nothing else
/// occurs.
inline CoproductTable coproduct_via_product_route(const Permutation& w, int m, int trunc) {
  if (!w.fits_window(m)) throw DomainError("window too small for " + w.str());
  const int big_m = 2 * m;
  const int cap = w.length() + trunc;
  auto plain_z = [m](int j) { return doubled_z_index(j, m, false); };
  FiniteGrothendieck plain(big_m, trunc, plain_z, cap);
  FiniteGrothendieck tilde(big_m, trunc, [m](int j) { return doubled_z_index(j, m, true); }, cap);
  const PackedLayout& layout = plain.layout();
  const PackedLimits& limits = plain.limits();
  const int beta_slot = *limits.beta_slot;
  auto xs = [&](long long i) { return layout.slot(Var::x(static_cast<int>(i))); };

  // Candidates mu (/) v, shortest first.
  struct Candidate {
    Partition mu;
    Permutation v, u;
    std::vector<long long> word;
  };
  std::vector<Candidate> cands;
  for (const auto& mu : partitions_in_box(m, m))
    for (const auto& v : permutations_in_window(m))
      if (mu.size() + v.length() <= w.length() + trunc) {
        Permutation u = oslash(mu, v, m);
        cands.push_back({mu, v, u, u.inverse().reduced_word()});
      }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.u.length() != b.u.length()) return a.u.length() < b.u.length();
    return a.word < b.word;
  });

  // d_j ... applied to G_{x^(m)}, keyed by the letters used.
  std::map<std::vector<long long>, PackedPoly> bpoly{{{}, plain.packed(x_perm(m))}};
  std::map<std::pair<std::vector<long long>, long long>, bool> bsym;
  detail::MinusZEvaluator eval(plain, big_m, plain_z);
  std::map<std::vector<long long>, PackedPoly> beval;

  struct Term {
    PackedPoly a;
    std::vector<long long> b;
  };
  using State = std::vector<Term>;
  auto apply = [&](const State& st, long long i) {
    std::map<std::vector<long long>, PackedPoly> next;
    auto push = [&](const std::vector<long long>& key, PackedPoly&& p) {
      if (p.empty()) return;
      auto [it, inserted] = next.try_emplace(key, std::move(p));
      if (!inserted)
        for (const auto& [k, c] : p.terms()) it->second.add(k, c);
    };
    for (const auto& t : st) {
      const PackedPoly& g = bpoly.at(t.b);
      push(t.b, packed_isobaric(t.a, xs(i), xs(i + 1), beta_slot, layout, limits));
      auto sym = bsym.find({t.b, i});
      if (sym == bsym.end()) sym = bsym.emplace(std::make_pair(t.b, i), packed_symmetric(g, xs(i), xs(i + 1), layout)).first;
      if (sym->second) continue;
      std::vector<long long> nb = t.b;
      nb.push_back(i);
      if (!bpoly.count(nb)) bpoly.emplace(nb, packed_divided_difference(g, xs(i), xs(i + 1), layout));
      if (bpoly.at(nb).empty()) continue;
      PackedPoly moved = packed_swap(t.a, xs(i), xs(i + 1), layout);
      PackedPoly lifted = moved;
      lifted.add_scaled(moved, 1, layout.unit(xs(i)) + layout.unit(beta_slot), layout, limits);
      push(nb, std::move(lifted));
    }
    State out;
    for (auto& [b, a] : next) out.push_back({std::move(a), b});
    return out;
  };
  auto evaluate = [&](const State& st) {
    PackedPoly total;
    for (const auto& t : st) {
      auto it = beval.find(t.b);
      if (it == beval.end()) it = beval.emplace(t.b, eval(bpoly.at(t.b))).first;
      if (it->second.empty()) continue;
      const PackedPoly prod = PackedPoly::product(eval(t.a), it->second, layout, limits);
      for (const auto& [k, c] : prod.terms()) total.add(k, c);
    }
    return total;
  };

  // Walk the words as a trie, keeping the states along the current path.
  std::vector<State> path{State{Term{tilde.packed(w), {}}}};
  std::vector<long long> prefix;
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cands[a].word < cands[b].word; });
  std::map<Permutation, PackedPoly> values;
  for (std::size_t idx : order) {
    const auto& word = cands[idx].word;
    std::size_t common = 0;
    while (common < prefix.size() && common < word.size() && prefix[common] == word[common]) ++common;
    path.resize(common + 1);
    prefix.resize(common);
    for (std::size_t n = common; n < word.size(); ++n) {
      path.push_back(apply(path.back(), word[n]));
      prefix.push_back(word[n]);
    }
    values[cands[idx].u] = evaluate(path.back());
  }

  // Triangular solve, shortest u first.
  CoproductTable table;
  table.w = w;
  table.theory = Theory::K;
  table.m = m;
  table.trunc = trunc;
  std::vector<std::pair<const Candidate*, PackedPoly>> solved;
  for (const auto& cand : cands) {
    PackedPoly a = values.at(cand.u);
    for (const auto& [prev, av] : solved) {
      Permutation cur = prev->u;
      int drops = 0;
      for (long long i : cand.word) {
        if (cur(i) > cur(i + 1)) cur = cur.times_simple(i);
        else ++drops;
      }
      if (!cur.is_identity()) continue;
      // a -= (-beta)^drops * av
      const PackedKey shift = layout.unit(beta_slot) * static_cast<unsigned>(drops);
      a.add_scaled(av, drops % 2 ? 1 : -1, shift, layout, limits);
    }
    if (!a.empty()) table.entries[PairKey{cand.mu, cand.v}] = a.to_poly(layout, trunc);
    solved.emplace_back(&cand, std::move(a));
  }
  return table;
}

}  // namespace bsp
