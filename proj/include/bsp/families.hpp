#pragma once

// Enriched Schubert and Grothendieck polynomials for arbitrary w, their
// specializations, and the vexillary determinantal fast path.

#include <deque>
#include <functional>
#include <mutex>
#include <set>
#include <map>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "operators.hpp"
#include "packed.hpp"
#include "permutation.hpp"
#include "poly.hpp"
#include "series.hpp"

namespace bsp {

/// How a family member is built.
///   Vexillary: walk up by ascents to the nearest vexillary permutation, use
///     its determinant, then come back down with d_i / pi_i.
///   Longest: start from the longest element of the window and descend.
enum class Route { Vexillary, Longest };

inline std::string route_name(Route r) { return r == Route::Vexillary ? "vexillary" : "longest"; }
inline Route parse_route(std::string_view s) {
  if (s == "vexillary") return Route::Vexillary;
  if (s == "longest") return Route::Longest;
  throw DomainError("route must be vexillary or longest");
}

/// Determinant with vexillary row series.
inline Poly vexillary_fast_path(const Triple& tau, const RingSpec& ring) {
  const Partition lambda = tau.partition();
  const int s = lambda.length();
  std::vector<TSeries> rows;
  for (int i = 1; i <= s; ++i) rows.push_back(row_series_vexillary(tau, i, ring));
  std::vector<std::vector<Poly>> a(s, std::vector<Poly>(s));
  for (int i = 1; i <= s; ++i)
    for (int j = 1; j <= s; ++j) a[i - 1][j - 1] = groth_entry(i, j, lambda, rows[i - 1], ring);
  return determinant(a).truncated(ring.trunc_opt());
}

namespace detail {

inline Poly family_unit(const RingSpec& ring) { return Poly(1).truncated(ring.trunc_opt()); }

/// Breadth-first search over w s_i ascents inside (-m, m] for a vexillary
/// permutation; returns it together with the ascent indices in order.
inline std::pair<Permutation, std::vector<long long>> nearest_vexillary(const Permutation& w, int m) {
  std::deque<Permutation> queue{w};
  std::map<Permutation, std::pair<Permutation, long long>> parent;
  std::set<Permutation> seen{w};
  while (!queue.empty()) {
    Permutation u = queue.front();
    queue.pop_front();
    if (triple_of(u)) {
      std::vector<long long> steps;
      for (Permutation cur = u; cur != w;) {
        const auto& [prev, i] = parent.at(cur);
        steps.push_back(i);
        cur = prev;
      }
      std::reverse(steps.begin(), steps.end());
      return {u, steps};
    }
    for (long long i = -m + 1; i < m; ++i) {
      if (u(i) > u(i + 1)) continue;
      Permutation up = u.times_simple(i);
      if (seen.insert(up).second) {
        parent.emplace(up, std::make_pair(u, i));
        queue.push_back(up);
      }
    }
  }
  throw ConsistencyError("no vexillary permutation above " + w.str());
}

}  // namespace detail

/// Thread-safe memo of family members: concurrent reads, serialized inserts;
/// racing inserts of the same key store identical values.
class FamilyCache {
 public:
  std::optional<Poly> get(const std::string& key) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void put(const std::string& key, const Poly& value) {
    std::unique_lock lock(mu_);
    map_.try_emplace(key, value);
  }
  void clear() {
    std::unique_lock lock(mu_);
    map_.clear();
  }
  std::size_t size() const {
    std::shared_lock lock(mu_);
    return map_.size();
  }

  static FamilyCache& global() {
    static FamilyCache cache;
    return cache;
  }

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Poly> map_;
};

inline std::string family_key(const Permutation& w, const RingSpec& ring, Route route, int m) {
  std::string key = w.str() + "|" + theory_name(ring.theory) + "|" + route_name(route) + "|m=" + std::to_string(m);
  if (ring.theory == Theory::K) key += "|N=" + std::to_string(ring.trunc);
  if (ring.finite_base) key += "|base=" + std::to_string(*ring.finite_base);
  if (ring.c_family != Family::C) key += "|c'";
  return key;
}

/// E S_w (theory H) or E G^beta_w (theory K) in the given ring.
/// `window` defaults to the smallest (-m, m] containing w.
inline Poly family(const Permutation& w, const RingSpec& ring, Route route = Route::Vexillary,
                   std::optional<int> window = std::nullopt, FamilyCache* cache = &FamilyCache::global()) {
  const int m = window.value_or(w.min_window());
  if (!w.fits_window(m)) throw DomainError("window (" + std::to_string(-m) + "," + std::to_string(m) + "] too small for " + w.str());
  if (ring.finite_base && *ring.finite_base < m) throw DomainError("finite base smaller than the window");
  const std::string key = family_key(w, ring, route, m);
  if (cache)
    if (auto hit = cache->get(key)) return *hit;

  Poly result;
  if (w.is_identity()) {
    result = detail::family_unit(ring);
  } else if (route == Route::Vexillary) {
    if (auto tau = triple_of(w)) {
      result = vexillary_fast_path(*tau, ring);
    } else {
      auto [top, steps] = detail::nearest_vexillary(w, m);
      // top = w s_{i1} ... s_{ik}; peel the last ascent first.
      Poly f = family(top, ring, route, m, cache);
      for (auto it = steps.rbegin(); it != steps.rend(); ++it) f = lowering(static_cast<int>(*it), f, ring);
      result = std::move(f);
    }
  } else {
    const Permutation w0 = longest(m);
    Poly f = vexillary_fast_path(longest_triple(m), ring);
    // w^{-1} w0 = s_{j1} ... s_{jk}; apply the operator for j_k first.
    const auto word = (w.inverse() * w0).reduced_word();
    for (auto it = word.rbegin(); it != word.rend(); ++it) f = lowering(static_cast<int>(*it), f, ring);
    result = std::move(f);
  }
  if (cache) cache->put(key, result);
  return result;
}

inline Poly schubert(const Permutation& w, std::optional<int> window = std::nullopt, Route route = Route::Vexillary) {
  return family(w, RingSpec{Theory::H, 0, std::nullopt}, route, window);
}

inline Poly grothendieck(const Permutation& w, int trunc = kDefaultTrunc, std::optional<int> window = std::nullopt,
                         Route route = Route::Vexillary) {
  return family(w, RingSpec{Theory::K, trunc, std::nullopt}, route, window);
}

/// Finite double Grothendieck polynomials G_u(x; z) for u in S_(-M,M], equal
/// to the K family with finite base M. Dominant u give
/// prod (x_i (+) z_j) over the diagram; everything else is lowered from the
/// nearest dominant permutation with pi_i. The z variables can be renamed
/// and capped in degree on the way, since pi_i only touches x.
class FiniteGrothendieck {
 public:
  FiniteGrothendieck(int big_m, int trunc, std::function<int(int)> z_index = [](int j) { return j; },
                     std::optional<int> z_cap = std::nullopt)
      : big_m_(big_m), trunc_(trunc), z_index_(std::move(z_index)), layout_(make_layout(big_m, z_index_)) {
    limits_.beta_slot = layout_.slot(Var::beta());
    limits_.beta_max = trunc;
    limits_.cap = z_cap;
    for (int s = 0; s < layout_.slots(); ++s)
      if (layout_.var(s).family() == Family::Z) limits_.capped.push_back(s);
  }

  /// Same x, z and beta slots for every instance with equal big_m and z targets.
  static PackedLayout make_layout(int big_m, const std::function<int(int)>& z_index) {
    std::vector<Var> vars;
    for (int i = -big_m + 1; i <= big_m; ++i) vars.push_back(Var::x(i));
    std::set<int> zs;
    for (int j = -big_m + 1; j <= big_m; ++j) zs.insert(z_index(j));
    for (int j : zs) vars.push_back(Var::z(j));
    vars.push_back(Var::beta());
    return PackedLayout(std::move(vars));
  }

  const PackedLayout& layout() const { return layout_; }
  const PackedLimits& limits() const { return limits_; }
  int trunc() const { return trunc_; }

  const PackedPoly& packed(const Permutation& u) {
    if (!u.fits_window(big_m_)) throw DomainError("window too small for " + u.str());
    std::lock_guard lock(mu_);
    return get(u);
  }

  /// The scalar-free part (beta = 0, z = 0), a Schubert polynomial in x up to sign.
  const PackedPoly& leading(const Permutation& u) {
    const PackedPoly& full = packed(u);
    std::lock_guard lock(mu_);
    if (auto it = lead_.find(u); it != lead_.end()) return it->second;
    PackedKey scalar_mask = 0;
    for (int s = 0; s < layout_.slots(); ++s)
      if (layout_.var(s).family() != Family::X) scalar_mask |= layout_.field_mask(s);
    return lead_.emplace(u, full.select([scalar_mask](PackedKey k) { return (k & scalar_mask) == 0; })).first->second;
  }

  Poly operator()(const Permutation& u) { return packed(u).to_poly(layout_, trunc_); }

  /// Number of memoized polynomials and their total term count.
  std::pair<std::size_t, std::size_t> memo_stats() const {
    std::size_t terms = 0;
    for (const auto& [u, f] : memo_) terms += f.size();
    return {memo_.size(), terms};
  }

  static bool is_dominant(const Permutation& u, int big_m) {
    int prev = 1 << 30;
    for (int i = -big_m + 1; i <= big_m; ++i) {
      int c = 0;
      for (int j = i + 1; j <= big_m; ++j) c += u(j) < u(i);
      if (c > prev) return false;
      prev = c;
    }
    return true;
  }

 private:
  const PackedPoly& get(const Permutation& u) {
    if (auto it = memo_.find(u); it != memo_.end()) return it->second;
    PackedPoly f;
    if (is_dominant(u, big_m_)) {
      f = dominant(u);
    } else {
      const long long i = first_step(u);
      f = packed_isobaric(get(u.times_simple(i)), layout_.slot(Var::x(static_cast<int>(i))),
                          layout_.slot(Var::x(static_cast<int>(i + 1))), *limits_.beta_slot, layout_, limits_);
    }
    return memo_.emplace(u, std::move(f)).first->second;
  }

  PackedPoly dominant(const Permutation& u) const {
    const Permutation inv = u.inverse();
    PackedPoly f;
    f.add(0, 1);
    for (int i = -big_m_ + 1; i <= big_m_; ++i)
      for (int j = -big_m_ + 1; j <= big_m_; ++j)
        if (j < u(i) && i < inv(j)) {
          const PackedKey xi = layout_.unit(layout_.slot(Var::x(i)));
          const PackedKey zj = layout_.unit(layout_.slot(Var::z(z_index_(j))));
          PackedPoly factor;  // x_i + z_j + beta x_i z_j
          factor.add(xi, 1);
          factor.add(zj, 1);
          factor.add(xi + zj + layout_.unit(*limits_.beta_slot), 1);
          f = PackedPoly::product(f, factor, layout_, limits_);
        }
    return f;
  }

  // First ascent on a shortest path up to a dominant (or already built) permutation.
  long long first_step(const Permutation& u) const {
    std::deque<std::pair<Permutation, long long>> queue;
    std::set<Permutation> seen{u};
    for (long long i = -big_m_ + 1; i < big_m_; ++i)
      if (u(i) < u(i + 1)) {
        queue.emplace_back(u.times_simple(i), i);
        seen.insert(queue.back().first);
      }
    while (!queue.empty()) {
      auto [v, first] = queue.front();
      queue.pop_front();
      if (memo_.count(v) || is_dominant(v, big_m_)) return first;
      for (long long i = -big_m_ + 1; i < big_m_; ++i)
        if (v(i) < v(i + 1)) {
          Permutation up = v.times_simple(i);
          if (seen.insert(up).second) queue.emplace_back(std::move(up), first);
        }
    }
    throw ConsistencyError("no dominant permutation above " + u.str());
  }

  int big_m_, trunc_;
  std::function<int(int)> z_index_;
  PackedLayout layout_;
  PackedLimits limits_;
  std::map<Permutation, PackedPoly> memo_, lead_;
  std::recursive_mutex mu_;
};

// ---------------------------------------------------------------------------
// Specializations

namespace detail {

inline std::map<Var, Poly> kill_family(const Poly& f, Family fam) {
  std::map<Var, Poly> assign;
  for (const auto& [m, c] : f.terms())
    for (const auto& fac : m.factors()) {
      const Var v = Var::from_id(fac.var);
      if (v.family() == fam) assign[v] = Poly(0);
    }
  return assign;
}

}  // namespace detail

/// beta -> 0 and z_i -> y_i.
inline Poly beta_zero(const Poly& f) {
  const Poly b0 = beta_to_zero(f);
  return rename(b0, [](Var v) { return v.family() == Family::Z ? Var::y(v.index()) : v; });
}

/// Evaluate beta = -1 on a series that is visibly a polynomial: its highest
/// beta power must sit strictly below the truncation order.
inline Poly beta_minus_one(const Poly& f) {
  if (f.trunc() && f.max_beta() >= *f.trunc())
    throw DomainError("series reaches its truncation order; beta = -1 is not determined");
  return substitute(Poly(f).mark_exact(), {{Var::beta(), Poly(-1)}});
}

/// Finite double polynomials: c = 1 and y -> -y (H), or c = 1 and beta = -1 (K).
inline Poly specialize_finite(const Poly& f, Theory theory) {
  Poly g = substitute(f, detail::kill_family(f, Family::C));
  if (theory == Theory::H) {
    std::map<Var, Poly> neg;
    for (const auto& [m, c] : g.terms())
      for (const auto& fac : m.factors()) {
        const Var v = Var::from_id(fac.var);
        if (v.family() == Family::Y) neg[v] = -var(v);
      }
    return substitute(g, neg);
  }
  return beta_minus_one(g);
}

/// Graded lift of the back-stable Grothendieck polynomial: replace c by
/// prod_{-m < i <= 0}(1 + z_i t)/(1 + x~_i t), then z_i -> (-)a_i, with the
/// a-variables written in the z family. Evaluating beta = -1 afterwards
/// gives the LLS3 polynomial.
inline Poly to_back_stable(const Poly& f, int trunc, int m) {
  RingSpec ring{Theory::K, trunc, m};
  const int kmax = detail::max_index(f, Family::C);
  std::map<Var, Poly> assign;
  if (kmax > 0) {
    const TSeries base = row_series(0, 0, ring);
    for (int k = 1; k <= kmax; ++k) assign[Var::c(k)] = base[k];
  }
  Poly g = substitute(f.truncated(trunc), assign);
  std::map<Var, Poly> zsub;
  for (const auto& [mono, c] : g.terms())
    for (const auto& fac : mono.factors()) {
      const Var v = Var::from_id(fac.var);
      if (v.family() == Family::Z) zsub[v] = oneg(var(v), trunc);
    }
  return substitute(g, zsub);
}

}  // namespace bsp
