#pragma once

// Expansion of a graded series in a basis whose elements are unitriangular
// with respect to (scalar degree, beta power): each basis element B_k is
// L_k + (terms of higher scalar degree or beta power), where the leading
// parts L_k are linearly independent. The residual is peeled slice by slice.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poly.hpp"

namespace bsp {

/// Which variables belong to the coefficient ring (beta is handled apart).
using ScalarPredicate = std::function<bool(Var)>;

/// Supplies leading parts and full basis elements on demand.
class BasisProvider {
 public:
  virtual ~BasisProvider() = default;
  /// Write P (a beta-free polynomial in basis variables, homogeneous of the
  /// given degree) as sum a_k L_k; throws DomainError when P is outside the span.
  virtual std::vector<std::pair<std::size_t, Integer>> solve(const Poly& p, int degree) = 0;
  /// Full basis element k.
  virtual Poly element(std::size_t k) = 0;
  virtual std::string label(std::size_t k) const = 0;
};

/// Exact linear algebra over Q on the leading parts of one degree at a time,
/// with an integrality check on every solution.
class EchelonBasis : public BasisProvider {
 public:
  struct Candidate {
    std::string label;
    std::function<Poly()> leading;
    std::function<Poly()> full;
  };
  /// candidates(d) lists the basis elements whose leading part has degree d.
  explicit EchelonBasis(std::function<std::vector<Candidate>(int)> candidates) : candidates_(std::move(candidates)) {}

  std::vector<std::pair<std::size_t, Integer>> solve(const Poly& p, int degree) override {
    const Block& blk = block(degree);
    std::vector<Rational> v(blk.columns.size());
    for (const auto& [m, c] : p.terms()) {
      auto it = blk.columns.find(m);
      if (it == blk.columns.end()) throw DomainError("not in the span of the basis: monomial " + m.str() + " in degree " + std::to_string(degree));
      v[it->second] = Rational(c.to_big());
    }
    std::vector<Rational> a(blk.ids.size());
    for (std::size_t r = 0; r < blk.pivots.size(); ++r) {
      const Rational b = v[blk.pivots[r]];
      if (b == 0) continue;
      for (std::size_t col = 0; col < v.size(); ++col) v[col] -= b * blk.echelon[r][col];
      for (std::size_t k = 0; k < a.size(); ++k) a[k] += b * blk.transform[r][k];
    }
    for (const auto& x : v)
      if (x != 0) throw DomainError("not in the span of the basis in degree " + std::to_string(degree) + ": " + p.str());
    std::vector<std::pair<std::size_t, Integer>> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] == 0) continue;
      if (denominator(a[k]) != 1) throw ConsistencyError("non-integral basis coefficient for " + labels_[blk.ids[k]]);
      out.emplace_back(blk.ids[k], Integer(BigInt(numerator(a[k]))));
    }
    return out;
  }

  Poly element(std::size_t k) override {
    auto it = full_.find(k);
    if (it == full_.end()) it = full_.emplace(k, fulls_[k]()).first;
    return it->second;
  }
  std::string label(std::size_t k) const override { return labels_[k]; }

 private:
  struct Block {
    std::vector<std::size_t> ids;
    std::map<Monomial, std::size_t, bool (*)(const Monomial&, const Monomial&)> columns{canonical_less};
    std::vector<std::vector<Rational>> echelon, transform;
    std::vector<std::size_t> pivots;
  };

  const Block& block(int degree) {
    auto it = blocks_.find(degree);
    if (it != blocks_.end()) return it->second;
    Block blk;
    std::vector<Poly> leads;
    for (auto& cand : candidates_(degree)) {
      blk.ids.push_back(labels_.size());
      labels_.push_back(cand.label);
      fulls_.push_back(cand.full);
      leads.push_back(cand.leading());
      for (const auto& [m, c] : leads.back().terms()) blk.columns.emplace(m, 0);
    }
    std::size_t col = 0;
    for (auto& [m, idx] : blk.columns) idx = col++;
    const std::size_t n = leads.size(), w = blk.columns.size();
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(w)), tr(n, std::vector<Rational>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (const auto& [m, c] : leads[r].terms()) rows[r][blk.columns.at(m)] = Rational(c.to_big());
      tr[r][r] = 1;
    }
    // Reduced row echelon form, tracking the row operations.
    std::size_t rank = 0;
    for (std::size_t c = 0; c < w && rank < n; ++c) {
      std::size_t piv = rank;
      while (piv < n && rows[piv][c] == 0) ++piv;
      if (piv == n) continue;
      std::swap(rows[piv], rows[rank]);
      std::swap(tr[piv], tr[rank]);
      const Rational inv = 1 / rows[rank][c];
      for (auto& x : rows[rank]) x *= inv;
      for (auto& x : tr[rank]) x *= inv;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == rank || rows[r][c] == 0) continue;
        const Rational f = rows[r][c];
        for (std::size_t k = 0; k < w; ++k) rows[r][k] -= f * rows[rank][k];
        for (std::size_t k = 0; k < n; ++k) tr[r][k] -= f * tr[rank][k];
      }
      blk.pivots.push_back(c);
      ++rank;
    }
    if (rank < n) {
      std::string names;
      for (std::size_t r = rank; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k)
          if (tr[r][k] != 0) names += " " + labels_[blk.ids[k]];
      throw DomainError("rank-deficient basis in degree " + std::to_string(degree) + ": dependent leading parts among" + names);
    }
    rows.resize(rank);
    tr.resize(rank);
    blk.echelon = std::move(rows);
    blk.transform = std::move(tr);
    return blocks_.emplace(degree, std::move(blk)).first->second;
  }

  std::function<std::vector<Candidate>(int)> candidates_;
  std::map<int, Block> blocks_;
  std::vector<std::string> labels_;
  std::vector<std::function<Poly()>> fulls_;
  std::map<std::size_t, Poly> full_;
};

struct Expansion {
  std::map<std::size_t, Poly> coefficients;
  std::optional<int> trunc;
};

/// Scalar degree and beta power of a monomial.
inline std::pair<int, int> slice_of(const Monomial& m, const ScalarPredicate& scalar) {
  int e = 0;
  for (const auto& f : m.factors()) {
    const Var v = Var::from_id(f.var);
    if (v.family() != Family::Beta && scalar(v)) e += v.degree() * f.exp;
  }
  return {e, m.beta()};
}

/// Peel g into sum_k C_k B_k with C_k in the scalar ring. With `max_scalar`
/// set, terms of higher scalar degree are discarded throughout.
inline Expansion expand(const Poly& g, const ScalarPredicate& scalar, BasisProvider& basis,
                        std::optional<int> max_scalar = std::nullopt) {
  Expansion out;
  out.trunc = g.trunc();
  auto cap = [&](const Poly& f) {
    if (!max_scalar) return f;
    return f.select([&](const Monomial& m) { return slice_of(m, scalar).first <= *max_scalar; });
  };
  Poly residual = cap(g);
  auto is_scalar = [&](Var v) { return v.family() == Family::Beta || scalar(v); };
  std::optional<std::pair<int, int>> last;
  while (!residual.is_zero()) {
    std::pair<int, int> key{1 << 30, 1 << 30};
    for (const auto& [m, c] : residual.terms()) key = std::min(key, slice_of(m, scalar));
    if (last && key <= *last) throw ConsistencyError("expansion did not clear a slice");
    last = key;
    // Group the slice by its scalar part and basis degree.
    std::map<std::pair<int, Monomial>, Poly, bool (*)(const std::pair<int, Monomial>&, const std::pair<int, Monomial>&)> groups(
        [](const std::pair<int, Monomial>& a, const std::pair<int, Monomial>& b) {
          if (a.first != b.first) return a.first < b.first;
          return canonical_less(a.second, b.second);
        });
    for (const auto& [m, c] : residual.terms()) {
      if (slice_of(m, scalar) != key) continue;
      const Monomial zeta = m.filtered(is_scalar);
      const Monomial rest = m.filtered([&](Var v) { return !is_scalar(v); });
      groups[{rest.degree(), zeta}].add_term(rest, c);
    }
    std::map<std::size_t, Poly> step;
    for (const auto& [gk, poly] : groups) {
      for (const auto& [k, a] : basis.solve(poly, gk.first)) step[k].add_term(gk.second, a);
    }
    for (auto& [k, coeff] : step) {
      residual -= cap(coeff.truncated(residual.trunc()) * basis.element(k));
      auto [it, inserted] = out.coefficients.try_emplace(k, Poly::zero(out.trunc));
      it->second += coeff;
    }
  }
  for (auto it = out.coefficients.begin(); it != out.coefficients.end();)
    it = it->second.is_zero() ? out.coefficients.erase(it) : std::next(it);
  return out;
}

}  // namespace bsp
