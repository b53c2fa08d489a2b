#pragma once

// Chern series in t with polynomial coefficients, the row series of the
// determinantal formulas, and exact determinants.

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "permutation.hpp"
#include "poly.hpp"

namespace bsp {

enum class Theory { H, K };

inline std::string theory_name(Theory t) { return t == Theory::H ? "H" : "K"; }
inline Theory parse_theory(std::string_view s) {
  if (s == "H" || s == "h") return Theory::H;
  if (s == "K" || s == "k") return Theory::K;
  throw DomainError("theory must be H or K");
}

/// The ring a family computation lives in.
///   H: exact polynomials in c, x, y (beta = 0, x~ = -x).
///   K: beta-series truncated at `trunc`, in c, x, z.
/// With `finite_base = M`, the series c is replaced by
/// prod_{-M < i <= 0} (1 + z_i t) / (1 + x~_i t), which turns every family
/// member into a finite double polynomial in the window (-M, M].
struct RingSpec {
  Theory theory = Theory::K;
  int trunc = kDefaultTrunc;
  std::optional<int> finite_base;
  Family c_family = Family::C;

  std::optional<int> trunc_opt() const {
    return theory == Theory::K ? std::optional<int>(trunc) : std::nullopt;
  }
  /// x~_a (or -x_a in cohomology).
  Poly xt(int a) const { return theory == Theory::K ? x_tilde(a, trunc) : -var(Var::x(a)); }
  /// z_b (or y_b in cohomology).
  Poly zv(int b) const { return var(theory == Theory::K ? Var::z(b) : Var::y(b)); }

  bool operator==(const RingSpec&) const = default;
};

// ---------------------------------------------------------------------------

/// Formal series sum_k a_k t^k with lazily memoized coefficients.
/// Memoization is extend-only and guarded by a mutex, so a series may be
/// read from several threads.
class TSeries {
 public:
  using Gen = std::function<Poly(int, const TSeries&)>;

  explicit TSeries(Gen gen) : st_(std::make_shared<State>()) { st_->gen = std::move(gen); }

  /// Coefficient of t^k (zero for k < 0).
  Poly operator[](int k) const {
    if (k < 0) return Poly();
    std::lock_guard lock(st_->mu);
    while (static_cast<int>(st_->memo.size()) <= k) {
      const int next = static_cast<int>(st_->memo.size());
      st_->memo.push_back(st_->gen(next, *this));
    }
    return st_->memo[k];
  }

  static TSeries constant(Poly a) {
    return TSeries([a = std::move(a)](int k, const TSeries&) { return k == 0 ? a : Poly::zero(a.trunc()); });
  }
  static TSeries one() { return constant(Poly(1)); }
  /// 1 + c_1 t + c_2 t^2 + ... in the given family.
  static TSeries chern(Family fam = Family::C) {
    return TSeries([fam](int k, const TSeries&) { return k == 0 ? Poly(1) : var(Var(fam, k)); });
  }
  static TSeries polynomial(std::vector<Poly> coeffs) {
    return TSeries([c = std::move(coeffs)](int k, const TSeries&) {
      return k < static_cast<int>(c.size()) ? c[k] : Poly();
    });
  }

  /// this * (1 + a t)
  TSeries times_linear(Poly a) const {
    return TSeries([src = *this, a = std::move(a)](int k, const TSeries&) {
      Poly r = src[k];
      if (k > 0) r += a * src[k - 1];
      return r;
    });
  }
  /// this / (1 + b t)
  TSeries over_linear(Poly b) const {
    return TSeries([src = *this, b = std::move(b)](int k, const TSeries& self) {
      Poly r = src[k];
      if (k > 0) r -= b * self[k - 1];
      return r;
    });
  }

  friend TSeries operator*(const TSeries& a, const TSeries& b) {
    return TSeries([a, b](int k, const TSeries&) {
      Poly r;
      for (int i = 0; i <= k; ++i) r += a[i] * b[k - i];
      return r;
    });
  }
  friend TSeries operator/(const TSeries& a, const TSeries& b) {
    if (b[0] != Poly(1) && !equal_upto_trunc(b[0], Poly(1)))
      throw DomainError("series division needs constant term 1");
    return TSeries([a, b](int k, const TSeries& self) {
      Poly r = a[k];
      for (int i = 1; i <= k; ++i) r -= b[i] * self[k - i];
      return r;
    });
  }

 private:
  struct State {
    Gen gen;
    std::deque<Poly> memo;
    std::recursive_mutex mu;
  };
  std::shared_ptr<State> st_;
};

namespace detail {

/// Multiply by prod_{lo < b <= hi} (1 + f(b) t), or divide by the reversed
/// range when hi < lo.
template <class F>
TSeries apply_range(TSeries s, int lo, int hi, F f, bool numerator) {
  if (hi >= lo) {
    for (int b = lo + 1; b <= hi; ++b) s = numerator ? s.times_linear(f(b)) : s.over_linear(f(b));
  } else {
    for (int b = hi + 1; b <= lo; ++b) s = numerator ? s.over_linear(f(b)) : s.times_linear(f(b));
  }
  return s;
}

}  // namespace detail

/// c(k_i) = c * prod_{a<=0}(1 + x~_a t) prod_{b<=q}(1 + z_b t)
///            / (prod_{a<=p}(1 + x~_a t) prod_{b<=0}(1 + z_b t)),
/// with the infinite tails cancelled by index-range subtraction.
inline TSeries row_series(int p, int q, const RingSpec& ring) {
  const int base = ring.finite_base ? -*ring.finite_base : 0;
  TSeries s = ring.finite_base ? TSeries::one() : TSeries::chern(ring.c_family);
  s = detail::apply_range(s, base, q, [&](int b) { return ring.zv(b); }, true);
  s = detail::apply_range(s, base, p, [&](int a) { return ring.xt(a); }, false);
  return s;
}

inline TSeries row_series_vexillary(const Triple& tau, int row, const RingSpec& ring) {
  tau.validate();
  const int i = tau.condition_for_row(row);
  return row_series(tau.p[i], tau.q[i], ring);
}

/// Row i (1-based) of the longest-element formula on (-m, m].
inline TSeries row_series_w0(int i, int m, const RingSpec& ring) {
  if (m < 1 || i < 1 || i > 2 * m - 1) throw DomainError("row index out of range");
  return row_series(-m + i, m - i, ring);
}

/// sum_d beta^d C(lambda_i - 1 + d, d) row_{lambda_i - i + j + d}.
/// For the longest element lambda_i - 1 = 2m - 1 - i.
inline Poly groth_entry(int i, int j, const Partition& lambda, const TSeries& row, const RingSpec& ring) {
  const int idx = lambda[i] - i + j;
  if (ring.theory == Theory::H) return row[idx];
  Poly out = Poly::zero(ring.trunc);
  for (int d = 0; d <= ring.trunc; ++d) {
    if (idx + d < 0) continue;
    const Poly coeff = row[idx + d];
    if (coeff.is_zero()) continue;
    out += Poly::monomial(Monomial(Var::beta(), d), Integer(binomial(lambda[i] - 1 + d, d))) * coeff;
  }
  return out;
}

/// Exact determinant by Laplace expansion along rows, memoized on the set of
/// used columns.
inline Poly determinant(const std::vector<std::vector<Poly>>& a) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw DomainError("determinant of a non-square matrix");
  if (n == 0) return Poly(1);
  if (n > 24) throw DomainError("determinant too large");
  std::unordered_map<std::uint32_t, Poly> memo;
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t used) -> Poly {
    if (i == n) return Poly(1);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    Poly total;
    int free_before = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used & (1u << j)) continue;
      if (!a[i][j].is_zero()) {
        Poly minor = self(self, i + 1, used | (1u << j));
        if (!minor.is_zero()) {
          Poly term = a[i][j] * minor;
          if (free_before % 2) total -= term;
          else total += term;
        } else {
          total += Poly::zero(minor.trunc());
        }
      }
      ++free_before;
    }
    memo.emplace(used, total);
    return total;
  };
  return rec(rec, 0, 0);
}

}  // namespace bsp
