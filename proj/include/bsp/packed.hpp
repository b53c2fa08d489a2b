#pragma once

// Polynomials over a fixed, small set of variables with every monomial packed
// into one 128-bit exponent vector and machine-word coefficients. Used for the
// finite double Grothendieck computations in the doubled window, where the
// generic representation is too slow.

#include <absl/container/flat_hash_map.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "poly.hpp"

namespace bsp {

using PackedKey = unsigned __int128;

struct PackedKeyHash {
  std::size_t operator()(PackedKey k) const noexcept {
    std::uint64_t lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9e3779b97f4a7c15ull ^ (hi + 0x632be59bd9b4e019ull) * 0xc2b2ae3d27d4eb4full;
    return h ^ (h >> 29);
  }
};

/// Variable slots, most significant first. Each field holds an exponent
/// below 2^(kBits-1); the top bit of every field is a guard for overflow.
class PackedLayout {
 public:
  static constexpr int kBits = 6;

  explicit PackedLayout(std::vector<Var> vars) : vars_(std::move(vars)) {
    if (static_cast<int>(vars_.size()) * kBits > 128) throw DomainError("too many variables for a packed layout");
    for (int s = 0; s < slots(); ++s) {
      slot_[vars_[s]] = s;
      guard_ |= PackedKey(1) << (shift(s) + kBits - 1);
    }
  }

  int slots() const { return static_cast<int>(vars_.size()); }
  const Var& var(int s) const { return vars_[s]; }
  std::optional<int> find(Var v) const {
    auto it = slot_.find(v);
    if (it == slot_.end()) return std::nullopt;
    return it->second;
  }
  int slot(Var v) const {
    if (auto s = find(v)) return *s;
    throw DomainError("variable " + v.name() + " is not in the packed layout");
  }
  PackedKey unit(int s) const { return PackedKey(1) << shift(s); }
  int exponent(PackedKey k, int s) const { return static_cast<int>((k >> shift(s)) & ((1u << kBits) - 1)); }
  PackedKey field_mask(int s) const { return PackedKey((1u << kBits) - 1) << shift(s); }
  PackedKey guard() const { return guard_; }

  /// a * b for monomials; throws when an exponent leaves its field.
  PackedKey mul(PackedKey a, PackedKey b) const {
    const PackedKey r = a + b;
    if (r & guard_) throw DomainError("exponent overflow in packed monomial");
    return r;
  }

  PackedKey encode(const Monomial& m) const {
    PackedKey k = 0;
    for (const auto& f : m.factors()) {
      if (f.exp >= (1 << (kBits - 1))) throw DomainError("exponent too large for a packed monomial");
      k += PackedKey(f.exp) << shift(slot(Var::from_id(f.var)));
    }
    return k;
  }
  Monomial decode(PackedKey k) const {
    Monomial m;
    for (int s = 0; s < slots(); ++s)
      if (int e = exponent(k, s)) m.mul(vars_[s], e);
    return m;
  }

 private:
  int shift(int s) const { return (slots() - 1 - s) * kBits; }

  std::vector<Var> vars_;
  std::map<Var, int> slot_;
  PackedKey guard_ = 0;
};

/// Terms to keep: beta power at most `beta_max` and total degree in the
/// `capped` slots at most `cap`.
struct PackedLimits {
  std::optional<int> beta_slot;
  int beta_max = 0;
  std::vector<int> capped;
  std::optional<int> cap;

  bool keep(const PackedLayout& layout, PackedKey k) const {
    if (beta_slot && layout.exponent(k, *beta_slot) > beta_max) return false;
    if (cap) {
      int e = 0;
      for (int s : capped) e += layout.exponent(k, s);
      if (e > *cap) return false;
    }
    return true;
  }
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ConsistencyError("coefficient overflow in packed arithmetic");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ConsistencyError("coefficient overflow in packed arithmetic");
  return r;
}

class PackedPoly {
 public:
  using Map = absl::flat_hash_map<PackedKey, std::int64_t, PackedKeyHash>;

  PackedPoly() = default;

  static PackedPoly from_poly(const Poly& f, const PackedLayout& layout) {
    PackedPoly p;
    for (const auto& [m, c] : f.terms()) {
      const BigInt big = c.to_big();
      if (big > std::numeric_limits<std::int64_t>::max() || big < std::numeric_limits<std::int64_t>::min())
        throw ConsistencyError("coefficient too large for packed arithmetic");
      p.add(layout.encode(m), static_cast<std::int64_t>(big));
    }
    return p;
  }

  Poly to_poly(const PackedLayout& layout, std::optional<int> trunc) const {
    Poly f = Poly::zero(trunc);
    for (const auto& [k, c] : terms_) f.add_term(layout.decode(k), Integer(static_cast<long long>(c)));
    return f;
  }

  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::int64_t coeff(PackedKey k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? 0 : it->second;
  }

  void add(PackedKey k, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second = checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// this += c * mono * o, keeping only terms allowed by `limits`.
  void add_scaled(const PackedPoly& o, std::int64_t c, PackedKey mono, const PackedLayout& layout,
                  const PackedLimits& limits) {
    if (c == 0) return;
    for (const auto& [k, a] : o.terms_) {
      const PackedKey key = layout.mul(k, mono);
      if (limits.keep(layout, key)) add(key, checked_mul(a, c));
    }
  }

  static PackedPoly product(const PackedPoly& a, const PackedPoly& b, const PackedLayout& layout,
                            const PackedLimits& limits) {
    const PackedPoly& small = a.size() <= b.size() ? a : b;
    const PackedPoly& large = a.size() <= b.size() ? b : a;
    PackedPoly r;
    r.terms_.reserve(large.size() * 2);
    for (const auto& [k, c] : small.terms_) r.add_scaled(large, c, k, layout, limits);
    return r;
  }

  /// Terms whose key satisfies pred.
  template <class Pred>
  PackedPoly select(Pred pred) const {
    PackedPoly r;
    for (const auto& [k, c] : terms_)
      if (pred(k)) r.terms_.emplace(k, c);
    return r;
  }

 private:
  Map terms_;
};

/// Divided difference in the slots sa = x_i, sb = x_{i+1}, term by term:
/// d(x_i^a x_{i+1}^b) = sum over the exponents strictly between.
inline PackedPoly packed_divided_difference(const PackedPoly& f, int sa, int sb, const PackedLayout& layout) {
  PackedPoly r;
  const PackedKey ua = layout.unit(sa), ub = layout.unit(sb);
  for (const auto& [k, c] : f.terms()) {
    const int a = layout.exponent(k, sa), b = layout.exponent(k, sb);
    if (a == b) continue;
    const PackedKey rest = k - ua * static_cast<unsigned>(a) - ub * static_cast<unsigned>(b);
    const int hi = std::max(a, b), lo = std::min(a, b);
    const std::int64_t sign = a > b ? c : -c;
    // x_i^{hi-1-t} x_{i+1}^{lo+t}, t = 0 .. hi-lo-1
    for (int t = 0; t < hi - lo; ++t)
      r.add(rest + ua * static_cast<unsigned>(hi - 1 - t) + ub * static_cast<unsigned>(lo + t), sign);
  }
  return r;
}

/// Swap the exponents in slots sa and sb.
inline PackedPoly packed_swap(const PackedPoly& f, int sa, int sb, const PackedLayout& layout) {
  PackedPoly r;
  const PackedKey ua = layout.unit(sa), ub = layout.unit(sb);
  for (const auto& [k, c] : f.terms()) {
    const unsigned a = layout.exponent(k, sa), b = layout.exponent(k, sb);
    r.add(k - ua * a - ub * b + ua * b + ub * a, c);
  }
  return r;
}

inline bool packed_symmetric(const PackedPoly& f, int sa, int sb, const PackedLayout& layout) {
  const PackedKey ua = layout.unit(sa), ub = layout.unit(sb);
  for (const auto& [k, c] : f.terms()) {
    const unsigned a = layout.exponent(k, sa), b = layout.exponent(k, sb);
    if (a != b && f.coeff(k - ua * a - ub * b + ua * b + ub * a) != c) return false;
  }
  return true;
}

/// pi_i f = d_i((1 + beta x_{i+1}) f).
inline PackedPoly packed_isobaric(const PackedPoly& f, int sa, int sb, int beta_slot, const PackedLayout& layout,
                                  const PackedLimits& limits) {
  PackedPoly g = f;
  g.add_scaled(f, 1, layout.unit(sb) + layout.unit(beta_slot), layout, limits);
  return packed_divided_difference(g, sa, sb, layout);
}

}  // namespace bsp
