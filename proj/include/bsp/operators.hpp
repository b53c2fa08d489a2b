#pragma once

// Reflections s_i, divided differences and isobaric operators, including
// the exceptional action of index 0 on the Chern variables.

#include <map>

#include "poly.hpp"
#include "series.hpp"

namespace bsp {

namespace detail {

inline int max_index(const Poly& f, Family fam) {
  int k = 0;
  for (const auto& [m, c] : f.terms())
    for (const auto& fac : m.factors()) {
      const Var v = Var::from_id(fac.var);
      if (v.family() == fam) k = std::max(k, v.index());
    }
  return k;
}

}  // namespace detail

/// s_i: swap x_i and x_{i+1}; for i = 0 also send c to c (1 + x~_0 t)/(1 + x~_1 t).
inline Poly s_action(int i, const Poly& f, const RingSpec& ring) {
  std::map<Var, Poly> assign;
  assign[Var::x(i)] = var(Var::x(i + 1));
  assign[Var::x(i + 1)] = var(Var::x(i));
  if (i == 0) {
    const int kmax = detail::max_index(f, ring.c_family);
    if (kmax > 0) {
      const TSeries moved = TSeries::chern(ring.c_family).times_linear(ring.xt(0)).over_linear(ring.xt(1));
      for (int k = 1; k <= kmax; ++k) assign[Var(ring.c_family, k)] = moved[k];
    }
  }
  return substitute(f, assign);
}

/// d_i(f) = (f - s_i f) / (x_i - x_{i+1}).
inline Poly divided_difference(int i, const Poly& f, const RingSpec& ring) {
  return divide_by_difference(f - s_action(i, f, ring), Var::x(i), Var::x(i + 1));
}

/// pi_i(f) = d_i((1 + beta x_{i+1}) f).
inline Poly isobaric(int i, const Poly& f, const RingSpec& ring) {
  if (ring.theory == Theory::H) return divided_difference(i, f, ring);
  return divided_difference(i, (Poly(1) + beta() * var(Var::x(i + 1))) * f, ring);
}

/// The operator that lowers a family member along a descent: d_i or pi_i.
inline Poly lowering(int i, const Poly& f, const RingSpec& ring) {
  return ring.theory == Theory::H ? divided_difference(i, f, ring) : isobaric(i, f, ring);
}

// Closed forms on a single Chern variable, kept as cross-checks.

/// d_0(c_k) = c_{k-1} + x_1 c_{k-2} + ... + x_1^{k-1}.
inline Poly d0_chern_closed(int k) {
  Poly out;
  for (int j = 0; j < k; ++j) {
    const int idx = k - 1 - j;
    out += var(Var::x(1), j) * (idx == 0 ? Poly(1) : var(Var::c(idx)));
  }
  return out;
}

/// pi_0(c_k) = sum_{i<k} (-x~_1)^i (c_{k-1-i} - beta c_{k-i}) - beta (-x~_1)^k.
inline Poly pi0_chern_closed(int k, int n) {
  auto cvar = [](int idx) { return idx == 0 ? Poly(1) : var(Var::c(idx)); };
  const Poly mx = -x_tilde(1, n);
  Poly power = Poly(1).truncated(n);
  Poly out = Poly::zero(n);
  for (int i = 0; i < k; ++i) {
    out += power * (cvar(k - 1 - i) - beta() * cvar(k - i));
    power = power * mx;
  }
  out -= beta() * power;
  return out;
}

}  // namespace bsp
