#pragma once

// Cone-membership certificates for coproduct coefficients. Cohomology entries
// are expanded in the adjacent differences y_{s(k+1)} - y_{s(k)} along the
// chain 1, 2, ..., m, -m+1, ..., 0; K-theory entries are evaluated at
// beta = -1 and expanded in e^{y_{s(k)} - y_{s(k+1)}} - 1.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "poly.hpp"

namespace bsp {

class PrecOrder {
 public:
  explicit PrecOrder(int m) : m_(m) {
    if (m < 1) throw DomainError("window must be at least 1");
    for (int i = 1; i <= m; ++i) chain_.push_back(i);
    for (int i = -m + 1; i <= 0; ++i) chain_.push_back(i);
  }

  int window() const { return m_; }
  int length() const { return static_cast<int>(chain_.size()); }
  /// sigma(k) for k = 1..L.
  int at(int k) const { return chain_.at(k - 1); }
  /// Position of index i along the chain.
  int position(int i) const {
    auto it = std::find(chain_.begin(), chain_.end(), i);
    if (it == chain_.end()) throw DomainError("index " + std::to_string(i) + " is outside the window");
    return static_cast<int>(it - chain_.begin()) + 1;
  }
  bool precedes(int i, int j) const { return position(i) < position(j); }

  /// Name of the k-th adjacent generator, k = 1..L-1.
  std::string generator_name(int k) const { return "u(" + std::to_string(at(k)) + "," + std::to_string(at(k + 1)) + ")"; }
  std::vector<std::string> generator_names() const {
    std::vector<std::string> out;
    for (int k = 1; k < length(); ++k) out.push_back(generator_name(k));
    return out;
  }

 private:
  int m_;
  std::vector<int> chain_;
};

/// Laurent polynomial in the characters e^{y_i}; a monomial is the map
/// index -> exponent with zero exponents omitted.
class Laurent {
 public:
  using Mono = std::map<int, int>;

  static Laurent character(int i, int e = 1) {
    Laurent r;
    Mono m;
    if (e != 0) m[i] = e;
    r.terms_[m] = Integer(1);
    return r;
  }
  static Laurent constant(const Integer& c) {
    Laurent r;
    if (!c.is_zero()) r.terms_[Mono{}] = c;
    return r;
  }

  const std::map<Mono, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Mono& m, const Integer& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(m, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  Laurent& operator+=(const Laurent& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m, -c);
    return a;
  }
  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m = ma;
        for (const auto& [i, e] : mb)
          if ((m[i] += e) == 0) m.erase(i);
        r.add_term(m, ca * cb);
      }
    return r;
  }
  Laurent scaled(const Integer& k) const {
    Laurent r;
    for (const auto& [m, c] : terms_) r.add_term(m, c * k);
    return r;
  }
  bool operator==(const Laurent& o) const { return terms_ == o.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      std::string mono;
      for (const auto& [i, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += "e^y[" + std::to_string(i) + "]";
        if (e != 1) mono += "^" + std::to_string(e);
      }
      std::string cs = c.str();
      if (!s.empty()) s += cs[0] == '-' ? " - " : " + ";
      else if (cs[0] == '-') s += "-";
      if (cs[0] == '-') cs.erase(0, 1);
      if (mono.empty()) s += cs;
      else s += (cs == "1" ? "" : cs + "*") + mono;
    }
    return s;
  }

 private:
  std::map<Mono, Integer> terms_;
};

namespace detail {

inline std::set<int> z_indices(const Poly& d) {
  std::set<int> out;
  for (const auto& [m, c] : d.terms())
    for (const auto& f : m.factors()) {
      const Var v = Var::from_id(f.var);
      if (v.family() == Family::Z) out.insert(v.index());
      else if (v.family() != Family::Beta)
        throw DomainError("expected a series in beta and z, found " + v.name());
    }
  return out;
}

inline bool vanishes_above(const Poly& f, int level) {
  for (const auto& [m, c] : f.terms())
    if (m.beta() > level) return false;
  return true;
}

}  // namespace detail

/// A truncated (beta, z)-series d written as P / prod (1 + beta z_i)^{k_i}
/// with P a polynomial.
struct Reconstruction {
  Poly numerator;
  std::map<int, int> denominator;
};

/// Find the smallest exponents k (by total, then lexicographically) for which
/// d * prod (1 + beta z_i)^{k_i} terminates: its top `margin` beta-layers below
/// the truncation vanish. An exact input is its own numerator.
inline std::optional<Reconstruction> reconstruct_rational(const Poly& d, int margin = 2) {
  if (!d.trunc()) return Reconstruction{d, {}};
  const int n = *d.trunc();
  margin = std::clamp(margin, 1, std::max(n, 1));
  const auto zs_set = detail::z_indices(d);
  const std::vector<int> zs(zs_set.begin(), zs_set.end());
  const int level = n - margin;

  std::map<std::vector<int>, Poly> memo;
  memo.emplace(std::vector<int>(zs.size(), 0), d);
  std::vector<std::vector<int>> frontier{std::vector<int>(zs.size(), 0)};
  for (int total = 0; total <= n; ++total) {
    std::set<std::vector<int>> next;
    for (const auto& k : frontier) {
      const Poly& p = memo.at(k);
      if (detail::vanishes_above(p, level)) {
        Reconstruction r{p.select([](const Monomial&) { return true; }), {}};
        r.numerator.mark_exact();
        for (std::size_t i = 0; i < zs.size(); ++i)
          if (k[i]) r.denominator[zs[i]] = k[i];
        return r;
      }
      for (std::size_t i = 0; i < zs.size(); ++i) {
        auto k2 = k;
        ++k2[i];
        if (!memo.count(k2)) memo.emplace(k2, p * (Poly(1) + beta() * var(Var::z(zs[i]))));
        next.insert(k2);
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  return std::nullopt;
}

/// beta = -1, z_i = 1 - e^{-y_i}. Throws when the truncation is too short to
/// determine the rational function.
inline Laurent evaluate_beta_minus_one(const Poly& d, int margin = 2) {
  auto rec = reconstruct_rational(d, margin);
  if (!rec) throw DomainError("cannot determine the beta = -1 value at this truncation");
  // P(-1, 1 - w) with w_i = e^{-y_i}; then multiply by prod w_i^{-k_i}.
  Laurent out;
  for (const auto& [m, c] : rec->numerator.terms()) {
    Laurent term = Laurent::constant(m.beta() % 2 ? -c : c);
    for (const auto& f : m.factors()) {
      const Var v = Var::from_id(f.var);
      if (v.family() != Family::Z) continue;
      const Laurent z = Laurent::constant(1) - Laurent::character(v.index(), -1);
      for (int e = 0; e < f.exp; ++e) term = term * z;
    }
    out += term;
  }
  Laurent shift = Laurent::constant(1);
  for (const auto& [i, k] : rec->denominator) shift = shift * Laurent::character(i, k);
  return out * shift;
}

struct PositivityCertificate {
  enum class Status { certified, rejected };

  Status status = Status::rejected;
  std::vector<std::string> generators;
  /// Expansion in the generators; generator k is stored as the variable x[k].
  Poly expansion;
  std::string reason;
  std::string offending_monomial;
  std::optional<Integer> offending_coefficient;

  bool certified() const { return status == Status::certified; }

  std::string monomial_name(const Monomial& m) const {
    std::string s;
    for (const auto& f : m.factors()) {
      if (!s.empty()) s += "*";
      s += generators.at(Var::from_id(f.var).index() - 1);
      if (f.exp != 1) s += "^" + std::to_string(f.exp);
    }
    return s.empty() ? "1" : s;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["status"] = certified() ? "certified" : "rejected";
    j["generators"] = generators;
    auto coeff_json = [](const Integer& c) -> nlohmann::json {
      if (c.is_small()) return c.small_value();
      return c.str();
    };
    nlohmann::json exp = nlohmann::json::array();
    for (const auto& [m, c] : expansion.sorted_terms()) {
      nlohmann::json mono = nlohmann::json::object();
      for (const auto& f : m.factors()) mono[generators.at(Var::from_id(f.var).index() - 1)] = f.exp;
      exp.push_back({{"mono", mono}, {"coeff", coeff_json(c)}});
    }
    j["expansion"] = exp;
    if (!certified()) {
      j["reason"] = reason;
      if (!offending_monomial.empty()) j["monomial"] = offending_monomial;
      if (offending_coefficient) j["coeff"] = coeff_json(*offending_coefficient);
    }
    return j;
  }
};

namespace detail {

inline PositivityCertificate reject(const PrecOrder& order, std::string reason) {
  PositivityCertificate cert;
  cert.generators = order.generator_names();
  cert.reason = std::move(reason);
  return cert;
}

/// Certified iff every coefficient is nonnegative.
inline PositivityCertificate judge(const PrecOrder& order, Poly expansion) {
  PositivityCertificate cert;
  cert.generators = order.generator_names();
  for (const auto& [m, c] : expansion.sorted_terms())
    if (c.sign() < 0) {
      cert.reason = "negative coefficient";
      cert.offending_monomial = cert.monomial_name(m);
      cert.offending_coefficient = c;
      cert.expansion = std::move(expansion);
      return cert;
    }
  cert.status = PositivityCertificate::Status::certified;
  cert.expansion = std::move(expansion);
  return cert;
}

}  // namespace detail

/// Membership of p(y) in Z_{>=0}[y_j - y_i : i before j].
inline PositivityCertificate certify_cohomology(const Poly& p, const PrecOrder& order) {
  const int len = order.length();
  for (const auto& [m, c] : p.terms())
    for (const auto& f : m.factors()) {
      const Var v = Var::from_id(f.var);
      if (v.family() != Family::Y) throw DomainError("expected a polynomial in y, found " + v.name());
      order.position(v.index());
    }
  // y_{s(k)} = t - (g_k + ... + g_{L-1}); shift invariance means no t survives.
  std::map<Var, Poly> sub;
  for (int k = 1; k <= len; ++k) {
    Poly e = var(Var::t());
    for (int j = k; j < len; ++j) e -= var(Var::x(j));
    sub[Var::y(order.at(k))] = e;
  }
  Poly g = substitute(Poly(p).mark_exact(), sub);
  if (g.contains_family(Family::T)) return detail::reject(order, "not shift-invariant");

  auto cert = detail::judge(order, g);
  std::map<Var, Poly> back;
  for (int k = 1; k < len; ++k) back[Var::x(k)] = var(Var::y(order.at(k + 1))) - var(Var::y(order.at(k)));
  if (!(substitute(cert.expansion, back) - Poly(p).mark_exact()).is_zero())
    throw ConsistencyError("cohomology certificate does not reproduce its input");
  return cert;
}

/// Membership of a Laurent polynomial in Z_{>=0}[e^{y_i - y_j} - 1 : i before j].
inline PositivityCertificate certify_laurent(const Laurent& f, const PrecOrder& order) {
  const int len = order.length();
  // Exponent of (1 + u_j) in a monomial prod e^{a_i y_i} is the partial sum
  // b_j = a_{s(1)} + ... + a_{s(j)}.
  std::vector<int> clear(len, 0);
  std::vector<std::pair<std::vector<int>, Integer>> rows;
  for (const auto& [m, c] : f.terms()) {
    int total = 0;
    std::vector<int> a(len + 1, 0);
    for (const auto& [i, e] : m) {
      a[order.position(i)] = e;
      total += e;
    }
    if (total != 0) return detail::reject(order, "not shift-invariant");
    std::vector<int> b(len, 0);
    for (int j = 1, s = 0; j < len; ++j) {
      s += a[j];
      b[j] = s;
      clear[j] = std::max(clear[j], -s);
    }
    rows.emplace_back(std::move(b), c);
  }
  std::vector<Poly> one_plus_u(len);
  for (int j = 1; j < len; ++j) one_plus_u[j] = Poly(1) + var(Var::x(j));
  Poly h;
  for (const auto& [b, c] : rows) {
    Poly term(c);
    for (int j = 1; j < len; ++j)
      if (int e = b[j] + clear[j]) term = term * one_plus_u[j].pow(e);
    h += term;
  }
  for (int j = 1; j < len; ++j)
    for (int r = 0; r < clear[j]; ++r) {
      try {
        h = divide_by_difference(h, Var::x(j), Poly(-1));
      } catch (const ConsistencyError&) {
        return detail::reject(order, "not a polynomial in the generators");
      }
    }

  auto cert = detail::judge(order, h);
  Laurent back;
  for (const auto& [m, c] : cert.expansion.terms()) {
    Laurent t = Laurent::constant(c);
    for (const auto& fac : m.factors()) {
      const int k = Var::from_id(fac.var).index();
      const Laurent u = Laurent::character(order.at(k)) * Laurent::character(order.at(k + 1), -1) - Laurent::constant(1);
      for (int e = 0; e < fac.exp; ++e) t = t * u;
    }
    back += t;
  }
  if (!(back == f)) throw ConsistencyError("K-theory certificate does not reproduce its input");
  return cert;
}

/// Membership of (-1)^sign_exponent d at beta = -1, with z_i = 1 - e^{-y_i}.
inline PositivityCertificate certify_ktheory(const Poly& d, int sign_exponent, const PrecOrder& order) {
  for (int i : detail::z_indices(d)) order.position(i);
  std::optional<Laurent> value;
  try {
    value = evaluate_beta_minus_one(d);
  } catch (const DomainError& e) {
    return detail::reject(order, e.what());
  }
  if (sign_exponent % 2) *value = value->scaled(-1);
  return certify_laurent(*value, order);
}

}  // namespace bsp
