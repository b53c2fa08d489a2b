#pragma once

// Sparse exact polynomials over the variable families beta, c, c', x, y, z, t,
// with an optional beta-truncation order.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "integer.hpp"
#include "json.hpp"
#include "permutation.hpp"

namespace bsp {

/// Internal-consistency failure: signals a bug upstream, never bad user input.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

inline constexpr int kDefaultTrunc = 8;

enum class Family : std::uint8_t { Beta = 0, C = 1, CPrime = 2, X = 3, Y = 4, Z = 5, T = 6 };

/// A variable packed as (family << 16) | (index + bias); the packed order is
/// the canonical variable order.
class Var {
 public:
  static constexpr std::uint32_t kBias = 1u << 15;

  constexpr Var() = default;
  constexpr Var(Family f, int index)
      : id_((static_cast<std::uint32_t>(f) << 16) | static_cast<std::uint32_t>(index + static_cast<int>(kBias))) {}
  static constexpr Var from_id(std::uint32_t id) {
    Var v;
    v.id_ = id;
    return v;
  }

  static constexpr Var beta() { return Var(Family::Beta, 0); }
  static constexpr Var t() { return Var(Family::T, 0); }
  static constexpr Var c(int k) { return Var(Family::C, k); }
  static constexpr Var cp(int k) { return Var(Family::CPrime, k); }
  static constexpr Var x(int i) { return Var(Family::X, i); }
  static constexpr Var y(int i) { return Var(Family::Y, i); }
  static constexpr Var z(int i) { return Var(Family::Z, i); }

  constexpr std::uint32_t id() const { return id_; }
  constexpr Family family() const { return static_cast<Family>(id_ >> 16); }
  constexpr int index() const { return static_cast<int>(id_ & 0xffffu) - static_cast<int>(kBias); }

  /// Graded degree: c_k and c'_k have degree k, beta has degree -1.
  constexpr int degree() const {
    switch (family()) {
      case Family::Beta: return -1;
      case Family::C:
      case Family::CPrime: return index();
      default: return 1;
    }
  }

  std::string name() const {
    const std::string idx = "[" + std::to_string(index()) + "]";
    switch (family()) {
      case Family::Beta: return "b";
      case Family::C: return "c" + idx;
      case Family::CPrime: return "c'" + idx;
      case Family::X: return "x" + idx;
      case Family::Y: return "y" + idx;
      case Family::Z: return "z" + idx;
      case Family::T: return "t";
    }
    return "?";
  }

  static Var parse(std::string_view s) {
    if (s == "b") return beta();
    if (s == "t") return t();
    const auto open = s.find('[');
    if (open == std::string_view::npos || s.back() != ']') throw DomainError("bad variable name: " + std::string(s));
    const std::string head(s.substr(0, open));
    const int idx = std::stoi(std::string(s.substr(open + 1, s.size() - open - 2)));
    if (head == "c") return c(idx);
    if (head == "c'") return cp(idx);
    if (head == "x") return x(idx);
    if (head == "y") return y(idx);
    if (head == "z") return z(idx);
    throw DomainError("bad variable name: " + std::string(s));
  }

  constexpr auto operator<=>(const Var&) const = default;

 private:
  std::uint32_t id_ = 0;
};

struct Factor {
  std::uint32_t var;
  std::int32_t exp;
  bool operator==(const Factor&) const = default;
};

/// Sorted list of (variable, positive exponent).
class Monomial {
 public:
  using Storage = boost::container::small_vector<Factor, 4>;

  Monomial() = default;
  explicit Monomial(Var v, int e = 1) {
    if (e != 0) f_.push_back({v.id(), e});
  }

  const Storage& factors() const { return f_; }
  bool empty() const { return f_.empty(); }

  int exponent(Var v) const {
    for (const auto& f : f_)
      if (f.var == v.id()) return f.exp;
    return 0;
  }
  int beta() const { return !f_.empty() && f_.front().var == Var::beta().id() ? f_.front().exp : 0; }

  int degree() const {
    int d = 0;
    for (const auto& f : f_) d += Var::from_id(f.var).degree() * f.exp;
    return d;
  }

  /// Multiply in place by v^e.
  void mul(Var v, int e) {
    if (e == 0) return;
    auto it = std::lower_bound(f_.begin(), f_.end(), v.id(), [](const Factor& a, std::uint32_t id) { return a.var < id; });
    if (it != f_.end() && it->var == v.id()) {
      it->exp += e;
      if (it->exp == 0) f_.erase(it);
    } else {
      f_.insert(it, {v.id(), e});
    }
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.f_.reserve(a.f_.size() + b.f_.size());
    auto i = a.f_.begin(), j = b.f_.begin();
    while (i != a.f_.end() && j != b.f_.end()) {
      if (i->var < j->var) r.f_.push_back(*i++);
      else if (j->var < i->var) r.f_.push_back(*j++);
      else {
        r.f_.push_back({i->var, i->exp + j->exp});
        ++i, ++j;
      }
    }
    r.f_.insert(r.f_.end(), i, a.f_.end());
    r.f_.insert(r.f_.end(), j, b.f_.end());
    return r;
  }

  /// True when b divides a; the quotient goes to out.
  static bool divide(const Monomial& a, const Monomial& b, Monomial& out) {
    out.f_.clear();
    auto i = a.f_.begin();
    for (const auto& fb : b.f_) {
      while (i != a.f_.end() && i->var < fb.var) out.f_.push_back(*i++);
      if (i == a.f_.end() || i->var != fb.var || i->exp < fb.exp) return false;
      if (i->exp > fb.exp) out.f_.push_back({i->var, i->exp - fb.exp});
      ++i;
    }
    out.f_.insert(out.f_.end(), i, a.f_.end());
    return true;
  }

  /// Keep only factors whose variable satisfies pred.
  template <class Pred>
  Monomial filtered(Pred pred) const {
    Monomial r;
    for (const auto& f : f_)
      if (pred(Var::from_id(f.var))) r.f_.push_back(f);
    return r;
  }

  std::string str() const {
    std::string s;
    for (const auto& f : f_) {
      if (!s.empty()) s += "*";
      s += Var::from_id(f.var).name();
      if (f.exp != 1) s += "^" + std::to_string(f.exp);
    }
    return s;
  }

  bool operator==(const Monomial& o) const { return f_ == o.f_; }

  /// Canonical order: beta exponent first, then factor lists lexicographically.
  friend bool canonical_less(const Monomial& a, const Monomial& b) {
    if (a.beta() != b.beta()) return a.beta() < b.beta();
    return std::lexicographical_compare(a.f_.begin(), a.f_.end(), b.f_.begin(), b.f_.end(),
                                        [](const Factor& x, const Factor& y) {
                                          return x.var != y.var ? x.var < y.var : x.exp < y.exp;
                                        });
  }

 private:
  Storage f_;
};

bool canonical_less(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& f : m.factors()) {
      h ^= (static_cast<std::uint64_t>(f.var) << 20) ^ static_cast<std::uint64_t>(f.exp);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Element of the (truncated) graded ring. trunc == nullopt means exact;
/// trunc == N means terms with beta-exponent > N are unknown and discarded.
class Poly {
 public:
  using Map = std::unordered_map<Monomial, Integer, MonomialHash>;

  Poly() = default;
  Poly(long long c) {  // NOLINT: constants convert implicitly
    if (c != 0) terms_.emplace(Monomial(), Integer(c));
  }
  Poly(const Integer& c) {  // NOLINT
    if (!c.is_zero()) terms_.emplace(Monomial(), c);
  }

  static Poly variable(Var v, int e = 1) {
    Poly p;
    p.terms_.emplace(Monomial(v, e), Integer(1));
    return p;
  }
  static Poly zero(std::optional<int> trunc) {
    Poly p;
    p.trunc_ = trunc;
    return p;
  }
  static Poly monomial(const Monomial& m, const Integer& c) {
    Poly p;
    if (!c.is_zero()) p.terms_.emplace(m, c);
    return p;
  }

  const Map& terms() const { return terms_; }
  std::optional<int> trunc() const { return trunc_; }
  bool is_exact() const { return !trunc_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of a monomial (zero if absent).
  Integer coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  void add_term(const Monomial& m, const Integer& c) {
    if (c.is_zero() || (trunc_ && m.beta() > *trunc_)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Lower the truncation order to N (no-op if already lower).
  Poly& truncate(int n) {
    if (trunc_ && *trunc_ <= n) return *this;
    trunc_ = n;
    for (auto it = terms_.begin(); it != terms_.end();) it = it->first.beta() > n ? terms_.erase(it) : std::next(it);
    return *this;
  }
  Poly truncated(std::optional<int> n) const {
    Poly r = *this;
    if (n) r.truncate(*n);
    return r;
  }
  /// Declare the value as exact (used after establishing it is a true polynomial).
  Poly& mark_exact() {
    trunc_.reset();
    return *this;
  }

  Poly& operator+=(const Poly& o) {
    merge_trunc(o.trunc_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    merge_trunc(o.trunc_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    r.trunc_ = min_trunc(a.trunc_, b.trunc_);
    if (a.is_zero() || b.is_zero()) return r;
    const Poly& big = a.size() >= b.size() ? a : b;
    const Poly& small = a.size() >= b.size() ? b : a;
    r.terms_.reserve(big.size() * 2);
    for (const auto& [ms, cs] : small.terms_) {
      const int bs = ms.beta();
      if (r.trunc_ && bs > *r.trunc_) continue;
      for (const auto& [mb, cb] : big.terms_) {
        if (r.trunc_ && bs + mb.beta() > *r.trunc_) continue;
        Integer c = cs;
        c *= cb;
        auto [it, inserted] = r.terms_.try_emplace(ms * mb, std::move(c));
        if (!inserted) it->second += cs * cb;
      }
    }
    for (auto it = r.terms_.begin(); it != r.terms_.end();) it = it->second.is_zero() ? r.terms_.erase(it) : std::next(it);
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const Integer& k) const {
    if (k.is_zero()) return zero(trunc_);
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c *= k;
    return r;
  }

  Poly pow(int e) const {
    Poly r = Poly(1).truncated(trunc_);
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// Highest beta exponent present (-1 for zero).
  int max_beta() const {
    int b = -1;
    for (const auto& [m, c] : terms_) b = std::max(b, m.beta());
    return b;
  }

  /// Graded degree when all terms share one; nullopt otherwise (or for zero).
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      const int dm = m.degree();
      if (d && *d != dm) return std::nullopt;
      d = dm;
    }
    return d;
  }

  template <class Pred>
  bool any_var(Pred pred) const {
    for (const auto& [m, c] : terms_)
      for (const auto& f : m.factors())
        if (pred(Var::from_id(f.var))) return true;
    return false;
  }
  bool contains_family(Family fam) const {
    return any_var([fam](Var v) { return v.family() == fam; });
  }

  /// Terms whose monomial satisfies pred.
  template <class Pred>
  Poly select(Pred pred) const {
    Poly r = zero(trunc_);
    for (const auto& [m, c] : terms_)
      if (pred(m)) r.terms_.emplace(m, c);
    return r;
  }

  std::vector<std::pair<Monomial, Integer>> sorted_terms() const {
    std::vector<std::pair<Monomial, Integer>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return canonical_less(a.first, b.first); });
    return v;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : sorted_terms()) {
      const bool neg = c.sign() < 0;
      const Integer mag = neg ? -c : c;
      std::string body;
      if (m.empty()) body = mag.str();
      else if (mag == Integer(1)) body = m.str();
      else body = mag.str() + "*" + m.str();
      if (first) s += (neg ? "-" : "") + body;
      else s += (neg ? " - " : " + ") + body;
      first = false;
    }
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : sorted_terms()) {
      nlohmann::json mono = nlohmann::json::object();
      for (const auto& f : m.factors()) mono[Var::from_id(f.var).name()] = f.exp;
      terms.push_back({{"coeff", c.str()}, {"mono", mono}});
    }
    return {{"trunc", trunc_ ? nlohmann::json(*trunc_) : nlohmann::json(nullptr)}, {"terms", terms}};
  }

  static Poly from_json(const nlohmann::json& j) {
    Poly p;
    if (j.contains("trunc") && !j.at("trunc").is_null()) p.trunc_ = j.at("trunc").get<int>();
    for (const auto& t : j.at("terms")) {
      Monomial m;
      for (auto it = t.at("mono").begin(); it != t.at("mono").end(); ++it) m.mul(Var::parse(it.key()), it.value().get<int>());
      p.add_term(m, Integer::parse(t.at("coeff").get<std::string>()));
    }
    return p;
  }

  /// Parse the canonical text form ("3*b^2*c[3] - x[-1] + 1").
  static Poly parse(std::string_view text, std::optional<int> trunc = std::nullopt);

  /// Equality of values: same truncation order and same terms.
  friend bool operator==(const Poly& a, const Poly& b) { return a.trunc_ == b.trunc_ && a.terms_ == b.terms_; }

  static std::optional<int> min_trunc(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
  }

 private:
  void merge_trunc(std::optional<int> o) {
    auto t = min_trunc(trunc_, o);
    if (t != trunc_ && t) truncate(*t);
  }

  Map terms_;
  std::optional<int> trunc_;
};

/// Equality after aligning both sides to the lower truncation order.
inline bool equal_upto_trunc(const Poly& a, const Poly& b) {
  auto t = Poly::min_trunc(a.trunc(), b.trunc());
  return a.truncated(t).terms() == b.truncated(t).terms();
}

inline Poly var(Var v, int e = 1) { return Poly::variable(v, e); }
inline Poly beta() { return Poly::variable(Var::beta()); }

inline Poly Poly::parse(std::string_view text, std::optional<int> trunc) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw DomainError("empty polynomial text");
  Poly out = zero(trunc);
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    int depth = 0;
    while (j < s.size() && (depth > 0 || (s[j] != '+' && s[j] != '-'))) {
      if (s[j] == '[') ++depth;
      if (s[j] == ']') --depth;
      ++j;
    }
    const std::string term = s.substr(i, j - i);
    if (term.empty()) throw DomainError("malformed polynomial text: " + std::string(text));
    Integer coeff(sign);
    Monomial m;
    std::size_t k = 0;
    while (k <= term.size()) {
      std::size_t star = term.find('*', k);
      if (star == std::string::npos) star = term.size();
      const std::string factor = term.substr(k, star - k);
      if (factor.empty()) throw DomainError("malformed term: " + term);
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        coeff *= Integer::parse(factor);
      } else {
        const auto caret = factor.rfind('^');
        const bool has_exp = caret != std::string::npos && factor.find(']', caret) == std::string::npos;
        const Var v = Var::parse(has_exp ? factor.substr(0, caret) : factor);
        m.mul(v, has_exp ? std::stoi(factor.substr(caret + 1)) : 1);
      }
      k = star + 1;
    }
    out.add_term(m, coeff);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ring operations

/// Simultaneous substitution of variables by polynomials.
inline Poly substitute(const Poly& f, const std::map<Var, Poly>& assignment) {
  std::optional<int> trunc = f.trunc();
  for (const auto& [v, p] : assignment) trunc = Poly::min_trunc(trunc, p.trunc());
  std::unordered_map<std::uint64_t, Poly> powers;
  auto power = [&](Var v, int e) -> const Poly& {
    const std::uint64_t key = (static_cast<std::uint64_t>(v.id()) << 32) | static_cast<std::uint32_t>(e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Poly p = assignment.at(v).truncated(trunc).pow(e);
    return powers.emplace(key, std::move(p)).first->second;
  };
  Poly out = Poly::zero(trunc);
  for (const auto& [m, c] : f.terms()) {
    Monomial kept;
    Poly acc;
    bool have_acc = false;
    for (const auto& fac : m.factors()) {
      const Var v = Var::from_id(fac.var);
      if (assignment.count(v)) {
        if (!have_acc) acc = power(v, fac.exp), have_acc = true;
        else acc = acc * power(v, fac.exp);
      } else {
        kept.mul(v, fac.exp);
      }
    }
    if (!have_acc) {
      out.add_term(kept, c);
      continue;
    }
    for (const auto& [am, ac] : acc.terms()) out.add_term(kept * am, ac * c);
  }
  return out;
}

/// Relabel variables through a bijective map (e.g. swapping x_i and x_{i+1}).
template <class Fn>
Poly rename(const Poly& f, Fn fn) {
  Poly out = Poly::zero(f.trunc());
  for (const auto& [m, c] : f.terms()) {
    Monomial r;
    for (const auto& fac : m.factors()) r.mul(fn(Var::from_id(fac.var)), fac.exp);
    out.add_term(r, c);
  }
  return out;
}

/// Divide f by (a - b) exactly, by synthetic division in the variable a;
/// b must not involve a.
inline Poly divide_by_difference(const Poly& f, Var a, const Poly& b) {
  // Group f by the exponent of a.
  std::map<int, Poly, std::greater<>> layers;
  for (const auto& [m, c] : f.terms()) {
    const int e = m.exponent(a);
    Monomial rest = m;
    rest.mul(a, -e);
    auto [it, ins] = layers.try_emplace(e, Poly::zero(f.trunc()));
    it->second.add_term(rest, c);
  }
  Poly quotient = Poly::zero(f.trunc());
  if (layers.empty()) return quotient;
  const Poly& bpoly = b;
  Poly carry = Poly::zero(f.trunc());  // b_k in q = sum b_k a^k
  for (int e = layers.begin()->first; e >= 1; --e) {
    Poly layer = layers.count(e) ? layers[e] : Poly::zero(f.trunc());
    // b_{e-1} = a_e + b * b_e
    carry = layer + bpoly * carry;
    for (const auto& [m, c] : carry.terms()) {
      Monomial mm = m;
      mm.mul(a, e - 1);
      quotient.add_term(mm, c);
    }
  }
  Poly remainder = (layers.count(0) ? layers[0] : Poly::zero(f.trunc())) + bpoly * carry;
  if (!remainder.is_zero()) throw ConsistencyError("inexact division by (" + a.name() + " - " + b.str() + ")");
  return quotient;
}

inline Poly divide_by_difference(const Poly& f, Var a, Var b) { return divide_by_difference(f, a, var(b)); }

/// Exact division f / g by multivariate long division; a nonzero remainder
/// is an internal-consistency error.
inline Poly exact_divide(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw DomainError("division by zero polynomial");
  if (f.trunc() && g.contains_family(Family::Beta))
    throw DomainError("exact_divide of a truncated series needs a beta-free divisor");
  // Graded lex: total exponent first, then the exponent of the smallest
  // variable id where the two differ. Unlike the print order this is a
  // monomial order, so leading terms multiply.
  auto grlex_less = [](const Monomial& a, const Monomial& b) {
    int da = 0, db = 0;
    for (const auto& f : a.factors()) da += f.exp;
    for (const auto& f : b.factors()) db += f.exp;
    if (da != db) return da < db;
    auto i = a.factors().begin(), j = b.factors().begin();
    for (; i != a.factors().end() && j != b.factors().end(); ++i, ++j) {
      if (i->var != j->var) return i->var > j->var;
      if (i->exp != j->exp) return i->exp < j->exp;
    }
    return i == a.factors().end() && j != b.factors().end();
  };
  auto lead = [&](const Poly& p) {
    auto best = p.terms().begin();
    for (auto it = p.terms().begin(); it != p.terms().end(); ++it)
      if (grlex_less(best->first, it->first)) best = it;
    return std::pair<Monomial, Integer>(best->first, best->second);
  };
  const auto [gm, gc] = lead(g);
  Poly rem = f;
  Poly q = Poly::zero(f.trunc());
  Monomial qm;
  while (!rem.is_zero()) {
    const auto [rm, rc] = lead(rem);
    if (!Monomial::divide(rm, gm, qm)) throw ConsistencyError("inexact division");
    const BigInt rb = rc.to_big(), gb = gc.to_big();
    if (rb % gb != 0) throw ConsistencyError("inexact division (coefficient)");
    const Integer qc(BigInt(rb / gb));
    q.add_term(qm, qc);
    rem -= Poly::monomial(qm, qc).truncated(f.trunc()) * g;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Formal group operations

/// (1 + beta v)^{-1} as a geometric series to beta-order n.
inline Poly inverse_one_plus_beta(const Poly& v, int n) {
  const Poly step = (-(beta() * v)).truncated(n);
  Poly term = Poly(1).truncated(n);
  Poly sum = term;
  for (int k = 1; k <= n; ++k) {
    term = term * step;
    if (term.is_zero()) break;
    sum += term;
  }
  return sum;
}

/// u (+) v = u + v + beta u v.
inline Poly oplus(const Poly& u, const Poly& v) { return u + v + beta() * u * v; }

/// u (-) v = (u - v) / (1 + beta v), truncated at beta-order n.
inline Poly ominus(const Poly& u, const Poly& v, int n) {
  return ((u - v).truncated(n)) * inverse_one_plus_beta(v, n);
}

/// (-) v = -v / (1 + beta v).
inline Poly oneg(const Poly& v, int n) { return ominus(Poly(0), v, n); }

/// x~_i = (-) x_i.
inline Poly x_tilde(int i, int n) { return oneg(var(Var::x(i)), n); }

/// Evaluate beta -> 0.
inline Poly beta_to_zero(const Poly& f) {
  Poly r = f.select([](const Monomial& m) { return m.beta() == 0; });
  return r.mark_exact();
}

}  // namespace bsp
