#pragma once

// Permutations of Z with finite support, partitions, and vexillary triples.

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bsp {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<long long> parse_int_list(std::string_view text, char open, char close) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.size() < 2 || s.front() != open || s.back() != close)
    throw DomainError("expected a bracketed list: " + std::string(text));
  std::vector<long long> out;
  std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw DomainError("empty list item in " + std::string(text));
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw DomainError("not an integer: " + item);
    }
    if (used != item.size()) throw DomainError("not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Partition

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] <= 0) throw DomainError("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("partition parts must be weakly decreasing");
    }
  }

  static Partition parse(std::string_view text) {
    std::vector<int> parts;
    for (long long v : detail::parse_int_list(text, '(', ')')) parts.push_back(static_cast<int>(v));
    return Partition(std::move(parts));
  }

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  bool empty() const { return parts_.empty(); }
  /// lambda_k with 1-based k; zero past the end.
  int operator[](int k) const { return k >= 1 && k <= length() ? parts_[k - 1] : 0; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
    return s + ")";
  }

  nlohmann::json to_json() const { return nlohmann::json{{"parts", parts_}}; }
  static Partition from_json(const nlohmann::json& j) { return Partition(j.at("parts").get<std::vector<int>>()); }

  bool fits_in_box(int rows, int cols) const { return length() <= rows && (parts_.empty() || parts_[0] <= cols); }

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// All partitions of n, in reverse lexicographic order.
inline std::vector<Partition> partitions_of(int n, int max_part = -1) {
  if (max_part < 0) max_part = n;
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int part = std::min(remaining, cap); part >= 1; --part) {
      cur.push_back(part);
      self(self, remaining - part, part);
      cur.pop_back();
    }
  };
  rec(rec, n, max_part);
  return out;
}

/// Partitions inside a rows x cols box, all sizes.
inline std::vector<Partition> partitions_in_box(int rows, int cols) {
  std::vector<Partition> out;
  for (int n = 0; n <= rows * cols; ++n)
    for (auto& p : partitions_of(n, cols))
      if (p.length() <= rows) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Permutation

/// A bijection of Z fixing all but finitely many integers. Stored on the
/// smallest window (lo, hi] containing every non-fixed point.
class Permutation {
 public:
  Permutation() = default;

  /// images[k] = w(lo + 1 + k).
  static Permutation from_window(long long lo, std::vector<long long> images) {
    const long long n = static_cast<long long>(images.size());
    std::vector<long long> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    for (long long k = 0; k < n; ++k)
      if (sorted[k] != lo + 1 + k) throw DomainError("images do not permute the window");
    Permutation w;
    w.lo_ = lo;
    w.img_ = std::move(images);
    w.canonicalize();
    return w;
  }

  static Permutation parse(std::string_view text) {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s == "e") return Permutation();
    auto vals = detail::parse_int_list(s, '[', ']');
    if (vals.empty()) return Permutation();
    std::vector<long long> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("duplicate values in " + std::string(text));
    if (sorted.back() - sorted.front() + 1 != static_cast<long long>(sorted.size()))
      throw DomainError("values do not form a contiguous interval: " + std::string(text));
    return from_window(sorted.front() - 1, std::move(vals));
  }

  static Permutation simple(long long i) { return from_window(i - 1, {i + 1, i}); }

  long long operator()(long long i) const { return in_window(i) ? img_[i - lo_ - 1] : i; }

  long long lo() const { return lo_; }
  long long hi() const { return lo_ + static_cast<long long>(img_.size()); }
  bool is_identity() const { return img_.empty(); }
  const std::vector<long long>& images() const { return img_; }

  /// Smallest m >= 1 with support inside (-m, m].
  int min_window() const {
    if (img_.empty()) return 1;
    return static_cast<int>(std::max<long long>({1, hi(), -lo_}));
  }
  bool fits_window(int m) const { return img_.empty() || (lo_ >= -m && hi() <= m); }

  /// One-line images on positions -m+1 .. m.
  std::vector<long long> images_on(int m) const {
    if (!fits_window(m)) throw DomainError("window too small for " + str());
    std::vector<long long> out;
    for (long long i = -m + 1; i <= m; ++i) out.push_back((*this)(i));
    return out;
  }

  std::string str() const {
    if (img_.empty()) return "e";
    std::string s = "[";
    for (std::size_t k = 0; k < img_.size(); ++k) s += (k ? "," : "") + std::to_string(img_[k]);
    return s + "]";
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"window", {lo_, hi()}}, {"images", img_}};
  }
  static Permutation from_json(const nlohmann::json& j) {
    return from_window(j.at("window").at(0).get<long long>(), j.at("images").get<std::vector<long long>>());
  }

  Permutation inverse() const {
    std::vector<long long> inv(img_.size());
    for (std::size_t k = 0; k < img_.size(); ++k) inv[img_[k] - lo_ - 1] = lo_ + 1 + static_cast<long long>(k);
    Permutation w;
    w.lo_ = lo_;
    w.img_ = std::move(inv);
    return w;
  }

  /// (this * o)(i) = this(o(i)).
  Permutation operator*(const Permutation& o) const {
    if (is_identity()) return o;
    if (o.is_identity()) return *this;
    const long long a = std::min(lo_, o.lo_), b = std::max(hi(), o.hi());
    std::vector<long long> imgs;
    for (long long i = a + 1; i <= b; ++i) imgs.push_back((*this)(o(i)));
    return from_window(a, std::move(imgs));
  }

  /// w * s_i: swaps the entries in positions i and i+1.
  Permutation times_simple(long long i) const {
    const long long a = std::min(lo_, i - 1), b = std::max(hi(), i + 1);
    std::vector<long long> imgs;
    for (long long j = a + 1; j <= b; ++j) imgs.push_back((*this)(j));
    std::swap(imgs[i - a - 1], imgs[i - a]);
    return from_window(a, std::move(imgs));
  }

  bool has_descent(long long i) const { return (*this)(i) > (*this)(i + 1); }

  std::vector<long long> descents() const {
    std::vector<long long> out;
    for (long long i = lo_; i < hi(); ++i)
      if (has_descent(i)) out.push_back(i);
    return out;
  }

  int length() const {
    int n = 0;
    for (std::size_t a = 0; a < img_.size(); ++a)
      for (std::size_t b = a + 1; b < img_.size(); ++b) n += img_[a] > img_[b];
    return n;
  }

  /// k_w(p,q) = #{ i <= p : w(i) > q }.
  long long dimension(long long p, long long q) const {
    long long count = 0;
    // Fixed points below the window.
    const long long below_top = std::min(p, lo_);
    if (below_top > q) count += below_top - q;
    for (long long i = lo_ + 1; i <= std::min(p, hi()); ++i) count += (*this)(i) > q;
    if (p > hi()) {
      const long long from = std::max(q, hi());
      if (p > from) count += p - from;
    }
    return count;
  }

  /// Reduced word (j_1, ..., j_l) with w = s_{j_1} ... s_{j_l}, built by
  /// repeatedly stripping the leftmost descent on the right.
  std::vector<long long> reduced_word() const {
    std::vector<long long> found;
    Permutation u = *this;
    while (!u.is_identity()) {
      long long i = u.lo_ + 1;
      while (!u.has_descent(i)) ++i;
      found.push_back(i);
      u = u.times_simple(i);
    }
    std::reverse(found.begin(), found.end());
    return found;
  }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation& o) const {
    if (auto c = lo_ <=> o.lo_; c != 0) return c;
    return img_ <=> o.img_;
  }

 private:
  bool in_window(long long i) const { return i > lo_ && i <= hi(); }

  void canonicalize() {
    std::size_t a = 0, b = img_.size();
    while (a < b && img_[a] == lo_ + 1 + static_cast<long long>(a)) ++a;
    while (b > a && img_[b - 1] == lo_ + static_cast<long long>(b)) --b;
    if (a == b) {
      lo_ = 0;
      img_.clear();
      return;
    }
    img_ = std::vector<long long>(img_.begin() + a, img_.begin() + b);
    lo_ += static_cast<long long>(a);
  }

  long long lo_ = 0;
  std::vector<long long> img_;
};

inline int length(const Permutation& w) { return w.length(); }

inline long long dimension_function(const Permutation& w, long long p, long long q) { return w.dimension(p, q); }

/// Bruhat order through dimension functions over the padded union window.
inline bool bruhat_leq(const Permutation& w, const Permutation& v) {
  if (w.length() > v.length()) return false;
  long long a = std::min(w.lo(), v.lo()) - 1, b = std::max(w.hi(), v.hi()) + 1;
  if (w.is_identity()) a = v.lo() - 1, b = v.hi() + 1;
  if (v.is_identity()) {
    a = std::min(a, w.lo() - 1);
    b = std::max(b, w.hi() + 1);
  }
  for (long long p = a; p <= b; ++p)
    for (long long q = a; q <= b; ++q)
      if (w.dimension(p, q) > v.dimension(p, q)) return false;
  return true;
}

/// All permutations of the window (-m, m].
inline std::vector<Permutation> permutations_in_window(int m) {
  std::vector<long long> imgs;
  for (long long i = -m + 1; i <= m; ++i) imgs.push_back(i);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation::from_window(-m, imgs));
  } while (std::next_permutation(imgs.begin(), imgs.end()));
  return out;
}

/// w_circ on (-m, m]: the decreasing arrangement.
inline Permutation longest(int m) {
  if (m < 1) throw DomainError("longest element needs m >= 1");
  std::vector<long long> imgs;
  for (long long v = m; v > -m; --v) imgs.push_back(v);
  return Permutation::from_window(-m, std::move(imgs));
}

/// The 0-Grassmannian permutation w_mu.
inline Permutation grassmannian_of_partition(const Partition& mu) {
  if (mu.empty()) return Permutation();
  const long long s = mu.length();
  std::set<long long> used;
  std::map<long long, long long> img;
  for (long long k = -s + 1; k <= 0; ++k) {
    img[k] = mu[static_cast<int>(1 - k)] + k;
    used.insert(img[k]);
  }
  // Positions <= -s are fixed, so values <= -s are taken.
  long long next = -s + 1;
  const long long top = mu[1] + 1;  // every value above mu_1 is unused and lands on itself
  for (long long k = 1; k <= top + s; ++k) {
    while (used.count(next)) ++next;
    img[k] = next++;
  }
  std::vector<long long> imgs;
  for (auto& [pos, val] : img) imgs.push_back(val);
  return Permutation::from_window(-s, std::move(imgs));
}

inline bool is_grassmannian(const Permutation& w) {
  for (long long i : w.descents())
    if (i != 0) return false;
  return true;
}

inline Partition partition_of(const Permutation& w) {
  if (!is_grassmannian(w)) throw DomainError(w.str() + " has a descent away from 0");
  std::vector<int> parts;
  for (long long k = 1;; ++k) {
    const long long part = w(1 - k) - 1 + k;
    if (part <= 0) break;
    parts.push_back(static_cast<int>(part));
  }
  return Partition(parts);
}

/// mu (/)_m v in S_(-2m,2m].
inline Permutation oslash(const Partition& mu, const Permutation& v, int m) {
  const Permutation wmu = grassmannian_of_partition(mu);
  if (!wmu.fits_window(m) || !v.fits_window(m)) throw DomainError("window too small for oslash");
  std::vector<long long> imgs;
  for (long long i = -m + 1; i <= 0; ++i) imgs.push_back(wmu(i) - m);
  for (long long i = -m + 1; i <= m; ++i) imgs.push_back(v(i) + m);
  for (long long i = 1; i <= m; ++i) imgs.push_back(wmu(i) - m);
  return Permutation::from_window(-2 * m, std::move(imgs));
}

/// x^(m) = [-2m+1, ..., -m, 1, ..., 2m, -m+1, ..., 0].
inline Permutation x_perm(int m) {
  if (m < 1) throw DomainError("x_perm needs m >= 1");
  std::vector<long long> imgs;
  for (long long v = -2 * m + 1; v <= -m; ++v) imgs.push_back(v);
  for (long long v = 1; v <= 2 * m; ++v) imgs.push_back(v);
  for (long long v = -m + 1; v <= 0; ++v) imgs.push_back(v);
  return Permutation::from_window(-2 * m, std::move(imgs));
}

// ---------------------------------------------------------------------------
// Vexillary triples

struct Triple {
  std::vector<int> k, p, q;

  int size() const { return static_cast<int>(k.size()); }

  void validate() const {
    if (k.size() != p.size() || k.size() != q.size() || k.empty())
      throw DomainError("triple sequences must be nonempty and of equal length");
    for (int i = 0; i < size(); ++i) {
      if (k[i] <= 0 || (i > 0 && k[i] <= k[i - 1])) throw DomainError("k must be strictly increasing and positive");
      if (i > 0 && p[i] < p[i - 1]) throw DomainError("p must be weakly increasing");
      if (i > 0 && q[i] > q[i - 1]) throw DomainError("q must be weakly decreasing");
      if (i > 0 && q[i] - p[i] + k[i] > q[i - 1] - p[i - 1] + k[i - 1])
        throw DomainError("q - p + k must be nonincreasing");
    }
    if (q.back() - p.back() + k.back() <= 0) throw DomainError("triple yields a nonpositive part");
  }

  /// lambda_{k_i} = q_i - p_i + k_i, constant on (k_{i-1}, k_i].
  Partition partition() const {
    validate();
    std::vector<int> parts;
    for (int i = 0; i < size(); ++i)
      while (static_cast<int>(parts.size()) < k[i]) parts.push_back(q[i] - p[i] + k[i]);
    return Partition(parts);
  }

  /// Index i (0-based) of the condition governing row r (1-based).
  int condition_for_row(int r) const {
    for (int i = 0; i < size(); ++i)
      if (r <= k[i]) return i;
    throw DomainError("row outside triple");
  }

  bool operator==(const Triple&) const = default;
};

/// The minimal permutation with k_w(p_i, q_i) = k_i, with its partition.
inline std::pair<Permutation, Partition> vexillary_from_triple(const Triple& tau) {
  tau.validate();
  const Partition lambda = tau.partition();
  const int ks = tau.k.back();
  long long lo = std::min(*std::min_element(tau.p.begin(), tau.p.end()), *std::min_element(tau.q.begin(), tau.q.end())) - ks - 1;
  long long hi = std::max(*std::max_element(tau.p.begin(), tau.p.end()), *std::max_element(tau.q.begin(), tau.q.end())) + ks + 1;
  std::set<long long> available;
  for (long long v = lo + 1; v <= hi; ++v) available.insert(v);
  std::vector<long long> imgs;
  std::vector<int> have(tau.size(), 0);
  for (long long i = lo + 1; i <= hi; ++i) {
    long long threshold = std::numeric_limits<long long>::min();
    for (int j = 0; j < tau.size(); ++j) {
      if (tau.p[j] < i) continue;
      const long long need = tau.k[j] - have[j];
      const long long slots = tau.p[j] - i + 1;
      if (need > slots) throw DomainError("inconsistent triple");
      if (need == slots && need > 0) threshold = std::max<long long>(threshold, tau.q[j]);
    }
    auto it = threshold == std::numeric_limits<long long>::min() ? available.begin() : available.upper_bound(threshold);
    if (it == available.end()) throw DomainError("inconsistent triple");
    const long long v = *it;
    available.erase(it);
    imgs.push_back(v);
    for (int j = 0; j < tau.size(); ++j)
      if (i <= tau.p[j] && v > tau.q[j]) ++have[j];
  }
  Permutation w = Permutation::from_window(lo, std::move(imgs));
  for (int j = 0; j < tau.size(); ++j)
    if (w.dimension(tau.p[j], tau.q[j]) != tau.k[j]) throw DomainError("inconsistent triple");
  if (w.length() != lambda.size()) throw DomainError("inconsistent triple: length does not match |lambda|");
  return {w, lambda};
}

/// 2143-avoidance.
inline bool is_vexillary(const Permutation& w) {
  const auto& a = w.images();
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (a[j] >= a[i]) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (a[k] <= a[i]) continue;
        for (std::size_t l = k + 1; l < n; ++l)
          if (a[l] > a[j] && a[l] < a[k]) return false;
      }
    }
  return true;
}

/// Triple read off the essential set of the diagram; nullopt when w is not
/// vexillary or the conditions do not reproduce w.
inline std::optional<Triple> triple_of(const Permutation& w) {
  if (w.is_identity() || !is_vexillary(w)) return std::nullopt;
  const Permutation winv = w.inverse();
  auto in_diagram = [&](long long p, long long q) { return w(p) > q && winv(q) > p; };
  std::vector<std::array<long long, 3>> cells;
  for (long long p = w.lo() + 1; p <= w.hi(); ++p)
    for (long long q = w.lo() + 1; q <= w.hi(); ++q)
      if (in_diagram(p, q) && !in_diagram(p + 1, q) && !in_diagram(p, q + 1))
        cells.push_back({w.dimension(p, q), p, q});
  std::sort(cells.begin(), cells.end());
  Triple tau;
  for (auto& [k, p, q] : cells) {
    tau.k.push_back(static_cast<int>(k));
    tau.p.push_back(static_cast<int>(p));
    tau.q.push_back(static_cast<int>(q));
  }
  try {
    if (vexillary_from_triple(tau).first == w) return tau;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

/// Triple (k_i = i, p_i = -m + i, q_i = m - i) of w_circ on (-m, m].
inline Triple longest_triple(int m) {
  Triple tau;
  for (int i = 1; i <= 2 * m - 1; ++i) {
    tau.k.push_back(i);
    tau.p.push_back(-m + i);
    tau.q.push_back(m - i);
  }
  return tau;
}

}  // namespace bsp
