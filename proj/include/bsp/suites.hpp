#pragma once

// Property suites and regression checks shared by the CLI oracle command,
// the acceptance runner and the tests.

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coproduct.hpp"
#include "families.hpp"
#include "operators.hpp"
#include "positivity.hpp"

namespace bsp {

struct SuiteReport {
  std::string name;
  int checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  double seconds = 0;

  bool ok() const { return failures.empty() && checks > 0; }
  void check(bool cond, const std::string& what) {
    ++checks;
    if (!cond) failures.push_back(what);
  }
  std::string summary() const {
    std::string s = std::to_string(checks) + " checks, " + std::to_string(failures.size()) + " failures";
    char buf[32];
    std::snprintf(buf, sizeof buf, ", %.1fs", seconds);
    return s + buf;
  }
};

namespace detail {

template <class F>
SuiteReport timed(std::string name, F body) {
  SuiteReport r;
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Equality up to the smaller truncation order of the two sides.
inline bool same_series(const Poly& a, const Poly& b) {
  const auto n = Poly::min_trunc(a.trunc(), b.trunc());
  return (a.truncated(n) - b.truncated(n)).is_zero();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certification of whole tables

struct TableCertificate {
  struct Row {
    PairKey key;
    PositivityCertificate cert;
    int trunc_used = 0;
  };
  std::vector<Row> rows;
  bool all_certified() const {
    return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.cert.certified(); });
  }
};

/// Certify every entry of a table. K entries whose beta = -1 value is not
/// determined at the table's truncation are recomputed at higher truncation
/// (up to trunc + extra).
inline TableCertificate certify_table(const CoproductTable& t, int extra = 6) {
  const PrecOrder order(t.m);
  TableCertificate out;
  std::vector<PairKey> pending;
  for (const auto& [key, p] : t.entries) {
    if (t.theory == Theory::H) {
      out.rows.push_back({key, certify_cohomology(p, order), 0});
      continue;
    }
    const int e = key.mu.size() + key.v.length() - t.w.length();
    if (reconstruct_rational(p)) out.rows.push_back({key, certify_ktheory(p, e, order), t.trunc});
    else pending.push_back(key);
  }
  for (int n = t.trunc + 2; !pending.empty() && n <= t.trunc + extra; n += 2) {
    const auto wider = coproduct_coefficients(t.w, t.theory, t.m, n);
    std::vector<PairKey> still;
    for (const auto& key : pending) {
      const Poly p = wider.at(key.mu, key.v);
      if (!reconstruct_rational(p)) {
        still.push_back(key);
        continue;
      }
      const int e = key.mu.size() + key.v.length() - t.w.length();
      out.rows.push_back({key, certify_ktheory(p, e, order), n});
    }
    pending = std::move(still);
  }
  for (const auto& key : pending) {
    const int e = key.mu.size() + key.v.length() - t.w.length();
    out.rows.push_back({key, certify_ktheory(t.entries.at(key), e, order), t.trunc});
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

// ---------------------------------------------------------------------------
// Displayed example values

struct ExampleValue {
  std::string w, mu, v;
  std::function<Poly(int)> value;  // as a series truncated at N
  std::string note;
};

inline std::vector<ExampleValue> example_values() {
  auto z = [](int i) { return var(Var::z(i)); };
  auto om = [z](int a, int b, int n) { return ominus(z(a), z(b), n); };
  auto one_plus = [om](int a, int b) { return [om, a, b](int n) { return (Poly(1) + beta() * om(a, b, n)).truncated(n); }; };
  std::vector<ExampleValue> ex;
  ex.push_back({"[2,1,0,-1]", "(2,2)", "[1,0,-1]",
                [om](int n) {
                  return (beta() * beta() * (Poly(1) + beta() * om(0, 2, n)) * om(-1, 1, n)).truncated(n);
                },
                ""});
  ex.push_back({"[2,1,0,-1]", "(2,1)", "[1,2,-1,0]",
                [om](int n) {
                  const Poly b = beta();
                  const Poly a = Poly(1) + b * om(0, 1, n);
                  return (b * (a * (Poly(1) + b * om(-1, 2, n)) + a * (Poly(1) + b * om(-1, 1, n)) +
                               a * (Poly(1) + b * om(0, 2, n)) + b * om(0, 1, n) * a))
                      .truncated(n);
                },
                "displayed with v = [1,2,0,-1], which has length 5 and cannot carry a value of degree -1; "
                "the value is the entry at v = [1,2,-1,0]"});
  ex.push_back({"[0,-1,2,1]", "(2,1)", "e", [om](int n) { return (beta() + beta() * beta() * om(0, 1, n)).truncated(n); }, ""});
  ex.push_back({"[0,-1,2,1]", "(2)", "e", one_plus(0, 1), ""});
  ex.push_back({"[0,-1,2,1]", "(1,1)", "e", one_plus(0, 1), ""});
  ex.push_back({"[0,-1,2,1]", "(1)", "e", [om](int n) { return om(0, 1, n); }, ""});
  ex.push_back({"[3,1,2]", "(2)", "e", one_plus(2, 1), ""});
  ex.push_back({"[2,3,1]", "(1,1)", "e", one_plus(0, 2), ""});
  ex.push_back({"[2,0,1]", "(2)", "e", [](int n) { return Poly(1).truncated(n); }, ""});
  ex.push_back({"[1,2,0]", "(1,1)", "e", one_plus(0, 1), ""});
  ex.push_back({"[1,-1,0]", "(2)", "e", one_plus(0, 1), ""});
  ex.push_back({"[0,1,-1]", "(1,1)", "e", [](int n) { return Poly(1).truncated(n); }, ""});
  ex.push_back({"[0,-2,-1]", "(2)", "e", one_plus(-1, 1), ""});
  ex.push_back({"[-1,0,-2]", "(1,1)", "e", one_plus(0, -1), ""});
  return ex;
}

inline Partition parse_partition(const std::string& s) {
  if (s == "()" || s.empty()) return Partition();
  std::vector<int> parts;
  for (long long v : detail::parse_int_list(s, '(', ')')) parts.push_back(static_cast<int>(v));
  return Partition(parts);
}

// ---------------------------------------------------------------------------
// Suites

/// S_{s0} = c_1, G_{s0} = sum_{i <= N+1} beta^{i-1} c_i, d_0 S_{s0} = 1, pi_0 G_{s0} = 1.
inline SuiteReport base_cases_suite(int n = 6) {
  return detail::timed("base cases", [n](SuiteReport& r) {
    const auto s0 = Permutation::simple(0);
    const RingSpec h{Theory::H, 0, std::nullopt}, k{Theory::K, n, std::nullopt};
    const Poly s = schubert(s0);
    r.check(s == var(Var::c(1)), "S_{s0} = c[1], got " + s.str());
    const Poly g = grothendieck(s0, n);
    Poly expect = Poly::zero(n);
    for (int i = 1; i <= n + 1; ++i) expect += var(Var::beta(), i - 1) * var(Var::c(i));
    r.check(detail::same_series(g, expect) && g.trunc() == n, "G_{s0} at N=" + std::to_string(n) + ", got " + g.str());
    r.check(divided_difference(0, s, h) == Poly(1), "d_0 S_{s0} = 1");
    r.check(detail::same_series(isobaric(0, g, k), Poly(1).truncated(n)), "pi_0 G_{s0} = 1");
  });
}

/// G_{[n,...,1]}(x; z) at beta = -1 equals prod_{i+j<=n} (x_i + z_j - x_i z_j).
inline SuiteReport dominant_suite(int nmax = 4) {
  return detail::timed("dominant specialization", [nmax](SuiteReport& r) {
    for (int n = 2; n <= nmax; ++n) {
      std::vector<long long> imgs;
      for (long long v = n; v >= 1; --v) imgs.push_back(v);
      const auto w = Permutation::from_window(0, imgs);
      const int trunc = n * (n - 1) / 2 + 2;
      const Poly g = specialize_finite(grothendieck(w, trunc), Theory::K);
      Poly expect(1);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; i + j <= n; ++j) {
          const Poly x = var(Var::x(i)), z = var(Var::z(j));
          expect = expect * (x + z - x * z);
        }
      r.check(g == expect, "dominant n=" + std::to_string(n));
    }
  });
}

/// The displayed coefficient values, term by term at truncation N.
inline SuiteReport examples_suite(int n = 6) {
  return detail::timed("displayed coefficients", [n](SuiteReport& r) {
    std::map<std::string, CoproductTable> tables;
    for (const auto& ex : example_values()) {
      auto it = tables.find(ex.w);
      if (it == tables.end())
        it = tables.emplace(ex.w, coproduct_coefficients(Permutation::parse(ex.w), Theory::K, std::nullopt, n)).first;
      const Poly got = it->second.at(parse_partition(ex.mu), Permutation::parse(ex.v));
      r.check(got == ex.value(n), "d^" + ex.w + "_{" + ex.mu + "," + ex.v + "} = " + got.str());
      if (!ex.note.empty()) r.notes.push_back(ex.w + " " + ex.mu + ": " + ex.note);
    }
  });
}

/// Every table entry certifies for w in S_(-2,2] with l(w) <= lmax, both theories.
inline SuiteReport positivity_suite(int n = 6, int lmax = 3) {
  return detail::timed("positivity sweep", [n, lmax](SuiteReport& r) {
    for (const auto& w : permutations_in_window(2)) {
      if (w.length() > lmax) continue;
      for (Theory th : {Theory::H, Theory::K}) {
        const auto cert = certify_table(coproduct_coefficients(w, th, 2, n));
        for (const auto& row : cert.rows)
          r.check(row.cert.certified(), theory_name(th) + " " + w.str() + " (" + row.key.mu.str() + ", " + row.key.v.str() +
                                            "): " + row.cert.reason);
      }
    }
  });
}

/// The product route against the direct expansion, compared at beta = -1.
/// Entries whose beta = -1 value is not determined at truncation N are
/// compared as series instead.
inline SuiteReport routes_suite(int n = 6, int lmax = 4) {
  return detail::timed("route equivalence", [n, lmax](SuiteReport& r) {
    const int m = 2;
    int laurent = 0, series = 0, outside = 0;
    for (const auto& w : permutations_in_window(m)) {
      if (w.length() > lmax || w.lo() < -1) continue;  // w in S_(-1,2]
      const auto direct = coproduct_coefficients(w, Theory::K, m, n);
      const auto product = coproduct_via_product_route(w, m, n);
      std::set<PairKey> keys;
      for (const auto& [k, p] : direct.entries) {
        if (k.mu.fits_in_box(m, m)) keys.insert(k);
        else ++outside;
      }
      for (const auto& [k, p] : product.entries) keys.insert(k);
      for (const auto& key : keys) {
        const Poly a = direct.at(key.mu, key.v), b = product.at(key.mu, key.v);
        const std::string what = w.str() + " (" + key.mu.str() + ", " + key.v.str() + ")";
        const auto ra = reconstruct_rational(a), rb = reconstruct_rational(b);
        if (ra && rb) {
          ++laurent;
          r.check(evaluate_beta_minus_one(a) == evaluate_beta_minus_one(b), what + " at beta = -1");
        } else {
          ++series;
          r.check(detail::same_series(a, b), what + " as series");
        }
      }
    }
    r.notes.push_back(std::to_string(laurent) + " entries compared at beta = -1, " + std::to_string(series) +
                      " as series, " + std::to_string(outside) + " outside the " + std::to_string(m) + "x" +
                      std::to_string(m) + " box");
  });
}

namespace detail {

inline Poly random_homogeneous(std::mt19937& rng, int degree, Theory theory, int trunc) {
  std::uniform_int_distribution<int> coeff(-3, 3), nterms(1, 4), pick(0, 8), beta_pow(0, 1);
  Poly f = theory == Theory::K ? Poly::zero(trunc) : Poly();
  const int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    const int b = theory == Theory::K ? beta_pow(rng) : 0;
    int left = degree + b;
    Monomial m;
    if (b) m.mul(Var::beta(), b);
    while (left > 0) {
      const int k = pick(rng);
      if (k < 6) {
        m.mul(Var::x(k - 2), 1);
        --left;
      } else {
        const int idx = std::min(k - 5, left);  // c_1 .. c_3
        m.mul(Var::c(idx), 1);
        left -= idx;
      }
    }
    f.add_term(m, Integer(coeff(rng)));
  }
  return f;
}

}  // namespace detail

/// Nil-Hecke and 0-Hecke relations and both Leibniz rules on random inputs.
inline SuiteReport operators_suite(int count = 100, unsigned seed = 20240601, int trunc = 8) {
  return detail::timed("operator algebra", [=](SuiteReport& r) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> deg(0, 5);
    const RingSpec h{Theory::H, 0, std::nullopt}, k{Theory::K, trunc, std::nullopt};
    for (int t = 0; t < count; ++t) {
      for (Theory th : {Theory::H, Theory::K}) {
        const RingSpec& ring = th == Theory::H ? h : k;
        const Poly f = detail::random_homogeneous(rng, deg(rng), th, trunc);
        const Poly g = detail::random_homogeneous(rng, deg(rng), th, trunc);
        const std::string tag = theory_name(th) + " #" + std::to_string(t) + " ";
        std::map<int, Poly> df, pf;
        for (int i = -2; i <= 2; ++i) {
          df[i] = divided_difference(i, f, ring);
          r.check(divided_difference(i, df[i], ring).is_zero(), tag + "d_i^2 = 0, i=" + std::to_string(i));
          // Leibniz: d_i(fg) = d_i(f) g + s_i(f) d_i(g)
          r.check(detail::same_series(divided_difference(i, f * g, ring),
                                      df[i] * g + s_action(i, f, ring) * divided_difference(i, g, ring)),
                  tag + "Leibniz for d_i, i=" + std::to_string(i));
          if (th == Theory::K) {
            pf[i] = isobaric(i, f, ring);
            r.check(detail::same_series(isobaric(i, pf[i], ring), -(beta() * pf[i])),
                    tag + "pi_i^2 = -beta pi_i, i=" + std::to_string(i));
            // pi_i(fg) = pi_i(f) g + (1 + beta x_i) s_i(f) d_i(g)
            r.check(detail::same_series(isobaric(i, f * g, ring),
                                        pf[i] * g + (Poly(1) + beta() * var(Var::x(i))) * s_action(i, f, ring) *
                                                        divided_difference(i, g, ring)),
                    tag + "Leibniz for pi_i, i=" + std::to_string(i));
          }
        }
        for (int i = -2; i <= 2; ++i)
          for (int j = -2; j <= 2; ++j) {
            if (j <= i) continue;
            auto op = [&](int a, const Poly& p) { return lowering(a, p, ring); };
            const auto& first = th == Theory::H ? df : pf;
            const std::string ij = " i=" + std::to_string(i) + " j=" + std::to_string(j);
            if (j == i + 1) {
              r.check(detail::same_series(op(i, op(j, first.at(i))), op(j, op(i, first.at(j)))), tag + "braid" + ij);
            } else {
              r.check(detail::same_series(op(i, first.at(j)), op(j, first.at(i))), tag + "commutation" + ij);
            }
          }
      }
    }
  });
}

/// S_w and G_w do not depend on the window, for w in S_(-2,2] with l(w) <= lmax.
inline SuiteReport windows_suite(int trunc = kDefaultTrunc, int lmax = 4) {
  return detail::timed("window stability", [=](SuiteReport& r) {
    for (const auto& w : permutations_in_window(2)) {
      if (w.length() > lmax) continue;
      for (int m = w.min_window(); m <= 2; ++m) {
        const std::string tag = w.str() + " m=" + std::to_string(m) + " vs " + std::to_string(m + 1);
        r.check(schubert(w, m) == schubert(w, m + 1), "Schubert " + tag);
        r.check(grothendieck(w, trunc, m) == grothendieck(w, trunc, m + 1), "Grothendieck " + tag);
      }
    }
  });
}

/// beta -> 0, z -> y turns G_w into S_w and K tables into H tables.
inline SuiteReport degeneration_suite(int trunc = 6, int lmax = 3) {
  return detail::timed("degeneration", [=](SuiteReport& r) {
    for (const auto& w : permutations_in_window(2)) {
      if (w.length() > lmax) continue;
      r.check(beta_zero(grothendieck(w, trunc, 2)) == schubert(w, 2), "G -> S for " + w.str());
      const auto kt = coproduct_coefficients(w, Theory::K, 2, trunc);
      const auto ht = coproduct_coefficients(w, Theory::H, 2, trunc);
      std::set<PairKey> keys;
      for (const auto& [key, p] : kt.entries) keys.insert(key);
      for (const auto& [key, p] : ht.entries) keys.insert(key);
      for (const auto& key : keys)
        r.check(beta_zero(kt.at(key.mu, key.v)) == ht.at(key.mu, key.v),
                "table " + w.str() + " (" + key.mu.str() + ", " + key.v.str() + ")");
    }
  });
}

/// v <= w iff some subword of a reduced word of w is a reduced word of v.
inline bool subword_leq(const Permutation& v, const Permutation& w) {
  const auto word = w.reduced_word();
  const int n = static_cast<int>(word.size());
  const int lv = v.length();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != lv) continue;
    Permutation u;
    for (int k = 0; k < n; ++k)
      if (mask & (1u << k)) u = u * Permutation::simple(word[k]);
    if (u == v) return true;
  }
  return false;
}

/// Bruhat order from the dimension function against the subword criterion.
inline SuiteReport bruhat_suite(int m = 2) {
  return detail::timed("Bruhat order", [m](SuiteReport& r) {
    const auto perms = permutations_in_window(m);
    for (const auto& v : perms)
      for (const auto& w : perms)
        r.check(bruhat_leq(v, w) == subword_leq(v, w), v.str() + " <= " + w.str());
  });
}

/// Suites grouped under the CLI names.
inline std::vector<SuiteReport> run_suite(const std::string& name) {
  if (name == "operators") return {operators_suite(), bruhat_suite()};
  if (name == "windows") return {windows_suite(), degeneration_suite()};
  if (name == "examples") return {base_cases_suite(), dominant_suite(), examples_suite(), positivity_suite()};
  if (name == "routes") return {routes_suite()};
  throw DomainError("unknown suite: " + name + " (expected operators, windows, examples or routes)");
}

}  // namespace bsp
