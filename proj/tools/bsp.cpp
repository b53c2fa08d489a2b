#include <algorithm>
#include <atomic>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bsp/bsp.hpp"

using namespace bsp;
using nlohmann::json;

namespace {

struct Options {
  std::string w;
  std::string theory = "K";
  int trunc = kDefaultTrunc;
  std::optional<int> window;
  std::string route = "vexillary";
  bool json_out = false;
  bool certify = false;
  std::optional<int> sweep;
  int jobs = 0;
  std::string poly;
  int sign = 0;
  std::string suite = "all";
  std::string cache_action = "stats";
  bool no_cache = false;
};

// Verdicts that are not errors but still mean "no" (a rejected certificate,
// a failing suite) exit with 1, like domain errors.
struct Outcome {
  std::string text;
  json data;
  bool ok = true;
};

class Runner {
 public:
  explicit Runner(const Options& o) : o_(o) {
    if (!o.no_cache) cache_.emplace();
  }

  Poly family_value(const Permutation& w, Theory theory) {
    const int m = o_.window.value_or(w.min_window());
    const Route route = parse_route(o_.route);
    const std::string key = cache_key(std::string("family:") + route_name(route), w.str(), m,
                                      theory == Theory::K ? std::optional<int>(o_.trunc) : std::nullopt, theory_name(theory));
    if (cache_)
      if (auto hit = cache_->get(key)) return Poly::from_json(*hit);
    const Poly f = theory == Theory::H ? schubert(w, m, route) : grothendieck(w, o_.trunc, m, route);
    if (cache_) cache_->put(key, f.to_json());
    return f;
  }

  CoproductTable table(const Permutation& w, Theory theory, std::optional<int> window) {
    const int m = window.value_or(w.min_window());
    const bool product = o_.route == "product";
    if (product && theory != Theory::K) throw DomainError("the product route computes K-theory coefficients only");
    const std::string key = cache_key(std::string("coprod:") + o_.route, w.str(), m,
                                      theory == Theory::K ? std::optional<int>(o_.trunc) : std::nullopt, theory_name(theory));
    if (cache_)
      if (auto hit = cache_->get(key)) return CoproductTable::from_json(*hit);
    CoproductTable t = product ? coproduct_via_product_route(w, m, o_.trunc)
                               : coproduct_coefficients(w, theory, m, o_.trunc, parse_route(o_.route));
    if (cache_) cache_->put(key, t.to_json());
    return t;
  }

  Outcome coprod(const Permutation& w, Theory theory, std::optional<int> window) {
    const CoproductTable t = table(w, theory, window);
    Outcome out;
    out.data = t.to_json();
    std::optional<TableCertificate> certs;
    if (o_.certify) certs = certify_table(t);
    std::ostringstream text;
    text << "w = " << w.str() << ", theory " << theory_name(theory) << ", window " << t.m;
    if (theory == Theory::K) text << ", N = " << t.trunc;
    text << "\n";
    std::size_t k = 0;
    for (const auto& [key, p] : t.entries) {
      auto& row = out.data["entries"][k++];
      text << "  (" << key.mu.str() << ", " << key.v.str() << ") : " << p.str();
      if (theory == Theory::K) {
        if (reconstruct_rational(p)) {
          const std::string value = evaluate_beta_minus_one(p).str();
          row["beta_minus_one"] = value;
          text << "\n      at beta = -1: " << value;
        } else {
          row["beta_minus_one"] = nullptr;
        }
      }
      if (certs) {
        const auto it = std::find_if(certs->rows.begin(), certs->rows.end(), [&](const auto& r) { return r.key == key; });
        row["certificate"] = it->cert.to_json();
        text << "\n      " << (it->cert.certified() ? "certified" : "rejected: " + it->cert.reason);
        out.ok = out.ok && it->cert.certified();
      }
      text << "\n";
    }
    if (certs) out.data["all_certified"] = certs->all_certified();
    out.text = text.str();
    return out;
  }

 private:
  const Options& o_;
  std::optional<Cache> cache_;
};

std::vector<Permutation> sweep_list(int m, int max_length) {
  std::vector<Permutation> out;
  for (const auto& w : permutations_in_window(m))
    if (w.length() <= max_length) out.push_back(w);
  return out;
}

/// Run f over the inputs on a small worker pool; results keep input order.
template <class F>
std::vector<Outcome> parallel_map(const std::vector<Permutation>& inputs, int jobs, F f) {
  std::vector<Outcome> results(inputs.size());
  std::vector<std::string> errors(inputs.size());
  std::atomic<std::size_t> next{0};
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(inputs.size())));
  auto worker = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      try {
        results[i] = f(inputs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!errors[i].empty()) throw DomainError(inputs[i].str() + ": " + errors[i]);
  return results;
}

int emit(const Options& o, const Outcome& out) {
  if (o.json_out) std::cout << out.data.dump(2) << "\n";
  else std::cout << out.text;
  return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Back-stable Schubert and Grothendieck polynomials and their coproduct coefficients"};
  app.require_subcommand(1);
  Options o;

  auto add_w = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("-w,--perm", o.w, "permutation in one-line notation, e.g. \"[2,1,0,-1]\"");
    if (required) opt->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--window", o.window, "window m, i.e. positions (-m, m]")->check(CLI::PositiveNumber);
    sub->add_option("--trunc", o.trunc, "beta truncation order N")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", o.json_out, "print JSON");
    sub->add_flag("--no-cache", o.no_cache, "do not read or write the on-disk cache");
  };

  auto* schub = app.add_subcommand("schubert", "enriched Schubert polynomial");
  add_w(schub, true);
  add_common(schub);
  schub->add_option("--route", o.route, "vexillary or longest")->check(CLI::IsMember({"vexillary", "longest"}));

  auto* groth = app.add_subcommand("groth", "enriched Grothendieck polynomial");
  add_w(groth, true);
  add_common(groth);
  groth->add_option("--route", o.route, "vexillary or longest")->check(CLI::IsMember({"vexillary", "longest"}));

  auto* coprod = app.add_subcommand("coprod", "coproduct coefficients");
  add_w(coprod, false);
  add_common(coprod);
  coprod->add_option("--theory", o.theory, "H or K")->check(CLI::IsMember({"H", "K"}));
  coprod->add_option("--route", o.route, "vexillary, longest or product")
      ->check(CLI::IsMember({"vexillary", "longest", "product"}));
  coprod->add_flag("--certify", o.certify, "certify positivity of every entry");
  coprod->add_option("--sweep", o.sweep, "all w in the window with length at most L")->check(CLI::NonNegativeNumber);
  coprod->add_option("-j,--jobs", o.jobs, "worker threads for --sweep (default: hardware)");

  auto* cert = app.add_subcommand("certify", "certify positivity of one coefficient");
  cert->add_option("--poly", o.poly, "coefficient, e.g. \"y[-1] - y[1]\"")->required();
  cert->add_option("--theory", o.theory, "H or K")->check(CLI::IsMember({"H", "K"}));
  cert->add_option("--window", o.window, "window m")->check(CLI::PositiveNumber)->required();
  cert->add_option("--trunc", o.trunc, "truncation order of a K input");
  cert->add_option("--sign", o.sign, "sign exponent |mu| + l(v) - l(w)");
  cert->add_flag("--json", o.json_out, "print JSON");

  auto* oracle = app.add_subcommand("oracle", "run property suites");
  oracle->add_option("--suite", o.suite, "operators, windows, examples, routes or all")
      ->check(CLI::IsMember({"operators", "windows", "examples", "routes", "all"}));
  oracle->add_flag("--json", o.json_out, "print JSON");

  auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the on-disk cache");
  cache_cmd->add_option("action", o.cache_action, "stats or clear")->check(CLI::IsMember({"stats", "clear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Runner runner(o);
    if (schub->parsed() || groth->parsed()) {
      const auto w = Permutation::parse(o.w);
      const Theory th = schub->parsed() ? Theory::H : Theory::K;
      const Poly f = runner.family_value(w, th);
      return emit(o, Outcome{f.str() + "\n", f.to_json(), true});
    }

    if (coprod->parsed()) {
      const Theory th = parse_theory(o.theory);
      if (o.sweep) {
        if (!o.w.empty()) throw CLI::ValidationError("--sweep and -w are exclusive");
        const int m = o.window.value_or(2);
        const int jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        const auto results = parallel_map(sweep_list(m, *o.sweep), jobs, [&](const Permutation& w) {
          return runner.coprod(w, th, m);
        });
        Outcome all;
        all.data = json::array();
        for (const auto& r : results) {
          all.text += r.text;
          all.data.push_back(r.data);
          all.ok = all.ok && r.ok;
        }
        return emit(o, all);
      }
      if (o.w.empty()) throw CLI::ValidationError("coprod needs -w or --sweep");
      return emit(o, runner.coprod(Permutation::parse(o.w), th, o.window));
    }

    if (cert->parsed()) {
      const Theory th = parse_theory(o.theory);
      const PrecOrder order(*o.window);
      const Poly p = Poly::parse(o.poly, th == Theory::K ? std::optional<int>(o.trunc) : std::nullopt);
      const auto c = th == Theory::H ? certify_cohomology(p, order) : certify_ktheory(p, o.sign, order);
      std::string text = c.certified() ? "certified\n" : "rejected: " + c.reason + "\n";
      for (const auto& [m, coeff] : c.expansion.sorted_terms()) text += "  " + coeff.str() + " * " + c.monomial_name(m) + "\n";
      return emit(o, Outcome{text, c.to_json(), c.certified()});
    }

    if (oracle->parsed()) {
      std::vector<SuiteReport> reports;
      for (const std::string name : {"operators", "windows", "examples", "routes"})
        if (o.suite == "all" || o.suite == name)
          for (auto& r : run_suite(name)) reports.push_back(std::move(r));
      Outcome out;
      out.data = json::array();
      for (const auto& r : reports) {
        out.text += (r.ok() ? "PASS " : "FAIL ") + r.name + ": " + r.summary() + "\n";
        for (const auto& f : r.failures) out.text += "  failed: " + f + "\n";
        for (const auto& n : r.notes) out.text += "  note: " + n + "\n";
        out.data.push_back({{"suite", r.name}, {"ok", r.ok()}, {"checks", r.checks}, {"failures", r.failures},
                            {"notes", r.notes}, {"seconds", r.seconds}});
        out.ok = out.ok && r.ok();
      }
      return emit(o, out);
    }

    if (cache_cmd->parsed()) {
      Cache cache;
      if (o.cache_action == "clear") std::cout << "removed " << cache.clear() << " entries from " << cache.dir().string() << "\n";
      else std::cout << cache.size() << " entries in " << cache.dir().string() << (cache.enabled() ? "" : " (unavailable)") << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
