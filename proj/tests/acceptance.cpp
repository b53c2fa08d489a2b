// Acceptance run: one PASS/FAIL line per criterion.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "bsp/suites.hpp"

using namespace bsp;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::vector<SuiteReport> reports;
  std::optional<double> time_limit;
};

bool report(const Criterion& c) {
  bool ok = true;
  double seconds = 0;
  int checks = 0, failures = 0;
  for (const auto& r : c.reports) {
    ok = ok && r.ok();
    seconds += r.seconds;
    checks += r.checks;
    failures += static_cast<int>(r.failures.size());
  }
  const bool in_time = !c.time_limit || seconds < *c.time_limit;
  ok = ok && in_time;
  std::printf("%s %d %s (%d checks, %d failures, %.1fs)\n", ok ? "PASS" : "FAIL", c.number, c.title.c_str(), checks,
              failures, seconds);
  if (!in_time) std::printf("    over the %.0fs limit\n", *c.time_limit);
  for (const auto& r : c.reports) {
    for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
    int shown = 0;
    for (const auto& f : r.failures) {
      if (++shown > 10) {
        std::printf("    ... %zu more\n", r.failures.size() - 10);
        break;
      }
      std::printf("    failed: %s\n", f.c_str());
    }
  }
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  bool all = true;
  all &= report({1, "base cases", {base_cases_suite(6)}, 1.0});
  all &= report({2, "dominant finite specialization", {dominant_suite(4)}, 10.0});
  all &= report({3, "displayed coefficients", {examples_suite(6)}, std::nullopt});
  all &= report({4, "positivity sweep", {positivity_suite(6, 3)}, std::nullopt});
  all &= report({5, "route equivalence", {routes_suite(6, 4)}, std::nullopt});
  all &= report({6, "operator algebra", {operators_suite(100)}, std::nullopt});
  all &= report({7, "back-stability", {windows_suite(kDefaultTrunc, 4)}, std::nullopt});
  all &= report({8, "degeneration", {degeneration_suite(6, 3)}, std::nullopt});
  all &= report({9, "Bruhat order", {bruhat_suite(2)}, std::nullopt});
  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
