// Runs the twelve acceptance criteria and prints one line for each.

#include <chrono>
#include <cstdio>
#include <exception>

#include "s2lab/verify.hpp"

int main() {
  int failures = 0;
  for (int id = 1; id <= s2lab::kCriterionCount; ++id) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<s2lab::Check> checks;
    std::string error;
    try {
      checks = s2lab::run_criterion(id);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool ok = error.empty() && !checks.empty() && s2lab::all_passed(checks);
    if (!ok) ++failures;
    // Show the first failing check, or the last one when all pass.
    std::string shown = error;
    if (shown.empty() && !checks.empty()) {
      shown = checks.back().label;
      for (const auto& c : checks)
        if (!c.passed) {
          shown = c.label;
          break;
        }
    }
    std::printf("AC-%02d %-34s %s  (%zu checks, %.2fs) %s\n", id, std::string(s2lab::criterion_title(id)).c_str(),
                ok ? "PASS" : "FAIL", checks.size(), secs, shown.c_str());
  }
  std::printf("%d of %d criteria passed\n", s2lab::kCriterionCount - failures, s2lab::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
