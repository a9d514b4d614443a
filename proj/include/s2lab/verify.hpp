#pragma once

// Named numerical checks behind `s2lab verify` and the acceptance binary.
// Criteria are numbered 1..12; supplementary checks carry criterion 0.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace s2lab {

struct Check {
  std::string name;
  std::string module;  // symfunc, conformal, divisor, radial, levelset
  int criterion = 0;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string label;  // e.g. "gbc_sphere=2.000000±1e-6"
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  std::size_t samples = 1'000'000;  // Monte-Carlo sample count
};

inline constexpr int kCriterionCount = 12;

std::string_view criterion_title(int id);

bool is_known_suite(std::string_view suite);

/// Checks of one acceptance criterion (1..12); DomainError otherwise.
std::vector<Check> run_criterion(int id, const VerifyOptions& options = {});

/// all, symfunc, conformal, divisor, radial or levelset; DomainError for
/// anything else.
std::vector<Check> run_suite(std::string_view suite, const VerifyOptions& options = {});

bool all_passed(const std::vector<Check>& checks);

}  // namespace s2lab
