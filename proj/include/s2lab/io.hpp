#pragma once

// CSV series for profiles and level-set summaries. Numbers are written with
// 17 significant digits so that doubles round-trip exactly.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "s2lab/levelset.hpp"
#include "s2lab/radial.hpp"

namespace s2lab {

/// Thrown for malformed CSV input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

/// Header `t,h,dh,K`, rows by increasing t.
void write_profile_csv(std::ostream& os, const RadialProfile& p);
void write_profile_csv(const std::string& path, const RadialProfile& p);

/// Strict reader: exact header, four numeric fields per row, at least two
/// rows. The cone order is recovered from the mean K column. ParseError on
/// any malformed content, DomainError if the rows fail profile invariants.
RadialProfile read_profile_csv(std::istream& is);
RadialProfile read_profile_csv(const std::string& path);

/// Header `t_u,A,B,C,D,z,M`, rows in the given order.
void write_summary_csv(std::ostream& os, const std::vector<LevelSetSummary>& rows);
void write_summary_csv(const std::string& path, const std::vector<LevelSetSummary>& rows);

}  // namespace s2lab
