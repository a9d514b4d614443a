#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>

#include "s2lab/errors.hpp"
#include "s2lab/io.hpp"
#include "s2lab/radial.hpp"

using namespace s2lab;

namespace {

std::string profile_text(const RadialProfile& p) {
  std::ostringstream os;
  write_profile_csv(os, p);
  return os.str();
}

RadialProfile parse(const std::string& s) {
  std::istringstream is(s);
  return read_profile_csv(is);
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, std::numeric_limits<double>::max()}) {
    const auto s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("profile CSV round-trip is exact") {
  const auto p = football_profile(-0.4, FootballOptions{5.0});
  const auto text = profile_text(p);
  CHECK(text.rfind("t,h,dh,K\n", 0) == 0);
  const auto q = parse(text);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(q.grid()[i] == p.grid()[i]);
    CHECK(q.h()[i] == p.h()[i]);
    CHECK(q.dh()[i] == p.dh()[i]);
  }
  CHECK(q.beta() == doctest::Approx(-0.4).epsilon(1e-9));
  CHECK(profile_text(q) == text);
  CHECK(profile_text(p) == text);
}

TEST_CASE("malformed profile CSV") {
  const auto good = profile_text(sphere_profile(1.0, 0.1));
  CHECK_NOTHROW(parse(good));
  CHECK_NOTHROW(parse(good + "\n\n"));
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("t,h,dh\n0,0,0\n1,0,0\n"), ParseError);
  // truncated mid-row
  CHECK_THROWS_AS(parse(good.substr(0, good.size() - 5)), ParseError);
  std::string bad = good;
  bad.replace(bad.find('\n') + 1, 1, "x");
  CHECK_THROWS_AS(parse(bad), ParseError);
  CHECK_THROWS_AS(parse("t,h,dh,K\n0,0,0,-1,5\n0.1,0,0,-1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,h,dh,K\n0,0,0,-1\n"), ParseError);
  // K column inconsistent with (h, dh)
  CHECK_THROWS_AS(parse("t,h,dh,K\n0,0,0,-0.5\n0.1,0,0,-0.5\n"), ParseError);
  // blank line inside the data
  const auto nl = good.find('\n', good.find('\n') + 1);
  CHECK_THROWS_AS(parse(good.substr(0, nl + 1) + "\n" + good.substr(nl + 1)), ParseError);
  // well-formed numbers that break profile invariants
  CHECK_THROWS_AS(parse("t,h,dh,K\n1,0,0,-1\n0,0,0,-1\n"), DomainError);
  CHECK_THROWS_AS(read_profile_csv(std::string("/nonexistent/profile.csv")), std::runtime_error);
}

TEST_CASE("summary CSV") {
  LevelSetSummary s;
  s.t_u = 0.5;
  s.A = 1.0 / 3.0;
  s.M = -0.0;
  std::ostringstream os;
  write_summary_csv(os, {s, s});
  const auto text = os.str();
  CHECK(text.rfind("t_u,A,B,C,D,z,M\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 3);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
}
