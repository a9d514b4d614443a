#include "s2lab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "s2lab/errors.hpp"

namespace s2lab {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  return os;
}

double parse_field(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view chomp(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
  os << "t,h,dh,K\n";
  const auto k = p.first_integrals();
  for (std::size_t i = 0; i < p.size(); ++i)
    os << format_double(p.grid()[i]) << ',' << format_double(p.h()[i]) << ',' << format_double(p.dh()[i]) << ','
       << format_double(k[i]) << '\n';
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
  auto os = open_out(path);
  write_profile_csv(os, p);
  if (!os) throw std::runtime_error("write failed: " + path);
}

RadialProfile read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty profile CSV");
  if (chomp(line) != "t,h,dh,K") throw ParseError("profile CSV header must be 't,h,dh,K'");

  std::vector<double> t, h, dh;
  double k_sum = 0.0;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (is.eof() && !line.empty()) throw ParseError("line " + std::to_string(n) + ": missing line terminator (truncated file?)");
    const auto row = chomp(line);
    if (row.empty()) {
      // Only trailing blank lines are tolerated.
      std::string rest;
      while (std::getline(is, rest))
        if (!chomp(rest).empty()) throw ParseError("line " + std::to_string(n) + ": blank line inside data");
      break;
    }
    const auto fields = split(row);
    if (fields.size() != 4) throw ParseError("line " + std::to_string(n) + ": expected 4 fields");
    t.push_back(parse_field(fields[0], n));
    h.push_back(parse_field(fields[1], n));
    dh.push_back(parse_field(fields[2], n));
    const double k = parse_field(fields[3], n);
    // Catches edited or mangled rows that still parse.
    if (std::isfinite(h.back()) && std::isfinite(dh.back()) &&
        !(std::abs(k - first_integral(h.back(), dh.back())) <= 1e-9 * (1.0 + std::abs(k))))
      throw ParseError("line " + std::to_string(n) + ": K column disagrees with h and dh");
    k_sum += k;
  }
  if (t.size() < 2) throw ParseError("profile CSV needs at least two rows");
  const double beta = cone_order_from_first_integral(k_sum / static_cast<double>(t.size()));
  return RadialProfile(std::move(t), std::move(h), std::move(dh), beta);
}

RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path);
  return read_profile_csv(is);
}

void write_summary_csv(std::ostream& os, const std::vector<LevelSetSummary>& rows) {
  os << "t_u,A,B,C,D,z,M\n";
  for (const auto& s : rows)
    os << format_double(s.t_u) << ',' << format_double(s.A) << ',' << format_double(s.B) << ','
       << format_double(s.C) << ',' << format_double(s.D) << ',' << format_double(s.z) << ','
       << format_double(s.M) << '\n';
}

void write_summary_csv(const std::string& path, const std::vector<LevelSetSummary>& rows) {
  auto os = open_out(path);
  write_summary_csv(os, rows);
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace s2lab
