#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(S2LAB_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string tmp(const std::string& name) {
  fs::create_directories(S2LAB_TEST_TMP);
  return (fs::path(S2LAB_TEST_TMP) / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("classify") {
  auto r = run("classify --betas=-0.3,-0.6");
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j["kind"] == "supercritical");
  CHECK(j["witness_index"] == 2);
  CHECK(j["lhs"].get<double>() == doctest::Approx(0.2646));
  CHECK(j["rhs"].get<double>() == doctest::Approx(0.0975375));

  r = run("classify --betas=-0.5,-0.5");
  REQUIRE(r.status == 0);
  j = json::parse(r.out);
  CHECK(j["kind"] == "critical");
  CHECK(j["gbc_total"].get<double>() == doctest::Approx(1.375));

  CHECK(run("classify --betas=\"\"").status == 2);
  CHECK(run("classify --betas=-0.5,abc").status == 2);
  CHECK(run("classify --betas=0.5").status == 2);
  CHECK(run("classify").status == 2);
}

TEST_CASE("football") {
  const auto path = tmp("fb.csv");
  auto r = run("football --beta=-0.5 --out " + path);
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["slope_minus"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(j["slope_plus"].get<double>() == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(j["K_drift"].get<double>() < 1e-8);
  CHECK(j["sigma2_residual"].get<double>() < 1e-8);
  CHECK(fs::exists(path));

  const auto first = slurp(path);
  REQUIRE(run("football --beta=-0.5 --out " + path).status == 0);
  CHECK(slurp(path) == first);

  CHECK(run("football --beta 0.0 --out " + tmp("x.csv")).status == 2);
  CHECK(run("football --beta=-1.5 --out " + tmp("x.csv")).status == 2);
  CHECK(run("football --beta=-0.5").status == 2);

  r = run("football --sphere --out " + tmp("sphere.csv"));
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["first_integral"].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("levelset") {
  for (auto [flag, m] : {std::pair{std::string("--sphere"), 0.0}, std::pair{std::string("--beta=-0.5"), 0.140625}}) {
    const auto prof = tmp("prof.csv"), summ = tmp("summ.csv");
    REQUIRE(run("football " + flag + " --out " + prof).status == 0);
    const auto r = run("levelset " + prof + " --out " + summ + " --points 50");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["points"] == 50);
    CHECK(j["M_spread"].get<double>() < 1e-8);
    CHECK(j["limit_errors"].is_object());

    std::ifstream in(summ);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t_u,A,B,C,D,z,M");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      const double v = std::stod(line.substr(line.rfind(',') + 1));
      CHECK(std::abs(v - m) < 1e-9);
    }
    CHECK(rows == 50);
  }

  const auto bad = tmp("bad.csv");
  std::ofstream(bad) << "t,h,dh,K\n0,0,0,-1\n0.1,oops,0,-1\n";
  CHECK(run("levelset " + bad + " --out " + tmp("s.csv")).status == 2);
  CHECK(run("levelset " + tmp("missing.csv") + " --out " + tmp("s.csv")).status == 2);
}

TEST_CASE("verify") {
  auto r = run("verify divisor --samples 20000");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["suite"] == "divisor");
  bool found = false;
  for (const auto& c : j["checks"]) found = found || c["name"] == "reflection_identity_max_gap";
  CHECK(found);

  CHECK(run("verify bogus").status == 2);
  CHECK(run("verify --suite bogus").status == 2);
  CHECK(run("verify divisor --samples 10").status == 2);
  CHECK(run("--help").status == 0);
  CHECK(run("nosuchcommand").status == 2);
}
