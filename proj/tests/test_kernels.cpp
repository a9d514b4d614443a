#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "s2lab/errors.hpp"
#include "s2lab/kernels.hpp"
#include "s2lab/symfunc.hpp"

using namespace s2lab;
using namespace s2lab::kernels;

namespace {

SymmetricBatch random_batch(int dim, std::size_t count, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> e(-scale, scale);
  SymmetricBatch b(dim, count);
  for (std::size_t i = 0; i < count; ++i) {
    SymmetricMatrix m(dim);
    for (int r = 0; r < dim; ++r)
      for (int c = r; c < dim; ++c) m.set(r, c, e(rng));
    b.set(i, m);
  }
  return b;
}

}  // namespace

TEST_CASE("batch layout round-trips") {
  const auto b = random_batch(4, 7, 1);
  const auto m = b.get(3);
  SymmetricBatch c(4, 7);
  c.set(3, m);
  CHECK(c.get(3) == m);
  CHECK(b.packed_size() == 10);
  CHECK(b.lane(2).size() == 7);
  CHECK_THROWS_AS(SymmetricBatch(5, 1), DomainError);
}

TEST_CASE("scalar batch kernel matches sigma_k_matrix") {
  for (int dim : {3, 4}) {
    const auto b = random_batch(dim, 257, 2 + static_cast<std::uint64_t>(dim), 2.0);
    std::vector<double> out(static_cast<std::size_t>(dim) * b.size());
    sigma_batch(b, out, Isa::Scalar);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto m = b.get(i);
      for (int k = 1; k <= dim; ++k)
        CHECK(out[static_cast<std::size_t>(k - 1) * b.size() + i] ==
              doctest::Approx(sigma_k_matrix(m, k)).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("every available variant matches the scalar kernel") {
  for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
    if (!isa_available(isa)) {
      MESSAGE("variant not available on this host/build: " << to_string(isa));
      continue;
    }
    for (int dim : {3, 4})
      // Counts around the 4-wide vector width exercise the scalar tail.
      for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 1001u}) {
        const auto b = random_batch(dim, count, 100 + count, 3.0);
        std::vector<double> ref(static_cast<std::size_t>(dim) * count), got(ref.size());
        sigma_batch(b, ref, Isa::Scalar);
        sigma_batch(b, got, isa);
        for (std::size_t i = 0; i < ref.size(); ++i)
          CHECK(std::abs(got[i] - ref[i]) <= 1e-13 * std::max(1.0, std::abs(ref[i])));
      }
  }
}

TEST_CASE("default dispatch and cone batch") {
  const auto b = random_batch(4, 333, 9, 1.0);
  const auto out = sigma_batch(b);
  REQUIRE(out.size() == 4 * b.size());

  std::vector<std::uint8_t> flags(b.size());
  in_cone_batch(b, 2, flags);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(static_cast<bool>(flags[i]) == in_cone(b.get(i), 2));

  std::vector<double> short_out(3);
  CHECK_THROWS_AS(sigma_batch(b, short_out, Isa::Scalar), std::invalid_argument);
}

TEST_CASE("forced scalar selection") {
  const char* force = std::getenv("S2LAB_FORCE_SCALAR");
  if (force && *force && std::string(force) != "0")
    CHECK(active_isa() == Isa::Scalar);
  else
    CHECK(active_isa() == detected_isa());
  CHECK(isa_available(Isa::Scalar));
}
