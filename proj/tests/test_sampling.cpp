#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "ftsample/error.hpp"
#include "ftsample/sampling.hpp"
#include "ftsample/transform.hpp"
#include "oracles.hpp"

using namespace ftsample;

namespace {

nlohmann::json golden() {
  std::ifstream in(FTSAMPLE_GOLDEN_FILE);
  return nlohmann::json::parse(in);
}

// D_γ straight from the definition: full long double transform, then the
// primed entries renormalized.
std::vector<double> oracle_gamma(const std::vector<oracle::cd>& alpha, std::size_t q) {
  const auto p = alpha.size();
  const auto g = oracle::dft(alpha, q);
  std::vector<double> m(p);
  double total = 0;
  for (std::size_t i = 0; i < p; ++i) total += m[i] = std::norm(g[(q * i) / p]);
  for (auto& x : m) x /= total;
  return m;
}

}  // namespace

TEST_CASE("primed index examples") {
  CHECK(primed_index(0, PrimedMap(4, 9)) == 0);
  CHECK(primed_index(1, PrimedMap(4, 8)) == 2);
  CHECK(primed_index(2, PrimedMap(3, 8)) == 5);
  // q·i overflows 64 bits here
  const std::size_t big = std::size_t{1} << 40;
  CHECK(primed_index(big - 1, PrimedMap(big, big * 3)) == 3 * (big - 1));
}

TEST_CASE("primed map is strictly increasing and needs q >= p") {
  for (std::size_t p = 1; p < 30; ++p) {
    for (std::size_t q = p; q < 4 * p; ++q) {
      const auto idx = primed_indices(PrimedMap(p, q));
      for (std::size_t i = 1; i < p; ++i) CHECK(idx[i] > idx[i - 1]);
      CHECK(idx.back() < q);
    }
  }
  CHECK_THROWS_AS(PrimedMap(5, 4), Error);
}

TEST_CASE("primed sets") {
  const IndexSet s({0, 1, 2}, 3);
  CHECK(primed_set(s, PrimedMap(3, 6)) == IndexSet({0, 2, 4}, 6));
  CHECK(primed_set(IndexSet::empty(4), PrimedMap(4, 10)).is_empty());
  CHECK(primed_set(IndexSet({1, 3}, 4), PrimedMap(4, 10)) == IndexSet({2, 7}, 10));
}

TEST_CASE("index set validation") {
  CHECK_THROWS_AS(IndexSet({1, 1}, 4), Error);
  CHECK_THROWS_AS(IndexSet({4}, 4), Error);
  const IndexSet s({3, 0}, 5);
  CHECK(s.contains(0));
  CHECK_FALSE(s.contains(1));
  CHECK(s.indices()[0] == 0);
}

TEST_CASE("round_observation") {
  CHECK(round_observation(2, PrimedMap(4, 8)) == std::optional<std::size_t>(1));
  CHECK_FALSE(round_observation(3, PrimedMap(4, 8)).has_value());
  CHECK(round_observation(5, PrimedMap(3, 8)) == std::optional<std::size_t>(2));
  for (std::size_t p = 1; p < 20; ++p) {
    for (std::size_t q = p; q < 3 * p + 5; ++q) {
      const PrimedMap pm(p, q);
      std::size_t hits = 0;
      for (std::size_t c = 0; c < q; ++c) {
        if (auto i = round_observation(c, pm)) {
          CHECK(primed_index(*i, pm) == c);
          ++hits;
        }
      }
      CHECK(hits == p);
    }
  }
}

TEST_CASE("restrict_to") {
  const ComplexVector v = {0.6, 0.8, 0.0};
  CHECK(restrict_to(v, IndexSet::full(3)) == v);
  CHECK(restrict_to(v, IndexSet::empty(3)) == ComplexVector(3));
  CHECK(restrict_to(v, IndexSet({1}, 3)) == ComplexVector{0.0, 0.8, 0.0});
}

TEST_CASE("dist_beta examples") {
  for (std::size_t j = 0; j < 5; ++j) {
    const auto d = dist_beta(Superposition::basis(5, j));
    for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == doctest::Approx(0.2).epsilon(1e-12));
  }
  const auto flat = dist_beta(Superposition::uniform(6));
  CHECK(flat[0] == doctest::Approx(1.0).epsilon(1e-12));
  const auto d = dist_beta(Superposition({1, 1, 0, 0}));
  const double want[] = {0.5, 0.25, 0.0, 0.25};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(d[i] - want[i]) < 1e-12);
}

TEST_CASE("dist_gamma collapses at exact multiples") {
  std::mt19937_64 rng(1);
  for (std::size_t p : {2u, 5u, 8u, 13u}) {
    for (std::size_t k : {2u, 3u, 7u}) {
      const Superposition a(oracle::random_vector(rng, p));
      CHECK(l1_distance(dist_beta(a), dist_gamma(a, k * p)) < 1e-9);
    }
  }
}

TEST_CASE("dist_gamma matches the definition off the multiples") {
  std::mt19937_64 rng(2);
  for (std::size_t p : {3u, 4u, 7u}) {
    for (std::size_t q : {2 * p + 1, 5 * p + 3, 31 * p + 1}) {
      const auto v = oracle::random_vector(rng, p);
      const auto want = oracle_gamma(v, q);
      const auto got = dist_gamma(Superposition(v), q);
      for (std::size_t i = 0; i < p; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
    }
  }
}

TEST_CASE("dist_gamma of a delta at p=4, q=9 is flat") {
  // FT_q of |0⟩ has every entry 1/√q, so the primed entries tie.
  const auto d = dist_gamma(Superposition::basis(4, 0), 9);
  const auto want = oracle_gamma({1, 0, 0, 0}, 9);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(d[i] - want[i]) < 1e-12);
    CHECK(d[i] == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("dist_gamma golden case q = 4*97") {
  const Superposition a({1, 1, 0, 0});
  const double l1 = l1_distance(dist_beta(a), dist_gamma(a, 4 * 97));
  CHECK(l1 <= 0.05);
  CHECK(std::abs(l1 - golden()["dist_gamma_1100_q388_l1"].get<double>()) < 1e-12);
}

TEST_CASE("dist_gamma needs q > p") {
  CHECK_THROWS_AS(dist_gamma(Superposition::uniform(4), 4), Error);
}

TEST_CASE("multidim distributions") {
  std::mt19937_64 rng(6);
  const MultiSuperposition a({3, 4}, oracle::random_vector(rng, 12));
  const std::vector<std::size_t> q = {6, 12};
  CHECK(l1_distance(dist_beta(a), dist_gamma(a, q)) < 1e-9);
  const std::vector<std::size_t> q_off = {7, 9};
  const auto g = dist_gamma(a, q_off);
  double s = 0;
  for (auto m : g.masses()) s += m;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("primed mass is p/q at an exact multiple") {
  std::mt19937_64 rng(10);
  const Superposition a(oracle::random_vector(rng, 6));
  CHECK(primed_mass(a, 18) == doctest::Approx(6.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("l1_distance") {
  const Distribution d({0.3, 0.7});
  CHECK(l1_distance(d, d) == 0.0);
  CHECK(l1_distance(Distribution::point_mass(2, 0), Distribution::point_mass(2, 1)) == 2.0);
  CHECK(l1_distance(Distribution({0.5, 0.5}), Distribution({0.75, 0.25})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(l1_distance(Distribution::uniform(2), Distribution::uniform(3)), Error);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(Distribution({0.5, 0.6}), Error);
  CHECK_THROWS_AS(Distribution({-0.1, 1.1}), Error);
  CHECK_THROWS_AS(Distribution(std::vector<double>{}), Error);
}

TEST_CASE("sampler: point mass, frequencies, determinism") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(sample(Distribution::point_mass(5, 3), seed) == 3);

  DiscreteSampler s(Distribution::uniform(4));
  Rng rng(42);
  std::vector<int> counts(4);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[s(rng)];
  double chi2 = 0;
  for (int c : counts) {
    CHECK(std::abs(c / double(n) - 0.25) < 0.01);
    chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  }
  CHECK(chi2 < 16.27);  // 3 dof, p = 0.001

  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) CHECK(s(a) == s(b));

  // zero-mass entries are never drawn
  DiscreteSampler z(std::vector<double>{0.0, 0.5, 0.0, 0.5, 0.0});
  for (int i = 0; i < 2000; ++i) CHECK(z(rng) % 2 == 1);
}

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(0);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("distribution JSON round trip and CSV") {
  const Distribution d({0.1, 0.2, 0.7});
  const auto back = distribution_from_json(distribution_to_json(d));
  REQUIRE(back.p() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == d[i]);
  CHECK_THROWS_AS(distribution_from_json("{\"p\": 2, \"masses\": [1.0]}"), Error);
  CHECK_THROWS_AS(distribution_from_json("not json"), Error);
  CHECK(distribution_to_csv(Distribution::point_mass(2, 1)) == "index,mass\n0,0\n1,1\n");
}
