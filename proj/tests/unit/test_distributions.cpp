#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "selfnorm/distributions.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/special_math.hpp"

using namespace selfnorm;

TEST_CASE("philox known-answer vector") {
  // Random123 kat_vectors: philox4x32-10, zero counter and key.
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("catalog contents") {
  const auto& laws = catalog();
  for (const char* id : {"gaussian", "uniform", "laplace", "gauss_mix"}) {
    REQUIRE(laws.count(id) == 1);
    const auto& law = laws.at(id);
    CHECK(law.has_density());
    CHECK(law.non_singular());
    CHECK(law.moment(0) == 1.0);
    CHECK(law.moment(2) == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 1; k <= kMaxMomentOrder; k += 2) CHECK(law.moment(k) == 0.0);
    CHECK(law.moment(4) >= 1.0);
    CHECK(law.moment(6) * law.moment(2) >= law.moment(4) * law.moment(4));
  }
  const auto& g = laws.at("gaussian");
  CHECK(g.moment(4) == 3.0);
  CHECK(g.moment(6) == 15.0);
  const auto& u = laws.at("uniform");
  CHECK(u.moment(4) == doctest::Approx(9.0 / 5.0).epsilon(1e-15));
  CHECK(u.moment(6) == doctest::Approx(27.0 / 7.0).epsilon(1e-15));
  const auto& l = laws.at("laplace");
  CHECK(l.moment(4) == 6.0);
  CHECK(l.moment(6) == 90.0);
}

TEST_CASE("unknown law is a usage error naming valid ids") {
  try {
    find_law("cauchy");
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
    CHECK(std::string(e.what()).find("gaussian") != std::string::npos);
  }
}

TEST_CASE("custom law validation") {
  const std::vector<double> ok{3.0, 15.0};
  const auto law = SymmetricLaw::custom("mine", ok);
  CHECK(law.moment(4) == 3.0);
  CHECK(std::isnan(law.moment(8)));
  CHECK(law.highest_known_moment() == 6);
  CHECK(find_law("laplace").highest_known_moment() == 12);
  CHECK_FALSE(law.has_density());
  CHECK_THROWS_AS(law.density(0.0), Error);
  std::vector<double> buf(3);
  CounterRng rng(1, 0);
  CHECK_THROWS_AS(law.fill(rng, buf), Error);

  const std::vector<double> sub_one{0.5};
  CHECK_THROWS_AS(SymmetricLaw::custom("bad", sub_one), Error);
  const std::vector<double> cs_violation{4.0, 10.0};  // mu6 < mu4^2
  CHECK_THROWS_AS(SymmetricLaw::custom("bad", cs_violation), Error);
  CHECK_THROWS_AS(SymmetricLaw::gauss_mix(2.5), Error);
}

TEST_CASE("densities integrate to one with unit variance") {
  for (const auto& [id, law] : catalog()) {
    CAPTURE(id);
    QuadratureSpec spec{-40.0, 40.0, 1e-11};
    const std::vector<double> cuts{-1.7320508075688772, 0.0, 1.7320508075688772};
    const double mass = quad_integrate([&](double x) { return law.density(x); }, spec, cuts);
    const double var =
        quad_integrate([&](double x) { return x * x * law.density(x); }, spec, cuts);
    CHECK(std::abs(mass - 1.0) < 1e-8);
    CHECK(std::abs(var - 1.0) < 1e-8);
    // cdf is the integral of the density
    for (double x : {-1.0, 0.3, 1.5}) {
      QuadratureSpec part{-40.0, x, 1e-12};
      const double lower = quad_integrate([&](double t) { return law.density(t); }, part, cuts);
      CHECK(std::abs(lower - law.cdf(x)) < 1e-9);
    }
  }
}

TEST_CASE("moments to cumulants") {
  const auto& g = find_law("gaussian");
  const auto kg = moments_to_cumulants(g.moments());
  CHECK(kg.order() == 12);
  CHECK(kg[1] == 0.0);
  CHECK(kg[2] == 1.0);
  CHECK(std::abs(kg[4]) < 1e-12);
  CHECK(std::abs(kg[6]) < 1e-12);
  for (const auto& [id, law] : catalog()) {
    const auto k = moments_to_cumulants(law.moments());
    CHECK(k[3] == 0.0);
    CHECK(k[5] == 0.0);
    const auto back = cumulants_to_moments(k);
    for (int i = 0; i <= kMaxMomentOrder; ++i) {
      CHECK(std::abs(back[i] - law.moment(i)) <= 1e-10 * std::max(1.0, std::abs(law.moment(i))));
    }
  }
  const double a = 1.7;
  const std::vector<double> two_point{1, 0, a * a, 0, std::pow(a, 4), 0, std::pow(a, 6)};
  const auto kt = moments_to_cumulants(two_point);
  CHECK(kt[4] == doctest::Approx(-2 * std::pow(a, 4)).epsilon(1e-13));
  CHECK(kt[6] == doctest::Approx(16 * std::pow(a, 6)).epsilon(1e-13));

  const std::vector<double> too_short{1.0};
  CHECK_THROWS_AS(moments_to_cumulants(too_short), Error);
}

TEST_CASE("recursion agrees with set-partition enumeration") {
  for (const auto& [id, law] : catalog()) {
    const std::vector<double> mu(law.moments().begin(), law.moments().end());
    const auto k = moments_to_cumulants(mu);
    for (int order = 1; order <= 8; ++order) {
      const double brute = oracle::cumulant_by_set_partitions(mu, order);
      CHECK(std::abs(k[order] - brute) <= 1e-10 * std::max(1.0, std::abs(brute)));
    }
  }
}

TEST_CASE("conditional cumulants") {
  CHECK(conditional_cumulant(1.0, 6) == 16.0);
  CHECK(conditional_cumulant(0.0, 4) == 0.0);
  CHECK(conditional_cumulant(2.0, 4) == -32.0);
  CHECK_THROWS_AS(conditional_cumulant(1.0, 8), Error);
  CHECK_THROWS_AS(conditional_cumulant(1.0, 3), Error);
  CHECK_THROWS_AS(conditional_cumulant(-1.0, 2), Error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    std::vector<double> mu(7, 0.0);
    for (int k = 0; k <= 6; k += 2) mu[k] = std::pow(x, k);
    for (int order : {2, 4, 6}) {
      const double brute = oracle::cumulant_by_set_partitions(mu, order);
      CHECK(std::abs(conditional_cumulant(x, order) - brute) <=
            1e-12 * std::max(1.0, std::abs(brute)));
    }
  }
}

TEST_CASE("sampling is deterministic and consistent") {
  const auto& g = find_law("gaussian");
  CHECK(sample(g, 4, 42) == sample(g, 4, 42));
  CHECK(sample(g, 4, 42) != sample(g, 4, 43));
  CHECK_THROWS_AS(sample(g, 0, 1), Error);

  auto check_moment = [](const SymmetricLaw& law, int order, std::uint64_t seed) {
    const int count = 1000000;
    const auto xs = sample(law, count, seed);
    double sum = 0.0, sum_sq = 0.0;
    for (double x : xs) {
      const double p = std::pow(x, order);
      sum += p;
      sum_sq += p * p;
    }
    const double mean = sum / count;
    const double se = std::sqrt((sum_sq / count - mean * mean) / count);
    CAPTURE(law.id());
    CAPTURE(order);
    CHECK(std::abs(mean - law.moment(order)) < 4.0 * se);
  };
  check_moment(find_law("uniform"), 2, 11);
  check_moment(find_law("laplace"), 4, 12);
  check_moment(find_law("gaussian"), 2, 13);
  check_moment(find_law("gauss_mix"), 4, 14);

  // odd sample moments vanish within 4 standard errors
  for (const auto& [id, law] : catalog()) {
    const auto xs = sample(law, 400000, 77);
    for (int order : {1, 3}) {
      double sum = 0.0, sum_sq = 0.0;
      for (double x : xs) {
        const double p = std::pow(x, order);
        sum += p;
        sum_sq += p * p;
      }
      const double n = static_cast<double>(xs.size());
      const double se = std::sqrt(sum_sq / n / n);
      CAPTURE(id);
      CHECK(std::abs(sum / n) < 4.0 * se);
    }
  }
}
