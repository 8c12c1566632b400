#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/special_math.hpp"

using namespace selfnorm;

TEST_CASE("hermite coefficients") {
  CHECK(hermite(0).coefficients == std::vector<double>{1.0});
  CHECK(hermite(3).coefficients == std::vector<double>{0.0, -3.0, 0.0, 1.0});
  CHECK(hermite(4).coefficients == std::vector<double>{3.0, 0.0, -6.0, 0.0, 1.0});
  for (int k = 0; k <= kMaxHermiteDegree; ++k) {
    const auto h = hermite(k);
    CHECK(h.degree == k);
    CHECK(h.coefficients.size() == static_cast<std::size_t>(k + 1));
    CHECK(h.coefficients.back() == 1.0);
  }
}

TEST_CASE("hermite coefficient recurrence") {
  for (int k = 1; k < kMaxHermiteDegree; ++k) {
    const auto prev = hermite(k - 1).coefficients;
    const auto cur = hermite(k).coefficients;
    const auto next = hermite(k + 1).coefficients;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double shifted = i >= 1 ? cur[i - 1] : 0.0;
      const double lower = i < prev.size() ? prev[i] : 0.0;
      CHECK(next[i] == shifted - k * lower);
    }
  }
}

TEST_CASE("hermite degree cap") {
  CHECK_THROWS_AS(hermite(17), Error);
  CHECK_THROWS_AS(hermite_eval(-1, 0.0), Error);
  try {
    hermite_eval(17, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_degree);
  }
}

TEST_CASE("hermite_eval examples") {
  for (double x : {-2.0, 0.0, 5.0}) CHECK(hermite_eval(1, x) == x);
  CHECK(hermite_eval(4, 0.0) == 3.0);
  CHECK(hermite_eval(7, 1.0) == -20.0);
}

TEST_CASE("hermite_eval recurrence and agreement with coefficient form") {
  for (int k = 1; k <= 15; ++k) {
    const auto poly = hermite(k + 1);
    for (double x = -6.0; x <= 6.0; x += 0.37) {
      const double next = hermite_eval(k + 1, x);
      const double rec = x * hermite_eval(k, x) - k * hermite_eval(k - 1, x);
      const double scale = std::max(1.0, std::abs(next));
      CHECK(std::abs(next - rec) <= 1e-10 * scale);
      CHECK(std::abs(next - poly(x)) <= 1e-9 * std::max(scale, std::pow(std::abs(x) + 1, k + 1)));
    }
  }
}

TEST_CASE("normal pdf and cdf") {
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  CHECK(normal_cdf(0.0) == 0.5);
  const double oracle = static_cast<double>(oracle::normal_cdf_series(1.959964L));
  CHECK(std::abs(normal_cdf(1.959964) - 0.975) < 1e-6);
  CHECK(std::abs(normal_cdf(1.959964) - oracle) < 1e-14);
  for (double x = -2.5; x <= 2.5; x += 0.25) {
    CHECK(std::abs(normal_cdf(x) - static_cast<double>(oracle::normal_cdf_series(x))) < 1e-14);
    CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-15);
  }
  // Tail accuracy: Phi(-10) = 7.619853024160527e-24.
  CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-12));
}

TEST_CASE("cdf derivative matches pdf") {
  const double h = 1e-5;
  for (double x = -6.0; x <= 6.0; x += 0.05) {
    const double fd = (normal_cdf(x + h) - normal_cdf(x - h)) / (2 * h);
    CHECK(std::abs(fd - normal_pdf(x)) < 1e-6);
  }
}

TEST_CASE("quadrature examples") {
  QuadratureSpec spec{-1.0, 1.0};
  CHECK(std::abs(quad_integrate([](double x) { return std::pow(x * x + 1.0, -1.5); }, spec) -
                 std::numbers::sqrt2) < 1e-10);

  const double arc = quad_integrate_endpoint_singular(
      [](double, double from_lower, double from_upper) {
        return 1.0 / std::sqrt(from_lower * from_upper);  // 4 - w^2 = (2 + w)(2 - w)
      },
      -2.0, 2.0);
  CHECK(std::abs(arc - std::numbers::pi) < 1e-10);

  QuadratureSpec wide{-8.0, 8.0};
  CHECK(std::abs(quad_integrate(normal_pdf, wide) - 1.0) < 1e-10);
}

TEST_CASE("appendix identity: (a x^2 + b)^{-3/2} over [-l, l]") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng), l = u(rng);
    QuadratureSpec spec{-l, l};
    const double value =
        quad_integrate([&](double x) { return std::pow(a * x * x + b, -1.5); }, spec);
    const double closed = 2.0 * std::pow(a * l * l + b, -0.5) / b * l;
    CHECK(std::abs(value - closed) < 1e-8);
  }
}

TEST_CASE("appendix identity: (a - w^2)^{-1/2} over [-sqrt a, sqrt a] is pi") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 50.0);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng);
    const double r = std::sqrt(a);
    const double value = quad_integrate_endpoint_singular(
        [](double, double lo, double hi) { return 1.0 / std::sqrt(lo * hi); }, -r, r);
    CHECK(std::abs(value - std::numbers::pi) < 1e-8);
  }
}

TEST_CASE("appendix bound: a = 2 case stays below pi") {
  for (int n : {4, 16, 64, 256}) {
    const double s = std::sqrt(static_cast<double>(n));
    QuadratureSpec spec{0.5 * s, 2.0 * s};
    const double value =
        quad_integrate([&](double z) { return 1.0 / (1.0 + (z - s) * (z - s)); }, spec);
    CHECK(value <= std::numbers::pi);
    CHECK(std::abs(value - (std::atan(s) + std::atan(0.5 * s))) < 1e-9);
  }
}

TEST_CASE("quadrature errors") {
  QuadratureSpec bad{-1.0, 1.0, 0.0};
  CHECK_THROWS_AS(quad_integrate(normal_pdf, bad), Error);
  QuadratureSpec reversed{1.0, -1.0};
  CHECK_THROWS_AS(quad_integrate(normal_pdf, reversed), Error);

  QuadratureSpec shallow{0.0, 1.0, 1e-12, 3, 1};
  try {
    quad_integrate([](double x) { return x > 0 ? 1.0 / std::sqrt(x) : 0.0; }, shallow);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK(e.best_estimate() > 0.5);
    CHECK(e.best_estimate() < 2.0);
  }
}

TEST_CASE("tanh-sinh handles inverse square-root endpoint") {
  const double v = quad_integrate_endpoint_singular(
      [](double, double from_lower, double) { return 1.0 / std::sqrt(from_lower); }, 0.0, 1.0);
  CHECK(std::abs(v - 2.0) < 1e-10);
}

TEST_CASE("breakpoints split the interval") {
  QuadratureSpec spec{-3.0, 3.0};
  const std::vector<double> cuts{0.0, 10.0};
  const double v = quad_integrate([](double x) { return std::abs(x); }, spec, cuts);
  CHECK(std::abs(v - 9.0) < 1e-12);
}

TEST_CASE("Hermite orthogonality matrix") {
  CHECK(std::abs(gauss_hermite_inner(3, 4)) < 1e-8);
  CHECK(std::abs(gauss_hermite_inner(4, 4) - 24.0) < 1e-8);
  CHECK(std::abs(gauss_hermite_inner(0, 0) - 1.0) < 1e-8);
  double factorial = 1.0;
  for (int j = 0; j <= 10; ++j) {
    if (j > 0) factorial *= j;
    for (int k = 0; k <= 10; ++k) {
      // Entries are compared on the scale sqrt(j! k!), i.e. as normalized
      // inner products.
      double fk = 1.0;
      for (int i = 2; i <= k; ++i) fk *= i;
      const double expected = j == k ? factorial : 0.0;
      CHECK(std::abs(gauss_hermite_inner(j, k) - expected) < 1e-8 * std::sqrt(factorial * fk));
    }
  }
}
