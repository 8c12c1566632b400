#include <doctest.h>

#include <cmath>

#include "selfnorm/distributions.hpp"
#include "selfnorm/entropy_coeffs.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/metrics.hpp"
#include "selfnorm/simulate.hpp"

using namespace selfnorm;

TEST_CASE("c_1 vanishes") {
  for (const auto& [id, law] : catalog()) {
    const auto c = c_l({law.moment(4), law.moment(6)}, 1);
    CHECK(c.value == 0.0);
    CHECK_FALSE(c.partial);
  }
}

TEST_CASE("c_2 by quadrature equals mu_4^2 / 12") {
  for (double mu4 : {1.8, 3.0, 6.0}) {
    const auto c = c_l({mu4, std::nullopt}, 2);
    CHECK_FALSE(c.partial);
    CHECK(std::abs(c.value - analytic_c2(mu4)) <= 1e-6 * analytic_c2(mu4));
  }
  CHECK(analytic_c2(3.0) == 0.75);
  CHECK(analytic_c2(0.0) == 0.0);
  CHECK(analytic_c2(6.0) == 3.0);
  CHECK(std::abs(c_l({1.8, 27.0 / 7}, 2).value - 0.27) < 1e-9);
}

TEST_CASE("c_3 only involves closed-form corrections") {
  // Compositions of 6 into k >= 2 even parts use q_2 and q_4 only, so the
  // value is complete.
  const auto c = c_l({3.0, 15.0}, 3);
  CHECK_FALSE(c.partial);
  CHECK(std::isfinite(c.value));
  CHECK_THROWS_AS(c_l({3.0, std::nullopt}, 3), Error);
  CHECK_THROWS_AS(c_l({3.0, 15.0}, 4), Error);
  CHECK_THROWS_AS(c_l({3.0, 15.0}, 0), Error);

  // Closed form of the (2,4)+(4,2) and (2,2,2) terms via Hermite products:
  // (1/2) 2 \int q2 q4 / phi - (1/6) \int q2^3 / phi^2.
  const double mu4 = 3.0, mu6 = 15.0;
  QuadratureSpec spec{-12.0, 12.0, 1e-12};
  const double cross = quad_integrate(
      [&](double x) {
        return normal_pdf(x) * q_r_over_phi(x, 2, mu4, mu6) * q_r_over_phi(x, 4, mu4, mu6);
      },
      spec);
  const double cube = quad_integrate(
      [&](double x) { return normal_pdf(x) * std::pow(q_r_over_phi(x, 2, mu4, mu6), 3); }, spec);
  CHECK(std::abs(c.value - (cross - cube / 6.0)) < 1e-9);
}

TEST_CASE("entropy predictions and the Z_n comparison") {
  const ExpansionMoments gauss{3.0, 15.0};
  CHECK(std::abs(entropy_prediction(gauss, 6, 100) - 0.75e-4) < 1e-12);
  CHECK(entropy_prediction(gauss, 4, 100) == 0.0);
  CHECK(entropy_prediction(gauss, 5, 100) == 0.0);
  CHECK_THROWS_AS(entropy_prediction(gauss, 7, 100), Error);
  CHECK_THROWS_AS(entropy_prediction(gauss, 3, 100), Error);
  CHECK(zn_entropy_leading(3.0) == 0.0);
  for (const auto& [id, law] : catalog()) {
    CHECK(analytic_c2(law.moment(4)) > zn_entropy_leading(law.moment(4)));
  }

  const auto all = entropy_coefficients({6.0, 90.0}, 2);
  CHECK(all.size() == 2);
  CHECK(all.at(1).value == 0.0);
  CHECK(std::abs(all.at(2).value - 3.0) < 1e-6 * 3.0);
}

TEST_CASE("n^2 D(T_n) approaches 0.75 for gaussian inputs") {
  double previous_gap = 1e9;
  double last = 0.0;
  for (int n : {32, 64, 128, 256}) {
    const auto f = gaussian_exact_density(n);
    const double r = f.support_radius();
    const double d = relative_entropy_from_log([&](double x) { return f.log_density(x); },
                                               {-r, r}, {}, 1e-13);
    CHECK(d >= -1e-10);
    const double scaled = double(n) * n * d;
    const double gap = std::abs(scaled - 0.75);
    CAPTURE(n);
    CAPTURE(scaled);
    CHECK(gap < previous_gap);
    previous_gap = gap;
    last = scaled;
  }
  CHECK(std::abs(last - 0.75) <= 0.075);
}
