#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

#include "internal.hpp"
#include "selfnorm/cli.hpp"
#include "selfnorm/entropy_coeffs.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/simulate.hpp"
#include "selfnorm/special_math.hpp"

namespace selfnorm::cli {

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

Outcome hermite_orthogonality() {
  double worst = 0.0;
  for (int j = 0; j <= 10; ++j) {
    for (int k = 0; k <= 10; ++k) {
      const double jf = std::tgamma(j + 1.0), kf = std::tgamma(k + 1.0);
      const double err = std::abs(gauss_hermite_inner(j, k) - (j == k ? jf : 0.0));
      worst = std::max(worst, err / std::sqrt(jf * kf));
    }
  }
  if (worst > 1e-8) return fail("scaled error " + format_number(worst));
  return {true, "j,k <= 10"};
}

Outcome appendix_identities() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng), l = u(rng);
    const double v = quad_integrate([&](double x) { return std::pow(a * x * x + b, -1.5); },
                                    QuadratureSpec{-l, l});
    worst = std::max(worst, std::abs(v - 2.0 * l / (b * std::sqrt(a * l * l + b))));
    const double r = std::sqrt(a);
    const double w = quad_integrate_endpoint_singular(
        [](double, double lo, double hi) { return 1.0 / std::sqrt(lo * hi); }, -r, r);
    worst = std::max(worst, std::abs(w - std::numbers::pi));
  }
  if (worst > 1e-8) return fail("max error " + format_number(worst));
  return {true, "20 parameter triples"};
}

Outcome conditional_cumulants() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    std::vector<double> mu(7, 0.0);
    for (int k = 0; k <= 6; k += 2) mu[k] = std::pow(x, k);
    const auto kappa = moments_to_cumulants(mu);
    const double closed[] = {x * x, -2.0 * std::pow(x, 4), 16.0 * std::pow(x, 6)};
    for (int r = 1; r <= 3; ++r) {
      const double c = conditional_cumulant(x, 2 * r);
      const double ref = closed[r - 1];
      if (std::abs(c - ref) > 1e-12 * std::abs(ref) ||
          std::abs(kappa[2 * r] - ref) > 1e-12 * std::abs(ref)) {
        return fail("order " + std::to_string(2 * r) + " at x=" + format_number(x));
      }
    }
  }
  return {true, "100 two-point laws, orders 2 4 6"};
}

Outcome expansion_integrals() {
  double worst = 0.0;
  for (const auto& [id, law] : catalog()) {
    for (int r : {2, 4}) {
      const double v = quad_integrate(
          [&](double x) { return q_r(x, r, law.moment(4), law.moment(6)); }, QuadratureSpec{});
      worst = std::max(worst, std::abs(v));
    }
  }
  if (worst > 1e-9) return fail("max |int q_r| " + format_number(worst));
  return {true, "int q_r = 0 for r = 2 4"};
}

Outcome configuration_invariants() {
  long checked = 0;
  for (const auto& [id, law] : catalog()) {
    for (int n : {2, 32, 200}) {
      for (int i = 0; i < 2000; ++i) {
        CounterRng rng(99, static_cast<std::uint64_t>(i));
        std::vector<double> draws(static_cast<std::size_t>(n));
        law.fill(rng, draws);
        const ConditionalConfig c(draws);
        if (c.degenerate()) continue;
        ++checked;
        if (std::abs(lambda_tilde(c, 2) - 1.0) > 1e-12) return fail("lambda_2 != 1 for " + id);
        if (c.B() < 1.0 - 1e-12 || c.B() > std::sqrt(double(n)) + 1e-9) {
          return fail("B out of [1, sqrt n] for " + id);
        }
        double previous = 1.0 + 1e-12;
        for (int k = 2; k <= 8; ++k) {
          const double lk = L_tilde(c, k);
          if (lk > previous + 1e-12) return fail("L_k not monotone for " + id);
          previous = lk;
        }
      }
    }
  }
  return {true, std::to_string(checked) + " configurations"};
}

Outcome tn_bound() {
  long total = 0;
  for (const auto& [id, law] : catalog()) {
    for (int n : {2, 16, 128}) {
      sample_Tn(law, n, 20000, 5, [&](const TnSampleBatch& b) { total += long(b.values.size()); });
    }
  }
  return {true, std::to_string(total) + " draws with |T_n| <= sqrt n"};
}

Outcome entropy_nonnegative() {
  for (int n : {8, 32, 128}) {
    const auto f = gaussian_exact_density(n);
    const double r = f.support_radius();
    const double d =
        relative_entropy_from_log([&](double x) { return f.log_density(x); }, {-r, r}, {}, 1e-13);
    if (d < -1e-10) return fail("D(T_" + std::to_string(n) + ") = " + format_number(d));
  }
  return {true, "D >= -1e-10 on the exact density"};
}

Outcome estimator_merge() {
  const auto& law = find_law("uniform");
  SimulationConfig sc;
  sc.n = 16;
  sc.replications = 3 * kChunkReplications / 2;
  sc.seed = 3;
  sc.threads = 1;
  sc.hist_bins = 40;
  const auto one = run_simulation(law, sc);
  sc.threads = 4;
  const auto four = run_simulation(law, sc);
  if (!(one.ecdf == four.ecdf) || !(one.histogram == four.histogram)) {
    return fail("thread count changed the estimates");
  }
  sc.replications = kChunkReplications / 2;
  auto resumed = run_simulation(law, sc);
  extend_simulation(law, resumed, 3 * kChunkReplications / 2, 2);
  if (!(resumed.ecdf == one.ecdf) || !(resumed.histogram == one.histogram)) {
    return fail("resumed run differs from a single run");
  }
  return {true, "thread and resume invariant"};
}

Outcome entropy_coefficients_check() {
  for (double mu4 : {1.8, 3.0, 6.0}) {
    const auto c1 = c_l({mu4, std::nullopt}, 1);
    const auto c2 = c_l({mu4, std::nullopt}, 2);
    if (c1.value != 0.0) return fail("c1 != 0");
    if (std::abs(c2.value - analytic_c2(mu4)) > 1e-6 * analytic_c2(mu4)) {
      return fail("c2 off at mu4=" + format_number(mu4));
    }
  }
  return {true, "c1 = 0, c2 = mu4^2/12"};
}

}  // namespace

int cmd_check(const RunConfig&, std::ostream& out) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> families{
      {"hermite-orthogonality", hermite_orthogonality},
      {"appendix-identities", appendix_identities},
      {"conditional-cumulants", conditional_cumulants},
      {"expansion-integrals", expansion_integrals},
      {"configuration-invariants", configuration_invariants},
      {"tn-bound", tn_bound},
      {"entropy-nonnegative", entropy_nonnegative},
      {"estimator-merge", estimator_merge},
      {"entropy-coefficients", entropy_coefficients_check},
  };
  bool all = true;
  for (const auto& [name, fn] : families) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = fail(e.what());
    }
    all = all && o.pass;
    out << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  out.flush();
  return all ? kExitOk : kExitInvariant;
}

}  // namespace selfnorm::cli
