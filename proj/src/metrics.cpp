#include "selfnorm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "selfnorm/error.hpp"

namespace selfnorm {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

QuadratureSpec spec_for(Interval interval, double abs_tol) {
  QuadratureSpec spec;
  spec.lower = interval.lower;
  spec.upper = interval.upper;
  spec.abs_tol = abs_tol;
  return spec;
}

}  // namespace

double weighted_sup_error(const RealFn& approx, const RealFn& reference, int m,
                          std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::precondition, "weighted sup needs a non-empty grid");
  double sup = 0.0;
  for (double x : grid) {
    sup = std::max(sup, std::pow(1.0 + std::abs(x), m) * std::abs(approx(x) - reference(x)));
  }
  return sup;
}

double weighted_sup_error(std::span<const double> differences, int m,
                          std::span<const double> grid) {
  if (grid.empty() || differences.size() != grid.size()) {
    throw Error(ErrorKind::precondition, "weighted sup needs matching non-empty grid and values");
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sup = std::max(sup, std::pow(1.0 + std::abs(grid[i]), m) * std::abs(differences[i]));
  }
  return sup;
}

double l1_distance(const RealFn& f, const RealFn& g, Interval interval,
                   std::span<const double> breakpoints, double abs_tol) {
  return quad_integrate([&](double x) { return std::abs(f(x) - g(x)); },
                        spec_for(interval, abs_tol), breakpoints);
}

double lp_distance(const RealFn& f, const RealFn& g, double p, Interval interval,
                   std::span<const double> breakpoints, double abs_tol) {
  if (!(p >= 1.0)) throw Error(ErrorKind::domain, "L^p distance needs p >= 1");
  if (p == 1.0) return l1_distance(f, g, interval, breakpoints, abs_tol);
  const double integral =
      quad_integrate([&](double x) { return std::pow(std::abs(f(x) - g(x)), p); },
                     spec_for(interval, abs_tol), breakpoints);
  return std::pow(integral, 1.0 / p);
}

double relative_entropy(const RealFn& p, Interval interval, std::span<const double> breakpoints,
                        double abs_tol) {
  return relative_entropy_from_log(
      [&](double x) {
        const double v = p(x);
        if (v < 0.0) throw Error(ErrorKind::precondition, "density must be non-negative");
        return v < 1e-300 ? -std::numeric_limits<double>::infinity() : std::log(v);
      },
      interval, breakpoints, abs_tol);
}

double relative_entropy_from_log(const RealFn& log_p, Interval interval,
                                 std::span<const double> breakpoints, double abs_tol) {
  const auto spec = spec_for(interval, abs_tol);
  const double mass = quad_integrate(
      [&](double x) {
        const double lp = log_p(x);
        return std::isfinite(lp) ? std::exp(lp) : 0.0;
      },
      spec, breakpoints);
  if (std::abs(mass - 1.0) > 1e-6) {
    throw Error(ErrorKind::precondition,
                "relative entropy needs a normalized density (mass " + std::to_string(mass) + ")");
  }
  // log phi(x) = -x^2/2 - log sqrt(2 pi); where p underflows the integrand
  // is 0 log 0 := 0.
  return quad_integrate(
      [&](double x) {
        const double lp = log_p(x);
        if (!std::isfinite(lp) || lp < std::log(1e-300)) return 0.0;
        return std::exp(lp) * (lp + 0.5 * x * x + kLogSqrt2Pi);
      },
      spec, breakpoints);
}

RateReport rate_fit(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw Error(ErrorKind::fit, "rate fit needs at least 3 points");
  std::vector<double> ns;
  for (const auto& [n, err] : pairs) {
    if (!(err > 0.0) || !(n > 0.0)) {
      throw Error(ErrorKind::fit, "rate fit needs positive n and errors");
    }
    if (std::find(ns.begin(), ns.end(), n) != ns.end()) {
      throw Error(ErrorKind::fit, "rate fit needs distinct n values");
    }
    ns.push_back(n);
  }
  const double k = static_cast<double>(pairs.size());
  double sx = 0, sy = 0;
  for (const auto& [n, err] : pairs) {
    sx += std::log(n);
    sy += std::log(err);
  }
  const double mx = sx / k;
  const double my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [n, err] : pairs) {
    const double dx = std::log(n) - mx;
    const double dy = std::log(err) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateReport report;
  report.pairs.assign(pairs.begin(), pairs.end());
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  report.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  const double residual = std::max(0.0, syy - report.slope * sxy);
  report.slope_stderr = std::sqrt(residual / (k - 2.0) / sxx);
  return report;
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw Error(ErrorKind::arity, "observed and expected cell counts differ in length");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] > 0.0) {
      const double d = observed[i] - expected[i];
      stat += d * d / expected[i];
    }
  }
  return stat;
}

double chi_square_quantile(double probability, int dof) {
  if (dof < 1 || !(probability > 0.0 && probability < 1.0)) {
    throw Error(ErrorKind::domain, "chi-square quantile needs dof >= 1 and p in (0, 1)");
  }
  return boost::math::quantile(boost::math::chi_squared(dof), probability);
}

}  // namespace selfnorm
