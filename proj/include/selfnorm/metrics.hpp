#pragma once

#include <span>
#include <utility>
#include <vector>

#include "selfnorm/special_math.hpp"

namespace selfnorm {

struct Interval {
  double lower;
  double upper;
};

/// max over grid of (1 + |x|)^m |approx(x) - reference(x)|.
double weighted_sup_error(const RealFn& approx, const RealFn& reference, int m,
                          std::span<const double> grid);

/// Same functional on tabulated values: values[i] is the difference at grid[i].
double weighted_sup_error(std::span<const double> differences, int m,
                          std::span<const double> grid);

/// \int |f - g| over the interval. For two densities this is the total
/// variation distance under the convention ||F - G||_TV = ||f - g||_{L^1}.
double l1_distance(const RealFn& f, const RealFn& g, Interval interval,
                   std::span<const double> breakpoints = {}, double abs_tol = 1e-10);

/// (\int |f - g|^p)^{1/p}.
double lp_distance(const RealFn& f, const RealFn& g, double p, Interval interval,
                   std::span<const double> breakpoints = {}, double abs_tol = 1e-10);

/// D(p || phi) = \int p log(p / phi) with 0 log 0 := 0. Checks that p
/// integrates to one within 1e-6 on the interval.
double relative_entropy(const RealFn& p, Interval interval,
                        std::span<const double> breakpoints = {}, double abs_tol = 1e-12);

/// Variant taking log p directly, for densities whose logarithm is known in
/// closed form (avoids exp/log round trips in the tails).
double relative_entropy_from_log(const RealFn& log_p, Interval interval,
                                 std::span<const double> breakpoints = {},
                                 double abs_tol = 1e-12);

struct RateReport {
  std::vector<std::pair<double, double>> pairs;  // (n, error)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;  // 0 with three points on an exact line
};

/// Least-squares fit of log(error) on log(n).
RateReport rate_fit(std::span<const std::pair<double, double>> pairs);

/// Pearson statistic sum (O - E)^2 / E over cells with E > 0.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

double chi_square_quantile(double probability, int dof);

}  // namespace selfnorm
