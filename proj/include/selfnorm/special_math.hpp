#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace selfnorm {

inline constexpr int kMaxHermiteDegree = 16;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;  // 1/sqrt(2*pi)

/// Probabilists' Hermite polynomial He_k, monic, coefficients in ascending
/// power order.
struct HermitePoly {
  int degree = 0;
  std::vector<double> coefficients;

  double operator()(double x) const noexcept;
};

HermitePoly hermite(int k);

/// He_k(x) by the three-term recurrence He_{k+1} = x He_k - k He_{k-1}.
double hermite_eval(int k, double x);

/// Fills out[0..k] with He_0(x)..He_k(x). out.size() must be >= k+1.
void hermite_eval_all(int k, double x, std::span<double> out);

inline double normal_pdf(double x) noexcept {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) noexcept;

struct QuadratureSpec {
  double lower = -12.0;
  double upper = 12.0;
  double abs_tol = 1e-10;
  int max_depth = 40;
  int initial_panels = 16;
};

using RealFn = std::function<double(double)>;

/// Adaptive Simpson with Richardson-corrected local error test. Throws
/// NonConvergenceError when some panel hits max_depth above tolerance.
double quad_integrate(const RealFn& f, const QuadratureSpec& spec);

/// Integrates over consecutive pieces [lower, b_0], [b_0, b_1], ..., [b_k, upper]
/// splitting the tolerance evenly. Breakpoints outside (lower, upper) are ignored.
double quad_integrate(const RealFn& f, const QuadratureSpec& spec,
                      std::span<const double> breakpoints);

/// Integrand for the endpoint-singular rule: receives x together with its
/// exact distances to the lower and upper endpoints, so factors such as
/// (a - x^2) can be formed without cancellation near the ends.
using EndpointFn = std::function<double(double x, double from_lower, double from_upper)>;

/// Double-exponential (tanh-sinh) rule for integrands with integrable
/// algebraic singularities at one or both endpoints. The integrand is
/// never evaluated at the endpoints themselves; x may round onto an endpoint
/// while the distances stay exact and positive.
double quad_integrate_endpoint_singular(const EndpointFn& f, double lower, double upper,
                                        double abs_tol = 1e-12);

/// \int phi(x) He_j(x) He_k(x) dx over [-12, 12], absolute tolerance
/// 1e-12 sqrt(j! k!).
double gauss_hermite_inner(int j, int k);

}  // namespace selfnorm
