#include "selfnorm/special_math.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <string>

#include "selfnorm/error.hpp"

namespace selfnorm {

namespace {

void check_degree(int k) {
  if (k < 0 || k > kMaxHermiteDegree) {
    throw Error(ErrorKind::unsupported_degree,
                "Hermite degree " + std::to_string(k) + " outside [0, " +
                    std::to_string(kMaxHermiteDegree) + "]");
  }
}

struct SimpsonState {
  const RealFn* f;
  int max_depth;
  bool exhausted = false;
};

double simpson_panel(SimpsonState& st, double a, double fa, double m, double fm, double b,
                     double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // The second test stops refinement once the Richardson difference is at
  // rounding level; otherwise large integrands can never meet a tolerance
  // that halves in step with the panel width.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise) {
    return left + right + delta / 15.0;
  }
  if (depth >= st.max_depth) {
    st.exhausted = true;
    return left + right + delta / 15.0;
  }
  return simpson_panel(st, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
         simpson_panel(st, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
}

// Ends that sit on a breakpoint are sampled one ulp inside, so a jump placed
// exactly on a breakpoint is seen as its one-sided limit.
double simpson_piece(SimpsonState& st, double a, double b, double tol, int panels,
                     bool nudge_a, bool nudge_b) {
  double total = 0.0;
  const double width = (b - a) / panels;
  double x0 = a;
  double f0 = (*st.f)(nudge_a ? std::nextafter(a, b) : a);
  for (int i = 0; i < panels; ++i) {
    const bool last = i + 1 == panels;
    const double x2 = last ? b : a + (i + 1) * width;
    const double x1 = 0.5 * (x0 + x2);
    const double f1 = (*st.f)(x1);
    const double f2 = (*st.f)(last && nudge_b ? std::nextafter(b, a) : x2);
    const double whole = (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
    total += simpson_panel(st, x0, f0, x1, f1, x2, f2, whole, tol / panels, 0);
    x0 = x2;
    f0 = f2;
  }
  return total;
}

}  // namespace

double HermitePoly::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

HermitePoly hermite(int k) {
  check_degree(k);
  std::vector<double> prev{1.0};
  if (k == 0) return {0, prev};
  std::vector<double> cur{0.0, 1.0};
  for (int j = 1; j < k; ++j) {
    std::vector<double> next(j + 2, 0.0);
    for (int i = 0; i <= j; ++i) next[i + 1] += cur[i];
    for (int i = 0; i < j; ++i) next[i] -= j * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {k, cur};
}

double hermite_eval(int k, double x) {
  check_degree(k);
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_eval_all(int k, double x, std::span<double> out) {
  check_degree(k);
  out[0] = 1.0;
  if (k == 0) return;
  out[1] = x;
  for (int j = 1; j < k; ++j) out[j + 1] = x * out[j] - j * out[j - 1];
}

// glibc erfc is accurate to a couple of ulps over the whole line, including
// the far tails where 1 - erf would cancel.
double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double quad_integrate(const RealFn& f, const QuadratureSpec& spec) {
  return quad_integrate(f, spec, {});
}

double quad_integrate(const RealFn& f, const QuadratureSpec& spec,
                      std::span<const double> breakpoints) {
  if (!(spec.abs_tol > 0.0)) {
    throw Error(ErrorKind::precondition, "quadrature tolerance must be positive");
  }
  if (!(spec.lower < spec.upper)) {
    throw Error(ErrorKind::precondition, "quadrature interval must satisfy lower < upper");
  }
  std::vector<double> cuts{spec.lower};
  std::vector<double> inner;
  for (double b : breakpoints) {
    if (b > spec.lower && b < spec.upper) inner.push_back(b);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(spec.upper);

  SimpsonState st{&f, spec.max_depth};
  const double piece_tol = spec.abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += simpson_piece(st, cuts[i], cuts[i + 1], piece_tol, std::max(1, spec.initial_panels),
                           i > 0, i + 2 < cuts.size());
  }
  if (st.exhausted) {
    throw NonConvergenceError("adaptive Simpson exhausted depth " +
                                  std::to_string(spec.max_depth) + " before tolerance",
                              total);
  }
  return total;
}

double quad_integrate_endpoint_singular(const EndpointFn& f, double lower, double upper,
                                        double abs_tol) {
  if (!(lower < upper)) {
    throw Error(ErrorKind::precondition, "quadrature interval must satisfy lower < upper");
  }
  const double half = 0.5 * (upper - lower);
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr double kTMax = 6.5;

  // Abscissa x = (lower+upper)/2 + half*tanh(pi/2 sinh t); the distance to the nearer
  // endpoint is half * 2/(exp(2u)+1) with u = pi/2 sinh|t|, which stays
  // accurate where tanh rounds to 1.
  auto node = [&](double t) {
    const double u = kHalfPi * std::sinh(std::abs(t));
    const double gap = half * 2.0 / (std::exp(2.0 * u) + 1.0);
    const double ch = std::cosh(u);
    const double w = half * kHalfPi * std::cosh(t) / (ch * ch);
    if (!(gap > 0.0) || !(w > 0.0)) return 0.0;
    const double x = t < 0 ? lower + gap : upper - gap;
    const double from_lower = t < 0 ? gap : (upper - lower) - gap;
    const double from_upper = t < 0 ? (upper - lower) - gap : gap;
    return w * f(x, from_lower, from_upper);
  };

  double h = 0.5;
  double sum = node(0.0);
  for (int k = 1; k * h <= kTMax; ++k) sum += node(k * h) + node(-k * h);
  double estimate = h * sum;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (int k = 1; k * h <= kTMax; k += 2) added += node(k * h) + node(-k * h);
    sum += added;
    const double next = h * sum;
    if (level >= 2 && std::abs(next - estimate) <= abs_tol) return next;
    estimate = next;
  }
  throw NonConvergenceError("tanh-sinh rule did not reach tolerance", estimate);
}

double gauss_hermite_inner(int j, int k) {
  check_degree(j);
  check_degree(k);
  // Tolerance scaled to the natural size sqrt(j! k!) of the inner product.
  double scale = 1.0;
  for (int i = 2; i <= j; ++i) scale *= i;
  for (int i = 2; i <= k; ++i) scale *= i;
  QuadratureSpec spec;
  spec.abs_tol = 1e-12 * std::sqrt(scale);
  return quad_integrate(
      [j, k](double x) {
        std::array<double, kMaxHermiteDegree + 1> h{};
        hermite_eval_all(std::max(j, k), x, h);
        return normal_pdf(x) * h[j] * h[k];
      },
      spec);
}

}  // namespace selfnorm
