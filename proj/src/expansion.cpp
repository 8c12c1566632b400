#include "selfnorm/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "selfnorm/distributions.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/special_math.hpp"

namespace selfnorm {

namespace {

void check_correction_index(int r) {
  if (r < 1 || r > 4) {
    throw Error(ErrorKind::unsupported_order,
                "correction index " + std::to_string(r) + " outside 1..4 (no closed form)");
  }
}

std::array<double, 9> hermite_upto8(double x) {
  std::array<double, 9> h{};
  hermite_eval_all(8, x, h);
  return h;
}

// Polynomial factor of Q_r, i.e. Q_r / phi.
double Q_r_over_phi(double x, int r, double mu4, double mu6) {
  check_correction_index(r);
  if (r % 2 == 1) return 0.0;
  const auto h = hermite_upto8(x);
  if (r == 2) return h[3] * mu4 / 12.0;
  return -(h[7] * mu4 * mu4 / 288.0 + h[5] * mu6 / 45.0 +
           h[3] * (2.0 * mu6 + mu4 - 3.0 * mu4 * mu4) / 12.0);
}

double P_tilde_over_phi(const LambdaCoefficients& a, int r, double x) {
  check_correction_index(r);
  if (r % 2 == 1) return 0.0;
  const auto h = hermite_upto8(x);
  if (r == 2) return -h[3] * a.a4;
  return -(h[7] * 0.5 * a.a4 * a.a4 + h[5] * a.a6);
}

double p_tilde_over_phi(const LambdaCoefficients& a, int r, double x) {
  check_correction_index(r);
  if (r % 2 == 1) return 0.0;
  const auto h = hermite_upto8(x);
  if (r == 2) return h[4] * a.a4;
  return h[8] * 0.5 * a.a4 * a.a4 + h[6] * a.a6;
}

}  // namespace

void check_expansion_order(int m) {
  if (m < kMinExpansionOrder || m > kMaxExpansionOrder) {
    throw Error(ErrorKind::unsupported_order,
                "expansion order m = " + std::to_string(m) + " outside [2, 6]");
  }
}

double Q_r(double x, int r, double mu4, double mu6) {
  return normal_pdf(x) * Q_r_over_phi(x, r, mu4, mu6);
}

double q_r_over_phi(double x, int r, double mu4, double mu6) {
  check_correction_index(r);
  if (r % 2 == 1) return 0.0;
  const auto h = hermite_upto8(x);
  if (r == 2) return -h[4] * mu4 / 12.0;
  return h[8] * mu4 * mu4 / 288.0 + h[6] * mu6 / 45.0 +
         h[4] * (2.0 * mu6 + mu4 - 3.0 * mu4 * mu4) / 12.0;
}

double q_r(double x, int r, double mu4, double mu6) {
  return normal_pdf(x) * q_r_over_phi(x, r, mu4, mu6);
}

EdgeworthApprox::EdgeworthApprox(int m, int n, ExpansionMoments moments, ApproxKind kind)
    : m_(m), n_(n), moments_(moments), kind_(kind) {
  check_expansion_order(m);
  if (n < 1) throw Error(ErrorKind::domain, "n must be >= 1");
  if (m >= 6 && !moments_.mu6) {
    throw Error(ErrorKind::arity, "m = 6 needs mu_6");
  }
}

double EdgeworthApprox::operator()(double x) const {
  const double mu6 = moments_.mu6.value_or(std::numeric_limits<double>::quiet_NaN());
  double poly = 0.0;
  for (int r = 2; r <= m_ - 2; r += 2) {
    const double scale = std::pow(static_cast<double>(n_), -0.5 * r);
    poly += scale * (kind_ == ApproxKind::cdf ? Q_r_over_phi(x, r, moments_.mu4, mu6)
                                              : q_r_over_phi(x, r, moments_.mu4, mu6));
  }
  const double phi = normal_pdf(x);
  return kind_ == ApproxKind::cdf ? normal_cdf(x) + phi * poly : phi * (1.0 + poly);
}

EdgeworthApprox edgeworth_cdf(int m, int n, const ExpansionMoments& moments) {
  return {m, n, moments, ApproxKind::cdf};
}

EdgeworthApprox edgeworth_pdf(int m, int n, const ExpansionMoments& moments) {
  return {m, n, moments, ApproxKind::pdf};
}

ConditionalConfig::ConditionalConfig(std::span<const double> values) {
  abs_values_.reserve(values.size());
  for (double v : values) abs_values_.push_back(std::abs(v));
  if (abs_values_.empty()) throw Error(ErrorKind::domain, "configuration needs n >= 1");
  m_ = *std::max_element(abs_values_.begin(), abs_values_.end());
  if (m_ == 0.0) return;
  // Scale by M before squaring so huge or tiny inputs neither overflow nor
  // underflow.
  double sum_sq = 0.0;
  for (double v : abs_values_) sum_sq += (v / m_) * (v / m_);
  v_ = m_ * std::sqrt(sum_sq);
  b_ = v_ / m_;
  for (double v : abs_values_) {
    const double u = v / v_;
    double p = u * u;
    for (int k = 2; k <= 8; ++k) {
      cached_[k - 2] += p;
      p *= u;
    }
  }
}

double ConditionalConfig::normalized_power_sum(int k) const {
  if (k < 2) throw Error(ErrorKind::domain, "power-sum order must be >= 2");
  if (v_ == 0.0) return 0.0;
  if (k <= 8) return cached_[k - 2];
  double acc = 0.0;
  for (double v : abs_values_) acc += std::pow(v / v_, k);
  return acc;
}

double L_tilde(const ConditionalConfig& config, int k) { return config.normalized_power_sum(k); }

double lambda_tilde(const ConditionalConfig& config, int l) {
  if (l != 2 && l != 4 && l != 6) {
    throw Error(ErrorKind::unsupported_order,
                "lambda~ order " + std::to_string(l) + " not in {2, 4, 6}");
  }
  // kappa~_{l,j} = c_l |x_j|^l with c_2 = 1, c_4 = -2, c_6 = 16.
  return conditional_cumulant(1.0, l) * config.normalized_power_sum(l);
}

LambdaCoefficients lambda_coefficients(const ConditionalConfig& config) {
  return {lambda_tilde(config, 4) / 24.0, lambda_tilde(config, 6) / 720.0};
}

double P_tilde(const ConditionalConfig& config, int r, double x) {
  return normal_pdf(x) * P_tilde_over_phi(lambda_coefficients(config), r, x);
}

double p_tilde(const ConditionalConfig& config, int r, double x) {
  return normal_pdf(x) * p_tilde_over_phi(lambda_coefficients(config), r, x);
}

double cond_cdf_expansion(const ConditionalConfig& config, int m, double x) {
  check_expansion_order(m);
  const auto a = lambda_coefficients(config);
  double poly = 0.0;
  for (int r = 2; r <= m - 2; r += 2) poly += P_tilde_over_phi(a, r, x);
  return normal_cdf(x) + normal_pdf(x) * poly;
}

double cond_pdf_expansion(const ConditionalConfig& config, int m, double x) {
  check_expansion_order(m);
  const auto a = lambda_coefficients(config);
  double poly = 0.0;
  for (int r = 2; r <= m - 2; r += 2) poly += p_tilde_over_phi(a, r, x);
  return normal_pdf(x) * (1.0 + poly);
}

double cond_charfn(const ConditionalConfig& config, double t) {
  if (config.degenerate()) {
    throw Error(ErrorKind::degenerate_config, "conditional characteristic function needs V > 0");
  }
  double prod = 1.0;
  for (double v : config.abs_values()) prod *= std::cos(t * (v / config.V()));
  return prod;
}

double expansion_charfn(const ConditionalConfig& config, int m, double t) {
  check_expansion_order(m);
  const auto a = lambda_coefficients(config);
  const double t2 = t * t;
  const double t4 = t2 * t2;
  double u = 0.0;
  if (m >= 4) u += t4 * a.a4;                                       // (it)^4 = t^4
  if (m >= 6) u += t4 * t4 * 0.5 * a.a4 * a.a4 - t4 * t2 * a.a6;  // (it)^8, (it)^6
  return std::exp(-0.5 * t2) * (1.0 + u);
}

}  // namespace selfnorm
