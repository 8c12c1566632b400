#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace selfnorm {

inline constexpr int kMinExpansionOrder = 2;
inline constexpr int kMaxExpansionOrder = 6;

/// Moments feeding Q_r / q_r. mu_6 is only needed once Q_4 enters (m = 6).
struct ExpansionMoments {
  double mu4 = 3.0;
  std::optional<double> mu6;
};

enum class ApproxKind { cdf, pdf };

/// Phi^Q_{m,n} (cdf kind) or phi^q_{m,n} (pdf kind) for T_n.
class EdgeworthApprox {
 public:
  EdgeworthApprox(int m, int n, ExpansionMoments moments, ApproxKind kind);

  double operator()(double x) const;

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  ApproxKind kind() const noexcept { return kind_; }
  const ExpansionMoments& moments() const noexcept { return moments_; }

 private:
  int m_;
  int n_;
  ExpansionMoments moments_;
  ApproxKind kind_;
};

EdgeworthApprox edgeworth_cdf(int m, int n, const ExpansionMoments& moments);
EdgeworthApprox edgeworth_pdf(int m, int n, const ExpansionMoments& moments);

/// Distribution-function correction Q_r, r in 1..4. Q_1 = Q_3 = 0.
double Q_r(double x, int r, double mu4, double mu6);
/// Density correction q_r = dQ_r/dx, r in 1..4.
double q_r(double x, int r, double mu4, double mu6);
/// q_r(x) / phi(x): the polynomial factor, free of Gaussian underflow.
double q_r_over_phi(double x, int r, double mu4, double mu6);

/// One realization of |X_1|..|X_n| together with the derived V_n, M_n, B_n.
class ConditionalConfig {
 public:
  explicit ConditionalConfig(std::span<const double> values);

  std::span<const double> abs_values() const noexcept { return abs_values_; }
  int n() const noexcept { return static_cast<int>(abs_values_.size()); }
  double V() const noexcept { return v_; }
  double M() const noexcept { return m_; }
  /// V/M, or 1 when the configuration is all zeros.
  double B() const noexcept { return b_; }
  bool degenerate() const noexcept { return v_ == 0.0; }

  /// sum_j (|x_j| / V)^k for integer k >= 2, 0 when V = 0.
  double normalized_power_sum(int k) const;

 private:
  std::vector<double> abs_values_;
  double v_ = 0.0;
  double m_ = 0.0;
  double b_ = 1.0;
  std::array<double, 7> cached_{};  // normalized sums for k = 2..8
};

/// V^{-l} sum_j kappa~_{l,j}, l in {2, 4, 6}.
double lambda_tilde(const ConditionalConfig& config, int l);

/// V^{-k} sum_j |x_j|^k, k >= 2.
double L_tilde(const ConditionalConfig& config, int k);

/// Conditional distribution-function correction P~_r, r in 1..4.
double P_tilde(const ConditionalConfig& config, int r, double x);
/// Conditional density correction p~_r = dP~_r/dx, r in 1..4.
double p_tilde(const ConditionalConfig& config, int r, double x);

/// Phi + sum_{r <= m-2} P~_r(x).
double cond_cdf_expansion(const ConditionalConfig& config, int m, double x);
/// phi + sum_{r <= m-2} p~_r(x).
double cond_pdf_expansion(const ConditionalConfig& config, int m, double x);

/// prod_j cos(t |x_j| / V): the characteristic function of T_n given |X|.
double cond_charfn(const ConditionalConfig& config, double t);

/// e^{-t^2/2} (1 + sum_{r <= m-2} U~_r(it)); real because only even powers
/// of (it) survive under symmetry.
double expansion_charfn(const ConditionalConfig& config, int m, double t);

/// Lambda coefficients lambda~_4/4! and lambda~_6/6! of a configuration.
struct LambdaCoefficients {
  double a4 = 0.0;  // lambda~_4 / 24
  double a6 = 0.0;  // lambda~_6 / 720
};
LambdaCoefficients lambda_coefficients(const ConditionalConfig& config);

/// Checks m against [2, 6]; throws unsupported_order otherwise.
void check_expansion_order(int m);

}  // namespace selfnorm
