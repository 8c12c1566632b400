#pragma once

#include <map>

#include "selfnorm/expansion.hpp"

namespace selfnorm {

struct EntropyCoefficient {
  double value = 0.0;
  /// True when some composition term needed a q_r without a closed form and
  /// was left out.
  bool partial = false;
};

/// c_l = sum_{k=2}^{2l} (-1)^k / (k(k-1)) sum_{r_1+..+r_k = 2l} \int q_{r_1}..q_{r_k} / phi^{k-1},
/// each integral by adaptive quadrature on [-12, 12]. l in {1, 2, 3}.
EntropyCoefficient c_l(const ExpansionMoments& moments, int l);

/// Leading coefficient mu_4^2 / 12 from Hermite orthogonality.
double analytic_c2(double mu4);

/// Leading coefficient (mu_4 - 3)^2 / 48 of D(Z_n) for the classical
/// normalized sum, for comparison.
double zn_entropy_leading(double mu4);

/// sum_{l=2}^{floor((m-2)/2)} c_l n^{-l}; m in {4, 5, 6}.
double entropy_prediction(const ExpansionMoments& moments, int m, int n);

/// c_1..c_lmax keyed by l.
std::map<int, EntropyCoefficient> entropy_coefficients(const ExpansionMoments& moments, int lmax);

}  // namespace selfnorm
