#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "selfnorm/distributions.hpp"
#include "selfnorm/expansion.hpp"

namespace selfnorm {

enum class LambdaTerm {
  lambda4,          // lambda~_4 / 4!
  lambda6,          // lambda~_6 / 6!
  lambda4_squared,  // (lambda~_4 / 4!)^2 / 2
};

const char* to_string(LambdaTerm term) noexcept;
LambdaTerm lambda_term_from_string(const std::string& name);

/// Two-term expansion first * n^{-first_order} + second * n^{-second_order}.
struct LambdaExpansion {
  LambdaTerm term;
  double first;
  double second;
  int first_order;
  int second_order;

  double evaluate(int n) const;
};

std::array<LambdaExpansion, 3> expected_lambda_terms(double mu4, double mu6, double mu8);
LambdaExpansion expected_lambda_term(LambdaTerm term, double mu4, double mu6, double mu8);

double lambda_term_value(const ConditionalConfig& config, LambdaTerm term);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo mean of the chosen term over independent size-n configurations.
/// Replication i always uses stream i of seed, so the result does not depend
/// on threads. Requires replications >= 1000.
McEstimate mc_lambda_mean(const SymmetricLaw& law, int n, LambdaTerm term, long replications,
                          std::uint64_t seed, int threads = 1);

struct LambdaCoefficientFit {
  double first = 0.0;   // coefficient of n^{-1}
  double second = 0.0;  // coefficient of n^{-2}
  double first_se = 0.0;
  double second_se = 0.0;
};

/// Weighted least squares of mean estimates on (n^{-1}, n^{-2}) without
/// intercept, weights 1/se^2. Coefficient standard errors come from the
/// inverse normal matrix.
LambdaCoefficientFit fit_lambda_coefficients(std::span<const int> ns,
                                             std::span<const McEstimate> estimates);

}  // namespace selfnorm
