#include "selfnorm/lambda_moments.hpp"

#include <vector>

#include "selfnorm/error.hpp"
#include "selfnorm/parallel.hpp"

namespace selfnorm {

const char* to_string(LambdaTerm term) noexcept {
  switch (term) {
    case LambdaTerm::lambda4: return "lambda4";
    case LambdaTerm::lambda6: return "lambda6";
    case LambdaTerm::lambda4_squared: return "lambda4_sq";
  }
  return "unknown";
}

LambdaTerm lambda_term_from_string(const std::string& name) {
  for (auto term : {LambdaTerm::lambda4, LambdaTerm::lambda6, LambdaTerm::lambda4_squared}) {
    if (name == to_string(term)) return term;
  }
  throw Error(ErrorKind::usage,
              "unknown lambda term '" + name + "'; valid: lambda4, lambda6, lambda4_sq");
}

double LambdaExpansion::evaluate(int n) const {
  const double nn = static_cast<double>(n);
  return first * std::pow(nn, -first_order) + second * std::pow(nn, -second_order);
}

LambdaExpansion expected_lambda_term(LambdaTerm term, double mu4, double mu6, double mu8) {
  switch (term) {
    case LambdaTerm::lambda4:
      return {term, -mu4 / 12.0, (2.0 * mu6 + mu4 - 3.0 * mu4 * mu4) / 12.0, 1, 2};
    case LambdaTerm::lambda6:
      return {term, mu6 / 45.0, -(3.0 * mu8 + 3.0 * mu6 - 6.0 * mu4 * mu6) / 45.0, 2, 3};
    case LambdaTerm::lambda4_squared:
      // Second coefficient from the delta method on (sum x^4, sum x^2); it
      // reproduces the exact Gaussian value (9n + 96) / ((n+2)(n+4)(n+6)) / 288.
      return {term, mu4 * mu4 / 288.0,
              (mu8 - 8.0 * mu4 * mu6 - 3.0 * mu4 * mu4 + 10.0 * mu4 * mu4 * mu4) / 288.0, 2, 3};
  }
  throw Error(ErrorKind::domain, "unknown lambda term");
}

std::array<LambdaExpansion, 3> expected_lambda_terms(double mu4, double mu6, double mu8) {
  return {expected_lambda_term(LambdaTerm::lambda4, mu4, mu6, mu8),
          expected_lambda_term(LambdaTerm::lambda6, mu4, mu6, mu8),
          expected_lambda_term(LambdaTerm::lambda4_squared, mu4, mu6, mu8)};
}

double lambda_term_value(const ConditionalConfig& config, LambdaTerm term) {
  const auto a = lambda_coefficients(config);
  switch (term) {
    case LambdaTerm::lambda4: return a.a4;
    case LambdaTerm::lambda6: return a.a6;
    case LambdaTerm::lambda4_squared: return 0.5 * a.a4 * a.a4;
  }
  throw Error(ErrorKind::domain, "unknown lambda term");
}

McEstimate mc_lambda_mean(const SymmetricLaw& law, int n, LambdaTerm term, long replications,
                          std::uint64_t seed, int threads) {
  if (replications < 1000) {
    throw Error(ErrorKind::precondition, "mc_lambda_mean needs at least 1000 replications");
  }
  if (n < 1) throw Error(ErrorKind::domain, "n must be >= 1");
  std::vector<MomentAccumulator> per_chunk(chunk_count(replications));
  for_each_chunk(replications, threads, [&](const Chunk& chunk) {
    std::vector<double> draws(static_cast<std::size_t>(n));
    MomentAccumulator acc;
    for (long rep = chunk.begin; rep < chunk.end; ++rep) {
      CounterRng rng(seed, static_cast<std::uint64_t>(rep));
      law.fill(rng, draws);
      acc.add(lambda_term_value(ConditionalConfig(draws), term));
    }
    per_chunk[chunk.index] = acc;
  });
  MomentAccumulator total;
  for (const auto& acc : per_chunk) total.merge(acc);
  return {total.mean, total.standard_error()};
}

LambdaCoefficientFit fit_lambda_coefficients(std::span<const int> ns,
                                             std::span<const McEstimate> estimates) {
  if (ns.size() != estimates.size() || ns.size() < 3) {
    throw Error(ErrorKind::fit, "coefficient fit needs >= 3 matching (n, estimate) pairs");
  }
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double se = estimates[i].standard_error;
    if (!(se > 0.0)) throw Error(ErrorKind::fit, "coefficient fit needs positive standard errors");
    const double w = 1.0 / (se * se);
    const double x1 = 1.0 / ns[i];
    const double x2 = x1 * x1;
    s11 += w * x1 * x1;
    s12 += w * x1 * x2;
    s22 += w * x2 * x2;
    b1 += w * x1 * estimates[i].estimate;
    b2 += w * x2 * estimates[i].estimate;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(det > 0.0)) throw Error(ErrorKind::fit, "singular normal matrix");
  LambdaCoefficientFit fit;
  fit.first = (s22 * b1 - s12 * b2) / det;
  fit.second = (s11 * b2 - s12 * b1) / det;
  fit.first_se = std::sqrt(s22 / det);
  fit.second_se = std::sqrt(s11 / det);
  return fit;
}

}  // namespace selfnorm
