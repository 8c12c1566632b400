#include "selfnorm/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "selfnorm/error.hpp"
#include "selfnorm/special_math.hpp"

namespace selfnorm {

namespace {

using MomentArray = std::array<double, kMaxMomentOrder + 1>;

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kLaplaceScale = 0.70710678118654752440;  // b with 2 b^2 = 1

double double_factorial_odd(int k) {  // (2k-1)!!
  double acc = 1.0;
  for (int i = 1; i <= 2 * k - 1; i += 2) acc *= i;
  return acc;
}

MomentArray even_moments(auto&& even) {
  MomentArray mu{};
  for (int k = 0; 2 * k <= kMaxMomentOrder; ++k) mu[2 * k] = even(k);
  return mu;
}

double box_muller(double u1, double u2) {
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

SymmetricLaw::SymmetricLaw(std::string id, LawKind kind, double param, MomentArray moments)
    : id_(std::move(id)), kind_(kind), param_(param), moments_(moments) {
  if (moments_[0] != 1.0) {
    throw Error(ErrorKind::precondition, "law '" + id_ + "': mu_0 must be 1");
  }
  if (std::abs(moments_[2] - 1.0) > 1e-12) {
    throw Error(ErrorKind::precondition, "law '" + id_ + "': variance must be 1");
  }
  for (int k = 1; k <= kMaxMomentOrder; k += 2) {
    if (moments_[k] != 0.0) {
      throw Error(ErrorKind::precondition, "law '" + id_ + "': odd moments must vanish");
    }
  }
  if (!(moments_[4] >= 1.0)) {
    throw Error(ErrorKind::precondition, "law '" + id_ + "': mu_4 must be >= 1");
  }
  if (std::isfinite(moments_[6]) && moments_[6] * moments_[2] < moments_[4] * moments_[4]) {
    throw Error(ErrorKind::precondition, "law '" + id_ + "': mu_6 mu_2 < mu_4^2");
  }
}

SymmetricLaw SymmetricLaw::gaussian() {
  return {"gaussian", LawKind::gaussian, 0.0,
          even_moments([](int k) { return double_factorial_odd(k); })};
}

SymmetricLaw SymmetricLaw::uniform() {
  return {"uniform", LawKind::uniform, 0.0,
          even_moments([](int k) { return std::pow(3.0, k) / (2 * k + 1); })};
}

SymmetricLaw SymmetricLaw::laplace() {
  return {"laplace", LawKind::laplace, 0.0, even_moments([](int k) {
            double f = 1.0;
            for (int i = 2; i <= 2 * k; ++i) f *= i;
            return f / std::pow(2.0, k);
          })};
}

SymmetricLaw SymmetricLaw::gauss_mix(double sigma1_sq) {
  if (!(sigma1_sq > 0.0 && sigma1_sq < 2.0)) {
    throw Error(ErrorKind::precondition, "gauss_mix: sigma1^2 must lie in (0, 2)");
  }
  const double s2 = 2.0 - sigma1_sq;
  return {"gauss_mix", LawKind::gauss_mix, sigma1_sq, even_moments([&](int k) {
            return double_factorial_odd(k) * 0.5 *
                   (std::pow(sigma1_sq, k) + std::pow(s2, k));
          })};
}

SymmetricLaw SymmetricLaw::custom(std::string id, std::span<const double> even_moments_from_4) {
  MomentArray mu{};
  mu.fill(0.0);
  for (int k = 4; k <= kMaxMomentOrder; k += 2) mu[k] = std::numeric_limits<double>::quiet_NaN();
  mu[0] = 1.0;
  mu[2] = 1.0;
  if (even_moments_from_4.empty()) {
    throw Error(ErrorKind::arity, "custom law needs at least mu_4");
  }
  if (even_moments_from_4.size() > (kMaxMomentOrder - 2) / 2) {
    throw Error(ErrorKind::arity, "custom law accepts moments up to mu_12");
  }
  for (std::size_t i = 0; i < even_moments_from_4.size(); ++i) {
    mu[4 + 2 * i] = even_moments_from_4[i];
  }
  return {std::move(id), LawKind::custom, 0.0, mu};
}

double SymmetricLaw::moment(int k) const {
  if (k < 0 || k > kMaxMomentOrder) {
    throw Error(ErrorKind::domain, "moment order outside [0, 12]");
  }
  return moments_[k];
}

int SymmetricLaw::highest_known_moment() const noexcept {
  int k = 2;
  while (k + 2 <= kMaxMomentOrder && std::isfinite(moments_[k + 2])) k += 2;
  return k;
}

double SymmetricLaw::density(double x) const {
  switch (kind_) {
    case LawKind::gaussian: return normal_pdf(x);
    case LawKind::uniform: return std::abs(x) <= kSqrt3 ? 0.5 / kSqrt3 : 0.0;
    case LawKind::laplace:
      return 0.5 / kLaplaceScale * std::exp(-std::abs(x) / kLaplaceScale);
    case LawKind::gauss_mix: {
      const double s1 = std::sqrt(param_);
      const double s2 = std::sqrt(2.0 - param_);
      return 0.5 * (normal_pdf(x / s1) / s1 + normal_pdf(x / s2) / s2);
    }
    case LawKind::custom: break;
  }
  throw Error(ErrorKind::precondition, "law '" + id_ + "' has no density");
}

double SymmetricLaw::cdf(double x) const {
  switch (kind_) {
    case LawKind::gaussian: return normal_cdf(x);
    case LawKind::uniform:
      if (x <= -kSqrt3) return 0.0;
      if (x >= kSqrt3) return 1.0;
      return 0.5 + 0.5 * x / kSqrt3;
    case LawKind::laplace:
      return x < 0 ? 0.5 * std::exp(x / kLaplaceScale)
                   : 1.0 - 0.5 * std::exp(-x / kLaplaceScale);
    case LawKind::gauss_mix:
      return 0.5 * (normal_cdf(x / std::sqrt(param_)) + normal_cdf(x / std::sqrt(2.0 - param_)));
    case LawKind::custom: break;
  }
  throw Error(ErrorKind::precondition, "law '" + id_ + "' has no distribution function");
}

void SymmetricLaw::fill(CounterRng& rng, std::span<double> out) const {
  switch (kind_) {
    case LawKind::gaussian: {
      std::size_t i = 0;
      for (; i + 1 < out.size(); i += 2) {
        const double r = std::sqrt(-2.0 * std::log(rng.uniform01()));
        const double theta = 2.0 * std::numbers::pi * rng.uniform01();
        out[i] = r * std::cos(theta);
        out[i + 1] = r * std::sin(theta);
      }
      if (i < out.size()) out[i] = box_muller(rng.uniform01(), rng.uniform01());
      return;
    }
    case LawKind::uniform:
      for (double& v : out) v = kSqrt3 * (2.0 * rng.uniform01() - 1.0);
      return;
    case LawKind::laplace:
      for (double& v : out) {
        const double u = rng.uniform01() - 0.5;
        const double mag = -kLaplaceScale * std::log1p(-2.0 * std::abs(u));
        v = u < 0 ? -mag : mag;
      }
      return;
    case LawKind::gauss_mix: {
      const double s1 = std::sqrt(param_);
      const double s2 = std::sqrt(2.0 - param_);
      for (double& v : out) {
        const double scale = rng.uniform01() < 0.5 ? s1 : s2;
        v = scale * box_muller(rng.uniform01(), rng.uniform01());
      }
      return;
    }
    case LawKind::custom: break;
  }
  throw Error(ErrorKind::precondition, "law '" + id_ + "' has no sampler");
}

const std::map<std::string, SymmetricLaw>& catalog() {
  static const std::map<std::string, SymmetricLaw> laws = [] {
    std::map<std::string, SymmetricLaw> m;
    for (auto law : {SymmetricLaw::gaussian(), SymmetricLaw::uniform(), SymmetricLaw::laplace(),
                     SymmetricLaw::gauss_mix()}) {
      m.emplace(law.id(), law);
    }
    return m;
  }();
  return laws;
}

const SymmetricLaw& find_law(const std::string& id) {
  const auto& laws = catalog();
  if (auto it = laws.find(id); it != laws.end()) return it->second;
  std::string valid;
  for (const auto& [name, law] : laws) valid += (valid.empty() ? "" : ", ") + name;
  throw Error(ErrorKind::usage, "unknown law '" + id + "'; valid ids: " + valid);
}

CumulantVector moments_to_cumulants(std::span<const double> moments) {
  if (moments.size() < 2) {
    throw Error(ErrorKind::arity, "need at least mu_0 and mu_1");
  }
  if (moments[0] != 1.0) {
    throw Error(ErrorKind::precondition, "mu_0 must be 1");
  }
  const std::size_t order = moments.size() - 1;
  std::vector<double> kappa(order + 1, 0.0);  // kappa[0] unused
  for (std::size_t n = 1; n <= order; ++n) {
    double acc = moments[n];
    double binom = 1.0;  // C(n-1, k-1) for k = 1
    for (std::size_t k = 1; k < n; ++k) {
      acc -= binom * kappa[k] * moments[n - k];
      binom = binom * static_cast<double>(n - k) / static_cast<double>(k);
    }
    kappa[n] = acc;
  }
  return {std::vector<double>(kappa.begin() + 1, kappa.end())};
}

std::vector<double> cumulants_to_moments(const CumulantVector& cumulants) {
  const int order = cumulants.order();
  std::vector<double> mu(static_cast<std::size_t>(order) + 1, 0.0);
  mu[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    double binom = 1.0;
    for (int k = 1; k <= n; ++k) {
      acc += binom * cumulants[k] * mu[n - k];
      binom = binom * (n - k) / k;
    }
    mu[n] = acc;
  }
  return mu;
}

double conditional_cumulant(double abs_value, int order) {
  if (abs_value < 0.0) {
    throw Error(ErrorKind::domain, "conditional cumulant needs a non-negative value");
  }
  const double x2 = abs_value * abs_value;
  switch (order) {
    case 2: return x2;
    case 4: return -2.0 * x2 * x2;
    case 6: return 16.0 * x2 * x2 * x2;
    default: break;
  }
  throw Error(ErrorKind::unsupported_order,
              "conditional cumulant order " + std::to_string(order) + " not in {2, 4, 6}");
}

std::vector<double> sample(const SymmetricLaw& law, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::domain, "sample size must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  CounterRng rng(seed, 0);
  law.fill(rng, out);
  return out;
}

}  // namespace selfnorm
