#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "selfnorm/rng.hpp"

namespace selfnorm {

inline constexpr int kMaxMomentOrder = 12;

enum class LawKind { gaussian, uniform, laplace, gauss_mix, custom };

/// Unit-variance symmetric source law. Immutable after construction; the
/// constructor rejects anything that is not normalized (mu_2 = 1) or not
/// symmetric (odd moments non-zero).
class SymmetricLaw {
 public:
  static SymmetricLaw gaussian();
  /// Uniform on [-sqrt 3, sqrt 3].
  static SymmetricLaw uniform();
  /// Laplace with scale 1/sqrt 2.
  static SymmetricLaw laplace();
  /// Equal mixture of N(0, s1) and N(0, 2 - s1), s1 in (0, 2).
  static SymmetricLaw gauss_mix(double sigma1_sq = 0.5);
  /// Law known only through its even moments mu_4, mu_6, ... (up to mu_12).
  /// Missing higher orders are stored as NaN. No density, no sampler.
  static SymmetricLaw custom(std::string id, std::span<const double> even_moments_from_4);

  const std::string& id() const noexcept { return id_; }
  LawKind kind() const noexcept { return kind_; }
  const std::array<double, kMaxMomentOrder + 1>& moments() const noexcept { return moments_; }
  double moment(int k) const;
  /// Largest even k such that mu_0..mu_k are all known.
  int highest_known_moment() const noexcept;

  bool has_density() const noexcept { return kind_ != LawKind::custom; }
  bool non_singular() const noexcept { return kind_ != LawKind::custom; }
  bool can_sample() const noexcept { return kind_ != LawKind::custom; }

  double density(double x) const;
  double cdf(double x) const;

  /// Fills out with i.i.d. draws consuming rng.
  void fill(CounterRng& rng, std::span<double> out) const;

 private:
  SymmetricLaw(std::string id, LawKind kind, double param,
               std::array<double, kMaxMomentOrder + 1> moments);

  std::string id_;
  LawKind kind_;
  double param_;  // gauss_mix: sigma1^2
  std::array<double, kMaxMomentOrder + 1> moments_;
};

/// Built-in laws keyed by id: gaussian, uniform, laplace, gauss_mix.
const std::map<std::string, SymmetricLaw>& catalog();

/// Catalog lookup; unknown ids raise a usage error listing the valid ones.
const SymmetricLaw& find_law(const std::string& id);

/// Cumulants kappa_1..kappa_L, accessed 1-based.
struct CumulantVector {
  std::vector<double> values;

  double operator[](int l) const { return values.at(static_cast<std::size_t>(l - 1)); }
  int order() const noexcept { return static_cast<int>(values.size()); }
};

/// Raw moments mu_0..mu_L (mu_0 = 1) to cumulants by the recursion
/// kappa_n = mu_n - sum_{k<n} C(n-1, k-1) kappa_k mu_{n-k}.
CumulantVector moments_to_cumulants(std::span<const double> moments);

/// Inverse of moments_to_cumulants; returns mu_0..mu_L.
std::vector<double> cumulants_to_moments(const CumulantVector& cumulants);

/// Cumulant of order 2r of the symmetric two-point law at +-abs_value.
/// Orders 2, 4, 6 only.
double conditional_cumulant(double abs_value, int order);

/// n i.i.d. draws from law using stream 0 of the given seed.
std::vector<double> sample(const SymmetricLaw& law, int n, std::uint64_t seed);

}  // namespace selfnorm
