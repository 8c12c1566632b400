#include "selfnorm/entropy_coeffs.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "selfnorm/error.hpp"
#include "selfnorm/special_math.hpp"

namespace selfnorm {

namespace {

// Calls visit(parts) for every composition of total into exactly k positive parts.
void for_each_composition(int total, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parts(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == k - 1) {
      parts[slot] = remaining;
      visit(parts);
      return;
    }
    for (int r = 1; r <= remaining - (k - 1 - slot); ++r) {
      parts[slot] = r;
      rec(slot + 1, remaining - r);
    }
  };
  if (k >= 1 && total >= k) rec(0, total);
}

}  // namespace

EntropyCoefficient c_l(const ExpansionMoments& moments, int l) {
  if (l < 1 || l > 3) {
    throw Error(ErrorKind::unsupported_order,
                "entropy coefficient c_" + std::to_string(l) + " not supported (l in 1..3)");
  }
  EntropyCoefficient result;
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  for (int k = 2; k <= 2 * l; ++k) {
    const double weight = ((k % 2 == 0) ? 1.0 : -1.0) / (k * (k - 1.0));
    for_each_composition(2 * l, k, [&](const std::vector<int>& parts) {
      for (int r : parts) {
        if (r % 2 == 1) return;  // q_r vanishes for odd r
      }
      for (int r : parts) {
        if (r > 4) {
          result.partial = true;
          return;
        }
      }
      bool needs_mu6 = false;
      for (int r : parts) needs_mu6 = needs_mu6 || r == 4;
      if (needs_mu6 && !moments.mu6) {
        throw Error(ErrorKind::arity, "entropy coefficient needs mu_6");
      }
      const double mu6 = moments.mu6.value_or(std::numeric_limits<double>::quiet_NaN());
      // q_{r_1}..q_{r_k} / phi^{k-1} = phi * prod (q_{r_i} / phi)
      const double integral = quad_integrate(
          [&](double x) {
            double prod = normal_pdf(x);
            for (int r : parts) prod *= q_r_over_phi(x, r, moments.mu4, mu6);
            return prod;
          },
          spec);
      result.value += weight * integral;
    });
  }
  return result;
}

double analytic_c2(double mu4) { return mu4 * mu4 / 12.0; }

double zn_entropy_leading(double mu4) { return (mu4 - 3.0) * (mu4 - 3.0) / 48.0; }

double entropy_prediction(const ExpansionMoments& moments, int m, int n) {
  if (m < 4 || m > 6) {
    throw Error(ErrorKind::unsupported_order, "entropy prediction needs m in {4, 5, 6}");
  }
  if (n < 1) throw Error(ErrorKind::domain, "n must be >= 1");
  double total = 0.0;
  for (int l = 2; l <= (m - 2) / 2; ++l) {
    total += c_l(moments, l).value * std::pow(static_cast<double>(n), -l);
  }
  return total;
}

std::map<int, EntropyCoefficient> entropy_coefficients(const ExpansionMoments& moments, int lmax) {
  std::map<int, EntropyCoefficient> out;
  for (int l = 1; l <= lmax; ++l) out.emplace(l, c_l(moments, l));
  return out;
}

}  // namespace selfnorm
