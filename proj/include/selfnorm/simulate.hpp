#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "selfnorm/distributions.hpp"
#include "selfnorm/parallel.hpp"

namespace selfnorm {

/// S_n / V_n, or 0 when every entry is zero.
double tn_value(std::span<const double> draws);

struct TnSampleBatch {
  std::string law_id;
  int n = 0;
  std::uint64_t seed = 0;
  long first_replication = 0;
  std::vector<double> values;
};

/// Throws invariant_violation if some |T_n| exceeds sqrt(n) beyond rounding.
void check_tn_bound(const TnSampleBatch& batch);

/// Replications [first, first + count); replication i draws its n values from
/// stream i of seed.
TnSampleBatch sample_Tn_batch(const SymmetricLaw& law, int n, long first, long count,
                              std::uint64_t seed);

/// Streams `replications` draws of T_n in batches of at most batch_size,
/// bound-checking each batch before handing it to sink.
void sample_Tn(const SymmetricLaw& law, int n, long replications, std::uint64_t seed,
               const std::function<void(const TnSampleBatch&)>& sink,
               long batch_size = kChunkReplications);

/// Exact density of T_n for standard normal inputs:
/// C_n (1 - t^2/n)^{(n-3)/2} on |t| < sqrt n, C_n = Gamma(n/2) / (Gamma((n-1)/2) sqrt(n pi)).
class GaussianTnDensity {
 public:
  explicit GaussianTnDensity(int n);

  double operator()(double t) const noexcept;
  /// log f_n(t); -inf outside the support.
  double log_density(double t) const noexcept;
  /// P(T_n <= t) through the Student t law of T sqrt((n-1)/(n-T^2)) with
  /// n - 1 degrees of freedom.
  double cdf(double t) const;
  int n() const noexcept { return n_; }
  double support_radius() const noexcept { return radius_; }

 private:
  int n_;
  double radius_;
  double log_c_;
};

GaussianTnDensity gaussian_exact_density(int n);

struct GridSpec {
  double lower = -8.0;
  double upper = 8.0;
  double step = 0.01;
};

std::vector<double> make_grid(const GridSpec& spec);

/// [-8, 8] step 0.01, widened to cover [-sqrt(n)-1, sqrt(n)+1] for n < 64.
GridSpec default_grid_spec(int n);

/// Empirical distribution function on a fixed grid: counts[i] = #{v <= grid[i]}.
class EcdfGrid {
 public:
  EcdfGrid() = default;
  explicit EcdfGrid(std::vector<double> grid);

  void update(double value);
  void update(std::span<const double> values);
  /// Throws grid_mismatch when the grids differ.
  void merge(const EcdfGrid& other);

  const std::vector<double>& grid() const noexcept { return grid_; }
  std::uint64_t total() const noexcept { return total_; }
  std::vector<std::uint64_t> counts() const;
  /// count(i) / total.
  double eval(std::size_t i) const;
  std::vector<double> values() const;

  static EcdfGrid from_counts(std::vector<double> grid, std::span<const std::uint64_t> counts,
                              std::uint64_t total);

  bool operator==(const EcdfGrid&) const = default;

 private:
  std::size_t locate(double value) const noexcept;

  std::vector<double> grid_;
  std::vector<std::uint64_t> bins_;  // bins_[j]: grid[j-1] < v <= grid[j]; last: v > grid.back()
  std::uint64_t total_ = 0;
  double uniform_lower_ = 0.0;
  double uniform_step_ = 0.0;
};

/// Fixed-edge histogram; values outside [edges.front(), edges.back()) are
/// tallied separately so the masses plus the outside mass sum to one.
class HistogramDensity {
 public:
  HistogramDensity() = default;
  explicit HistogramDensity(std::vector<double> edges);
  HistogramDensity(double lower, double upper, int bins);

  void update(double value);
  void update(std::span<const double> values);
  void merge(const HistogramDensity& other);

  const std::vector<double>& edges() const noexcept { return edges_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t below() const noexcept { return below_; }
  std::uint64_t above() const noexcept { return above_; }
  std::size_t bin_count() const noexcept { return counts_.size(); }

  double mass(std::size_t bin) const;
  double outside_mass() const;
  /// mass / width of the bin containing x; 0 outside the edges.
  double density_eval(double x) const;

  static HistogramDensity from_counts(std::vector<double> edges,
                                      std::vector<std::uint64_t> counts, std::uint64_t below,
                                      std::uint64_t above);

  bool operator==(const HistogramDensity&) const = default;

 private:
  std::vector<double> edges_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t below_ = 0;
  std::uint64_t above_ = 0;
  std::uint64_t total_ = 0;
};

/// ceil(2 reps^{1/3}) capped at 400.
int default_histogram_bins(long replications);

struct SimulationConfig {
  int n = 64;
  long replications = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  GridSpec grid;
  double hist_lower = -6.0;
  double hist_upper = 6.0;
  int hist_bins = 0;  // 0: default_histogram_bins(replications)
};

/// Merged estimator state of a (possibly resumed) T_n simulation.
struct SimulationState {
  std::string law_id;
  int n = 0;
  std::uint64_t seed = 0;
  long replications = 0;
  EcdfGrid ecdf;
  HistogramDensity histogram;
  MomentAccumulator moments;
  double max_abs = 0.0;
};

inline constexpr int kSnapshotVersion = 1;

/// Runs replications [0, config.replications).
SimulationState run_simulation(const SymmetricLaw& law, const SimulationConfig& config);

/// Extends state with replications [state.replications, target_replications).
void extend_simulation(const SymmetricLaw& law, SimulationState& state, long target_replications,
                       int threads);

std::string snapshot_to_json(const SimulationState& state);
SimulationState snapshot_from_json(const std::string& text);

}  // namespace selfnorm
