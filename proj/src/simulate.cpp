#include "selfnorm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "selfnorm/error.hpp"

namespace selfnorm {

double tn_value(std::span<const double> draws) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : draws) {
    sum += x;
    sum_sq += x * x;
  }
  return sum_sq > 0.0 ? sum / std::sqrt(sum_sq) : 0.0;
}

void check_tn_bound(const TnSampleBatch& batch) {
  const double bound = std::sqrt(static_cast<double>(batch.n)) * (1.0 + 1e-12);
  for (std::size_t i = 0; i < batch.values.size(); ++i) {
    if (!(std::abs(batch.values[i]) <= bound)) {
      throw Error(ErrorKind::invariant_violation,
                  "|T_n| > sqrt(n) at replication " +
                      std::to_string(batch.first_replication + static_cast<long>(i)));
    }
  }
}

TnSampleBatch sample_Tn_batch(const SymmetricLaw& law, int n, long first, long count,
                              std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::domain, "n must be >= 1");
  TnSampleBatch batch{law.id(), n, seed, first, {}};
  batch.values.reserve(static_cast<std::size_t>(count));
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (long rep = first; rep < first + count; ++rep) {
    CounterRng rng(seed, static_cast<std::uint64_t>(rep));
    law.fill(rng, draws);
    batch.values.push_back(tn_value(draws));
  }
  return batch;
}

void sample_Tn(const SymmetricLaw& law, int n, long replications, std::uint64_t seed,
               const std::function<void(const TnSampleBatch&)>& sink, long batch_size) {
  if (batch_size < 1) throw Error(ErrorKind::domain, "batch size must be >= 1");
  for (long first = 0; first < replications; first += batch_size) {
    auto batch = sample_Tn_batch(law, n, first, std::min(batch_size, replications - first), seed);
    check_tn_bound(batch);
    sink(batch);
  }
}

GaussianTnDensity::GaussianTnDensity(int n) : n_(n), radius_(0.0), log_c_(0.0) {
  if (n < 2) throw Error(ErrorKind::domain, "exact Gaussian T_n density needs n >= 2");
  const double nn = static_cast<double>(n);
  radius_ = std::sqrt(nn);
  log_c_ = std::lgamma(0.5 * nn) - std::lgamma(0.5 * (nn - 1.0)) -
           0.5 * std::log(nn * std::numbers::pi);
}

double GaussianTnDensity::log_density(double t) const noexcept {
  if (!(std::abs(t) < radius_)) return -std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n_);
  return log_c_ + 0.5 * (nn - 3.0) * std::log1p(-t * t / nn);
}

double GaussianTnDensity::operator()(double t) const noexcept {
  if (!(std::abs(t) < radius_)) return 0.0;
  return std::exp(log_density(t));
}

double GaussianTnDensity::cdf(double t) const {
  if (t <= -radius_) return 0.0;
  if (t >= radius_) return 1.0;
  const double nn = static_cast<double>(n_);
  const double stat = t * std::sqrt((nn - 1.0) / ((radius_ - t) * (radius_ + t)));
  const boost::math::students_t dist(nn - 1.0);
  return stat < 0.0 ? boost::math::cdf(dist, stat)
                    : 1.0 - boost::math::cdf(boost::math::complement(dist, stat));
}

GaussianTnDensity gaussian_exact_density(int n) { return GaussianTnDensity(n); }

std::vector<double> make_grid(const GridSpec& spec) {
  if (!(spec.step > 0.0) || !(spec.lower <= spec.upper)) {
    throw Error(ErrorKind::precondition, "grid needs step > 0 and lower <= upper");
  }
  const auto points = static_cast<std::size_t>(std::floor((spec.upper - spec.lower) / spec.step + 1e-9)) + 1;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = spec.lower + static_cast<double>(i) * spec.step;
  return grid;
}

GridSpec default_grid_spec(int n) {
  GridSpec spec;
  if (n < 64) {
    const double reach = std::ceil(std::sqrt(static_cast<double>(n)) + 1.0);
    spec.lower = std::min(spec.lower, -reach);
    spec.upper = std::max(spec.upper, reach);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// EcdfGrid

EcdfGrid::EcdfGrid(std::vector<double> grid) : grid_(std::move(grid)), bins_(grid_.size() + 1, 0) {
  if (grid_.empty()) throw Error(ErrorKind::precondition, "ECDF grid must be non-empty");
  if (!std::is_sorted(grid_.begin(), grid_.end()) ||
      std::adjacent_find(grid_.begin(), grid_.end()) != grid_.end()) {
    throw Error(ErrorKind::precondition, "ECDF grid must be strictly ascending");
  }
  if (grid_.size() >= 2) {
    uniform_lower_ = grid_.front();
    uniform_step_ = (grid_.back() - grid_.front()) / static_cast<double>(grid_.size() - 1);
  }
}

std::size_t EcdfGrid::locate(double value) const noexcept {
  // First index j with grid[j] >= value. The uniform-step guess is corrected
  // against the stored grid, so the answer never depends on rounding.
  const std::size_t size = grid_.size();
  std::size_t j;
  if (uniform_step_ > 0.0) {
    const double guess = std::ceil((value - uniform_lower_) / uniform_step_);
    j = guess <= 0.0 ? 0 : guess >= static_cast<double>(size) ? size : static_cast<std::size_t>(guess);
    while (j > 0 && grid_[j - 1] >= value) --j;
    while (j < size && grid_[j] < value) ++j;
  } else {
    j = static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), value) - grid_.begin());
  }
  return j;
}

void EcdfGrid::update(double value) {
  ++bins_[locate(value)];
  ++total_;
}

void EcdfGrid::update(std::span<const double> values) {
  for (double v : values) update(v);
}

void EcdfGrid::merge(const EcdfGrid& other) {
  if (other.grid_.empty()) return;
  if (grid_.empty()) {
    *this = other;
    return;
  }
  if (grid_ != other.grid_) throw Error(ErrorKind::grid_mismatch, "ECDF grids differ");
  for (std::size_t j = 0; j < bins_.size(); ++j) bins_[j] += other.bins_[j];
  total_ += other.total_;
}

std::vector<std::uint64_t> EcdfGrid::counts() const {
  std::vector<std::uint64_t> out(grid_.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    acc += bins_[i];
    out[i] = acc;
  }
  return out;
}

double EcdfGrid::eval(std::size_t i) const {
  if (total_ == 0) throw Error(ErrorKind::precondition, "ECDF has no observations");
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j <= i; ++j) acc += bins_.at(j);
  return static_cast<double>(acc) / static_cast<double>(total_);
}

std::vector<double> EcdfGrid::values() const {
  if (total_ == 0) throw Error(ErrorKind::precondition, "ECDF has no observations");
  const auto c = counts();
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = static_cast<double>(c[i]) / static_cast<double>(total_);
  }
  return out;
}

EcdfGrid EcdfGrid::from_counts(std::vector<double> grid, std::span<const std::uint64_t> counts,
                               std::uint64_t total) {
  EcdfGrid ecdf(std::move(grid));
  if (counts.size() != ecdf.grid_.size()) {
    throw Error(ErrorKind::arity, "ECDF counts do not match the grid");
  }
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < prev || counts[i] > total) {
      throw Error(ErrorKind::precondition, "ECDF counts must be non-decreasing and <= total");
    }
    ecdf.bins_[i] = counts[i] - prev;
    prev = counts[i];
  }
  ecdf.bins_.back() = total - prev;
  ecdf.total_ = total;
  return ecdf;
}

// ---------------------------------------------------------------------------
// HistogramDensity

HistogramDensity::HistogramDensity(std::vector<double> edges)
    : edges_(std::move(edges)), counts_(edges_.size() < 2 ? 0 : edges_.size() - 1, 0) {
  if (edges_.size() < 2 || !std::is_sorted(edges_.begin(), edges_.end()) ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorKind::precondition, "histogram needs >= 2 strictly ascending edges");
  }
}

HistogramDensity::HistogramDensity(double lower, double upper, int bins)
    : HistogramDensity([&] {
        if (bins < 1 || !(lower < upper)) {
          throw Error(ErrorKind::precondition, "histogram needs bins >= 1 and lower < upper");
        }
        std::vector<double> e(static_cast<std::size_t>(bins) + 1);
        for (int i = 0; i <= bins; ++i) e[i] = lower + (upper - lower) * i / bins;
        return e;
      }()) {}

void HistogramDensity::update(double value) {
  ++total_;
  if (value < edges_.front()) {
    ++below_;
    return;
  }
  if (!(value < edges_.back())) {
    ++above_;
    return;
  }
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  ++counts_[static_cast<std::size_t>(it - edges_.begin()) - 1];
}

void HistogramDensity::update(std::span<const double> values) {
  for (double v : values) update(v);
}

void HistogramDensity::merge(const HistogramDensity& other) {
  if (other.edges_.empty()) return;
  if (edges_.empty()) {
    *this = other;
    return;
  }
  if (edges_ != other.edges_) throw Error(ErrorKind::grid_mismatch, "histogram edges differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  below_ += other.below_;
  above_ += other.above_;
  total_ += other.total_;
}

double HistogramDensity::mass(std::size_t bin) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(counts_.at(bin)) / static_cast<double>(total_);
}

double HistogramDensity::outside_mass() const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(below_ + above_) / static_cast<double>(total_);
}

double HistogramDensity::density_eval(double x) const {
  if (edges_.empty() || x < edges_.front() || !(x < edges_.back())) return 0.0;
  const auto bin =
      static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin()) - 1;
  return mass(bin) / (edges_[bin + 1] - edges_[bin]);
}

HistogramDensity HistogramDensity::from_counts(std::vector<double> edges,
                                               std::vector<std::uint64_t> counts,
                                               std::uint64_t below, std::uint64_t above) {
  HistogramDensity h(std::move(edges));
  if (counts.size() != h.counts_.size()) {
    throw Error(ErrorKind::arity, "histogram counts do not match the edges");
  }
  h.counts_ = std::move(counts);
  h.below_ = below;
  h.above_ = above;
  h.total_ = below + above;
  for (auto c : h.counts_) h.total_ += c;
  return h;
}

int default_histogram_bins(long replications) {
  const double bins = std::ceil(2.0 * std::cbrt(static_cast<double>(replications)));
  return static_cast<int>(std::clamp(bins, 1.0, 400.0));
}

// ---------------------------------------------------------------------------
// Simulation driver

void extend_simulation(const SymmetricLaw& law, SimulationState& state, long target_replications,
                       int threads) {
  if (target_replications < state.replications) {
    throw Error(ErrorKind::precondition, "cannot shrink a simulation");
  }
  const long start = state.replications;
  const long todo = target_replications - start;
  if (todo == 0) return;

  struct ChunkResult {
    MomentAccumulator moments;
    double max_abs = 0.0;
  };
  std::vector<ChunkResult> per_chunk(chunk_count(todo));
  std::mutex merge_mutex;
  EcdfGrid ecdf_total(state.ecdf.grid());
  HistogramDensity hist_total(state.histogram.edges());

  for_each_chunk(todo, threads, [&](const Chunk& chunk) {
    auto batch = sample_Tn_batch(law, state.n, start + chunk.begin, chunk.end - chunk.begin,
                                 state.seed);
    check_tn_bound(batch);
    EcdfGrid ecdf(state.ecdf.grid());
    HistogramDensity hist(state.histogram.edges());
    ChunkResult result;
    for (double v : batch.values) {
      ecdf.update(v);
      hist.update(v);
      result.moments.add(v);
      result.max_abs = std::max(result.max_abs, std::abs(v));
    }
    per_chunk[chunk.index] = result;
    std::lock_guard lock(merge_mutex);
    ecdf_total.merge(ecdf);
    hist_total.merge(hist);
  });

  state.ecdf.merge(ecdf_total);
  state.histogram.merge(hist_total);
  for (const auto& r : per_chunk) {
    state.moments.merge(r.moments);
    state.max_abs = std::max(state.max_abs, r.max_abs);
  }
  state.replications = target_replications;
}

SimulationState run_simulation(const SymmetricLaw& law, const SimulationConfig& config) {
  if (config.n < 1) throw Error(ErrorKind::domain, "n must be >= 1");
  if (config.replications < 1) throw Error(ErrorKind::domain, "replications must be >= 1");
  const int bins =
      config.hist_bins > 0 ? config.hist_bins : default_histogram_bins(config.replications);
  SimulationState state{law.id(),
                        config.n,
                        config.seed,
                        0,
                        EcdfGrid(make_grid(config.grid)),
                        HistogramDensity(config.hist_lower, config.hist_upper, bins),
                        {},
                        0.0};
  extend_simulation(law, state, config.replications, config.threads);
  return state;
}

std::string snapshot_to_json(const SimulationState& state) {
  nlohmann::json j;
  j["format"] = "selfnorm-simulation";
  j["version"] = kSnapshotVersion;
  j["law"] = state.law_id;
  j["n"] = state.n;
  j["seed"] = state.seed;
  j["replications"] = state.replications;
  j["ecdf"] = {{"grid", state.ecdf.grid()},
               {"counts", state.ecdf.counts()},
               {"total", state.ecdf.total()}};
  j["histogram"] = {{"edges", state.histogram.edges()},
                    {"counts", state.histogram.counts()},
                    {"below", state.histogram.below()},
                    {"above", state.histogram.above()}};
  j["moments"] = {{"count", state.moments.count},
                  {"mean", state.moments.mean},
                  {"m2", state.moments.m2}};
  j["max_abs"] = state.max_abs;
  return j.dump();
}

SimulationState snapshot_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::usage, std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != "selfnorm-simulation") {
    throw Error(ErrorKind::usage, "not a selfnorm simulation snapshot");
  }
  if (j.value("version", 0) != kSnapshotVersion) {
    throw Error(ErrorKind::usage, "unsupported snapshot version");
  }
  try {
    SimulationState s;
    s.law_id = j.at("law").get<std::string>();
    s.n = j.at("n").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.replications = j.at("replications").get<long>();
    const auto& e = j.at("ecdf");
    s.ecdf = EcdfGrid::from_counts(e.at("grid").get<std::vector<double>>(),
                                   e.at("counts").get<std::vector<std::uint64_t>>(),
                                   e.at("total").get<std::uint64_t>());
    const auto& h = j.at("histogram");
    s.histogram = HistogramDensity::from_counts(h.at("edges").get<std::vector<double>>(),
                                                h.at("counts").get<std::vector<std::uint64_t>>(),
                                                h.at("below").get<std::uint64_t>(),
                                                h.at("above").get<std::uint64_t>());
    const auto& m = j.at("moments");
    s.moments.count = m.at("count").get<std::uint64_t>();
    s.moments.mean = m.at("mean").get<double>();
    s.moments.m2 = m.at("m2").get<double>();
    s.max_abs = j.at("max_abs").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::usage, std::string("malformed snapshot: ") + e.what());
  }
}

}  // namespace selfnorm
