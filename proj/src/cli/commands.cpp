#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "internal.hpp"
#include "selfnorm/cli.hpp"
#include "selfnorm/entropy_coeffs.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/lambda_moments.hpp"
#include "selfnorm/simulate.hpp"
#include "selfnorm/special_math.hpp"

namespace selfnorm::cli {

namespace {

using F = std::string (*)(double);
constexpr F num = format_number;

GridSpec grid_for(const RunConfig& cfg, int n) {
  GridSpec spec = default_grid_spec(n);
  if (cfg.grid_lower) spec.lower = *cfg.grid_lower;
  if (cfg.grid_upper) spec.upper = *cfg.grid_upper;
  spec.step = cfg.grid_step;
  if (!(spec.lower < spec.upper)) throw Error(ErrorKind::usage, "grid lower must be below upper");
  return spec;
}

std::string describe(const SymmetricLaw& law) {
  std::string s = "law=" + law.id();
  for (int k = 4; k <= law.highest_known_moment(); k += 2) {
    s += " mu" + std::to_string(k) + "=" + num(law.moment(k));
  }
  return s;
}

void require_sampler(const SymmetricLaw& law) {
  if (!law.can_sample()) {
    throw Error(ErrorKind::usage, "law " + law.id() + " has no sampler; pick a catalog law");
  }
}

struct MetricValue {
  double value = 0.0;
  double stderr_ = 0.0;
};

// Index of the largest weighted |difference|.
std::size_t weighted_argmax(std::span<const double> diffs, int m, std::span<const double> grid) {
  std::size_t best = 0;
  double top = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = std::pow(1.0 + std::abs(grid[i]), m) * std::abs(diffs[i]);
    if (v > top) top = v, best = i;
  }
  return best;
}

MetricValue oracle_metric(const RunConfig& cfg, const SymmetricLaw& law, int n) {
  const auto mom = expansion_moments(law);
  const auto exact = gaussian_exact_density(n);
  const double r = exact.support_radius();
  if (cfg.metric == "cdf-sup") {
    const auto approx = edgeworth_cdf(cfg.m, n, mom);
    return {weighted_sup_error([&](double x) { return approx(x); },
                               [&](double x) { return exact.cdf(x); }, cfg.m,
                               make_grid(grid_for(cfg, n)))};
  }
  if (cfg.metric == "density-sup") {
    const auto approx = edgeworth_pdf(cfg.m, n, mom);
    return {weighted_sup_error([&](double x) { return approx(x); },
                               [&](double x) { return exact(x); }, cfg.m,
                               make_grid(grid_for(cfg, n)))};
  }
  if (cfg.metric == "tv") {
    const auto approx = edgeworth_pdf(cfg.m, n, mom);
    const std::vector<double> cuts{-r, r};
    const double lo = std::min(-12.0, -r - 1.0);
    return {l1_distance([&](double x) { return approx(x); }, [&](double x) { return exact(x); },
                        {lo, -lo}, cuts, 1e-12)};
  }
  return {relative_entropy_from_log([&](double x) { return exact.log_density(x); }, {-r, r}, {},
                                    1e-13)};
}

MetricValue mc_metric(const RunConfig& cfg, const SymmetricLaw& law, int n) {
  const auto mom = expansion_moments(law);
  SimulationConfig sc;
  sc.n = n;
  sc.replications = cfg.replications;
  sc.seed = cfg.seed;
  sc.threads = cfg.threads;
  sc.grid = grid_for(cfg, n);
  sc.hist_bins = cfg.hist_bins;
  const auto state = run_simulation(law, sc);
  const double reps = static_cast<double>(state.replications);

  if (cfg.metric == "cdf-sup") {
    const auto approx = edgeworth_cdf(cfg.m, n, mom);
    const auto& grid = state.ecdf.grid();
    std::vector<double> diffs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) diffs[i] = state.ecdf.eval(i) - approx(grid[i]);
    const std::size_t k = weighted_argmax(diffs, cfg.m, grid);
    const double p = state.ecdf.eval(k);
    return {weighted_sup_error(diffs, cfg.m, grid),
            std::pow(1.0 + std::abs(grid[k]), cfg.m) * std::sqrt(p * (1.0 - p) / reps)};
  }
  // density-sup against the histogram at bin centers.
  const auto approx = edgeworth_pdf(cfg.m, n, mom);
  const auto& h = state.histogram;
  const auto& edges = h.edges();
  std::vector<double> centers(h.bin_count()), diffs(h.bin_count());
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    centers[i] = 0.5 * (edges[i] + edges[i + 1]);
    diffs[i] = h.mass(i) / (edges[i + 1] - edges[i]) - approx(centers[i]);
  }
  const std::size_t k = weighted_argmax(diffs, cfg.m, centers);
  const double p = h.mass(k);
  const double width = edges[k + 1] - edges[k];
  return {weighted_sup_error(diffs, cfg.m, centers),
          std::pow(1.0 + std::abs(centers[k]), cfg.m) * std::sqrt(p * (1.0 - p) / reps) / width};
}

}  // namespace

int cmd_expand(const RunConfig& cfg, std::ostream& out) {
  const auto law = resolve_law(cfg);
  const auto mom = expansion_moments(law);
  const auto cdf = edgeworth_cdf(cfg.m, cfg.n, mom);
  const auto pdf = edgeworth_pdf(cfg.m, cfg.n, mom);
  const auto grid = make_grid(grid_for(cfg, cfg.n));

  OutputSink sink(resolve_output(cfg, cfg.out, "expand.csv"), out);
  CsvWriter csv(sink.stream());
  csv.comment("expand m=" + std::to_string(cfg.m) + " n=" + std::to_string(cfg.n) + " " +
              describe(law));
  csv.header({"x", "cdf_approx", "pdf_approx", "Phi", "phi"});
  for (double x : grid) {
    csv.row({num(x), num(cdf(x)), num(pdf(x)), num(normal_cdf(x)), num(normal_pdf(x))});
  }
  sink.close();
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  SimulationState state;
  if (!cfg.resume.empty()) {
    std::ifstream in(cfg.resume, std::ios::binary);
    if (!in) throw Error(ErrorKind::usage, "cannot read snapshot " + cfg.resume);
    const std::string text{std::istreambuf_iterator<char>(in), {}};
    state = snapshot_from_json(text);
    const auto& law = find_law(state.law_id);
    if (cfg.replications < state.replications) {
      throw Error(ErrorKind::usage, "replications below the snapshot's " +
                                        std::to_string(state.replications));
    }
    extend_simulation(law, state, cfg.replications, cfg.threads);
  } else {
    const auto law = resolve_law(cfg);
    require_sampler(law);
    SimulationConfig sc;
    sc.n = cfg.n;
    sc.replications = cfg.replications;
    sc.seed = cfg.seed;
    sc.threads = cfg.threads;
    sc.grid = grid_for(cfg, cfg.n);
    sc.hist_bins = cfg.hist_bins;
    state = run_simulation(law, sc);
  }

  if (!cfg.snapshot_out.empty()) {
    OutputSink snap(resolve_output(cfg, cfg.snapshot_out, ""), out);
    snap.stream() << snapshot_to_json(state) << '\n';
    snap.close();
  }

  OutputSink sink(resolve_output(cfg, cfg.out, "simulate.csv"), out);
  CsvWriter csv(sink.stream());
  const double reps = static_cast<double>(state.replications);
  csv.comment("simulate law=" + state.law_id + " n=" + std::to_string(state.n) +
              " seed=" + std::to_string(state.seed) +
              " replications=" + std::to_string(state.replications) +
              " mean=" + num(state.moments.mean) + " variance=" + num(state.moments.variance()) +
              " max_abs=" + num(state.max_abs) +
              " hist_outside_mass=" + num(state.histogram.outside_mass()));
  csv.header({"x", "ecdf", "ecdf_se", "hist_density"});
  const auto& grid = state.ecdf.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = state.ecdf.eval(i);
    csv.row({num(grid[i]), num(p), num(std::sqrt(p * (1.0 - p) / reps)),
             num(state.histogram.density_eval(grid[i]))});
  }
  sink.close();
  return kExitOk;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
  const auto law = resolve_law(cfg);
  const bool needs_oracle = cfg.metric == "tv" || cfg.metric == "entropy";
  if (needs_oracle && !cfg.oracle) {
    throw Error(ErrorKind::usage, "metric " + cfg.metric + " needs --oracle");
  }
  if (cfg.oracle && law.kind() != LawKind::gaussian) {
    throw Error(ErrorKind::usage, "the exact oracle exists for the gaussian law only");
  }
  if (!cfg.oracle) require_sampler(law);

  std::vector<std::pair<double, double>> pairs;
  std::vector<MetricValue> values;
  for (int n : cfg.ns) {
    const auto v = cfg.oracle ? oracle_metric(cfg, law, n) : mc_metric(cfg, law, n);
    values.push_back(v);
    pairs.emplace_back(n, v.value);
  }
  const auto fit = rate_fit(pairs);

  OutputSink sink(resolve_output(cfg, cfg.out, "rates.csv"), out);
  CsvWriter csv(sink.stream());
  std::string reference = cfg.oracle ? "exact density" : "monte carlo";
  if (!cfg.oracle) reference += cfg.metric == "cdf-sup" ? " ecdf" : " histogram";
  csv.comment("rates metric=" + cfg.metric + " m=" + std::to_string(cfg.m) + " " + describe(law) +
              " reference=" + reference +
              (cfg.oracle ? "" : " replications=" + std::to_string(cfg.replications) +
                                     " seed=" + std::to_string(cfg.seed)));
  if (cfg.metric == "tv") {
    csv.comment("tv is the L1 distance of densities, equal to TV under ||F-G||_TV = ||f-g||_1");
  }
  if (cfg.metric == "entropy") csv.comment("entropy is D(T_n || N(0,1)); m does not enter");
  csv.comment("fit slope=" + num(fit.slope) + " intercept=" + num(fit.intercept) +
              " r_squared=" + num(fit.r_squared) + " slope_stderr=" + num(fit.slope_stderr));
  csv.header({"n", "metric", "m", "law", "value", "stderr"});
  const std::string m = std::to_string(cfg.m);
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    csv.row({std::to_string(cfg.ns[i]), cfg.metric, m, law.id(), num(values[i].value),
             num(values[i].stderr_)});
  }
  csv.row({"fit", cfg.metric, m, law.id(), num(fit.slope), num(fit.slope_stderr)});
  sink.close();

  if (!cfg.svg.empty()) {
    OutputSink svg(resolve_output(cfg, cfg.svg, ""), out);
    svg.stream() << rate_plot_svg(fit, cfg.metric + " error, " + law.id() + ", m=" + m);
    svg.close();
  }
  return kExitOk;
}

int cmd_entropy(const RunConfig& cfg, std::ostream& out) {
  const auto law = resolve_law(cfg);
  const auto mom = expansion_moments(law);
  const auto coeffs = entropy_coefficients(mom, cfg.lmax);

  nlohmann::ordered_json doc;
  doc["law"] = law.id();
  doc["mu4"] = mom.mu4;
  if (mom.mu6) doc["mu6"] = *mom.mu6;
  nlohmann::ordered_json partial = nlohmann::ordered_json::object();
  for (const auto& [l, c] : coeffs) {
    doc["c" + std::to_string(l)] = c.value;
    partial["c" + std::to_string(l)] = c.partial;
  }
  doc["partial"] = partial;

  OutputSink sink(resolve_output(cfg, cfg.out, "entropy-coeffs.json"), out);
  sink.stream() << doc.dump(2) << '\n';
  sink.close();
  return kExitOk;
}

int cmd_lambda(const RunConfig& cfg, std::ostream& out) {
  const auto law = resolve_law(cfg);
  require_sampler(law);
  std::vector<LambdaTerm> terms;
  for (const auto& t : cfg.terms) terms.push_back(lambda_term_from_string(t));

  OutputSink sink(resolve_output(cfg, cfg.out, "lambda.csv"), out);
  CsvWriter csv(sink.stream());
  // Size n draws from seed + n so rows are independent and can be fitted jointly.
  csv.comment("lambda " + describe(law) + " replications=" + std::to_string(cfg.replications) +
              " seed=" + std::to_string(cfg.seed) + " (seed + n per row)");
  csv.header({"n", "term", "estimate", "se", "closed_form"});
  for (int n : cfg.ns) {
    for (auto term : terms) {
      const auto est = mc_lambda_mean(law, n, term, cfg.replications,
                                      cfg.seed + std::uint64_t(n), cfg.threads);
      const double closed =
          expected_lambda_term(term, law.moment(4), law.moment(6), law.moment(8)).evaluate(n);
      csv.row({std::to_string(n), to_string(term), num(est.estimate), num(est.standard_error),
               num(closed)});
    }
  }
  sink.close();
  return kExitOk;
}

}  // namespace selfnorm::cli
