#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

#include "internal.hpp"
#include "selfnorm/error.hpp"

namespace selfnorm::cli {

void register_options(CLI::App& app, RunConfig& cfg) {
  cfg.threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  app.set_config("--config", "", "Flat key = value file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  app.add_option("--law", cfg.law, "Source law: gaussian, uniform, laplace, gauss_mix, custom")
      ->capture_default_str();
  app.add_option("--moments", cfg.moments, "Custom law even moments mu_4,mu_6,...")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--m", cfg.m, "Expansion order in 2..6")->capture_default_str();
  app.add_option("--n", cfg.n, "Sample size")->capture_default_str();
  app.add_option("--ns", cfg.ns, "Comma-separated sample sizes")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->capture_default_str();
  app.add_option("--reps", cfg.replications, "Monte Carlo replications")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker thread cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--metric", cfg.metric, "cdf-sup, density-sup, tv or entropy")
      ->check(CLI::IsMember({"cdf-sup", "density-sup", "tv", "entropy"}))
      ->capture_default_str();
  app.add_flag("--oracle", cfg.oracle, "Use the exact density for gaussian inputs");
  app.add_option("--grid-lower", cfg.grid_lower, "Grid lower end");
  app.add_option("--grid-upper", cfg.grid_upper, "Grid upper end");
  app.add_option("--grid-step", cfg.grid_step, "Grid step")->capture_default_str();
  app.add_option("--hist-bins", cfg.hist_bins, "Histogram bins (0: automatic)")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default: standard output)");
  app.add_option("--output-dir", cfg.output_dir, "Directory for output files")
      ->envname(kOutputDirEnv);
  app.add_option("--svg", cfg.svg, "rates: write a log-log plot here");
  app.add_option("--snapshot-out", cfg.snapshot_out, "simulate: write a JSON snapshot here");
  app.add_option("--resume", cfg.resume, "simulate: continue from a JSON snapshot");
  app.add_option("--lmax", cfg.lmax, "entropy-coeffs: highest coefficient index")
      ->capture_default_str();
  app.add_option("--term", cfg.terms, "lambda: lambda4, lambda6, lambda4_sq")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->capture_default_str();
}

void validate(const RunConfig& cfg) {
  const auto usage = [](const std::string& what) { throw Error(ErrorKind::usage, what); };
  if (cfg.m < kMinExpansionOrder || cfg.m > kMaxExpansionOrder) {
    usage("m must be in 2..6, got " + std::to_string(cfg.m));
  }
  if (cfg.n < 2) usage("n must be at least 2");
  if (cfg.command == "rates" || cfg.command == "lambda") {
    if (cfg.ns.empty()) usage("the n list is empty");
    std::set<int> seen;
    for (int n : cfg.ns) {
      if (n < 2) usage("n values must be at least 2");
      if (!seen.insert(n).second) usage("n values must be distinct");
    }
  }
  if (cfg.command == "rates" && cfg.ns.size() < 3) usage("rates needs at least 3 n values");
  const bool monte_carlo = cfg.command == "simulate" || cfg.command == "lambda" ||
                           (cfg.command == "rates" && !cfg.oracle);
  if (monte_carlo && cfg.replications < 1000) usage("replications must be at least 1000");
  if (!(cfg.grid_step > 0.0)) usage("grid step must be positive");
  if (cfg.hist_bins < 0) usage("histogram bins must be non-negative");
  if (cfg.lmax < 1 || cfg.lmax > 3) usage("lmax must be in 1..3");
  if (cfg.terms.empty()) usage("no lambda terms selected");
  if (cfg.law != "custom" && !cfg.moments.empty()) {
    usage("moments are only accepted with law = custom");
  }
}

SymmetricLaw resolve_law(const RunConfig& cfg) {
  if (cfg.law == "custom") {
    if (cfg.moments.empty()) throw Error(ErrorKind::usage, "law custom needs moments = mu4,mu6,...");
    return SymmetricLaw::custom("custom", cfg.moments);
  }
  try {
    return find_law(cfg.law);
  } catch (const Error& e) {
    throw Error(ErrorKind::usage, std::string(e.what()) + ", custom");
  }
}

ExpansionMoments expansion_moments(const SymmetricLaw& law) {
  ExpansionMoments mom{law.moment(4), std::nullopt};
  if (law.highest_known_moment() >= 6) mom.mu6 = law.moment(6);
  return mom;
}

std::filesystem::path resolve_output(const RunConfig& cfg, const std::string& given,
                                     const std::string& fallback) {
  namespace fs = std::filesystem;
  if (given == "-") return {};
  if (!given.empty()) {
    fs::path p(given);
    if (p.is_relative() && !cfg.output_dir.empty()) p = fs::path(cfg.output_dir) / p;
    return p;
  }
  if (!cfg.output_dir.empty() && !fallback.empty()) return fs::path(cfg.output_dir) / fallback;
  return {};
}

OutputSink::OutputSink(const std::filesystem::path& path, std::ostream& fallback)
    : path_(path), fallback_(fallback) {
  if (path.empty()) return;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  // Binary mode keeps LF line endings on every platform.
  file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file_) throw Error(ErrorKind::usage, "cannot open " + path.string() + " for writing");
}

void OutputSink::close() {
  if (file_) {
    file_->close();
    if (!*file_) throw Error(ErrorKind::usage, "failed writing " + path_.string());
  } else {
    fallback_.flush();
  }
}

}  // namespace selfnorm::cli
