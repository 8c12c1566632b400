#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfnorm/distributions.hpp"
#include "selfnorm/expansion.hpp"
#include "selfnorm/metrics.hpp"

namespace CLI {
class App;
}

namespace selfnorm::cli {

inline constexpr const char* kOutputDirEnv = "SELFNORM_OUTPUT_DIR";

/// Every option of every subcommand; unused fields are ignored. The same
/// keys are accepted in the flat config file.
struct RunConfig {
  std::string command;
  std::string law = "gaussian";
  std::vector<double> moments;  // custom law: mu_4, mu_6, ...
  int m = 4;
  int n = 64;
  std::vector<int> ns{16, 32, 64, 128, 256};
  long replications = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string metric = "density-sup";
  bool oracle = false;
  std::optional<double> grid_lower;
  std::optional<double> grid_upper;
  double grid_step = 0.01;
  int hist_bins = 0;
  std::string out;
  std::string output_dir;
  std::string svg;
  std::string snapshot_out;
  std::string resume;
  int lmax = 2;
  std::vector<std::string> terms{"lambda4", "lambda6", "lambda4_sq"};
};

// config.cpp
void register_options(CLI::App& app, RunConfig& cfg);
void validate(const RunConfig& cfg);

/// Law selected by the config: a catalog law, or a moment-only law when the
/// id is "custom".
SymmetricLaw resolve_law(const RunConfig& cfg);
ExpansionMoments expansion_moments(const SymmetricLaw& law);

/// Path for an output: an explicit path (relative ones land in the output
/// directory when one is set), else <output dir>/<fallback> when a directory
/// is set, else empty (standard output).
std::filesystem::path resolve_output(const RunConfig& cfg, const std::string& given,
                                     const std::string& fallback);

/// Writes to the resolved file, or to `fallback` when the path is empty.
class OutputSink {
 public:
  OutputSink(const std::filesystem::path& path, std::ostream& fallback);
  std::ostream& stream() { return file_ ? *file_ : fallback_; }
  void close();

 private:
  std::filesystem::path path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream& fallback_;
};

// csv.cpp
/// Shortest round-trip form, at most 17 significant digits.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
};

// svg.cpp
std::string rate_plot_svg(const RateReport& report, const std::string& title);

// commands.cpp
int cmd_expand(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_rates(const RunConfig& cfg, std::ostream& out);
int cmd_entropy(const RunConfig& cfg, std::ostream& out);
int cmd_lambda(const RunConfig& cfg, std::ostream& out);

// check.cpp
int cmd_check(const RunConfig& cfg, std::ostream& out);

}  // namespace selfnorm::cli
