#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "selfnorm/cli.hpp"

using selfnorm::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> r;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) r.push_back(line);
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> r;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) r.push_back(f);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("selfnorm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  auto r = call({"expand", "--law", "cauchy"});
  CHECK(r.code == 2);
  CHECK(r.err.find("gaussian") != std::string::npos);
  CHECK(r.err.find("laplace") != std::string::npos);
  CHECK(call({"expand", "--m", "7"}).code == 2);
  CHECK(call({"expand", "--m", "1"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"expand", "--bogus"}).code == 2);
  CHECK(call({"rates", "--ns", "16,32", "--oracle"}).code == 2);
  CHECK(call({"rates", "--ns", "16,16,32", "--oracle"}).code == 2);
  CHECK(call({"rates", "--metric", "tv"}).code == 2);
  CHECK(call({"rates", "--metric", "tv", "--oracle", "--law", "uniform"}).code == 2);
  CHECK(call({"rates", "--metric", "lp"}).code == 2);
  CHECK(call({"simulate", "--reps", "999"}).code == 2);
  CHECK(call({"simulate", "--law", "custom", "--moments", "3,15"}).code == 2);
  CHECK(call({"lambda", "--term", "lambda8", "--reps", "1000", "--ns", "8"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("expand output") {
  const auto r = call({"expand", "--law", "gaussian", "--m", "4", "--n", "100"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == "# expand m=4 n=100 law=gaussian mu4=3 mu6=15 mu8=105 mu10=945 mu12=10395");
  CHECK(rows[1] == "x,cdf_approx,pdf_approx,Phi,phi");
  bool found = false;
  for (const auto& row : rows) {
    const auto f = split(row);
    if (f[0] != "1") continue;
    found = true;
    CHECK(std::abs(std::stod(f[1]) - (0.8413447 - 0.00120985)) < 1e-7);
  }
  CHECK(found);

  // m = 2 is the normal law itself.
  const auto two = lines(call({"expand", "--m", "2", "--n", "50"}).out);
  for (std::size_t i = 2; i < two.size(); ++i) {
    const auto f = split(two[i]);
    REQUIRE(f.size() == 5);
    CHECK(f[1] == f[3]);
    CHECK(f[2] == f[4]);
  }

  const auto custom = call({"expand", "--law", "custom", "--moments", "1.8", "--m", "4"});
  CHECK(custom.code == 0);
  CHECK(call({"expand", "--law", "custom", "--moments", "1.8", "--m", "6"}).code == 2);
}

TEST_CASE("numbers carry 17 significant digits") {
  const auto rows = lines(call({"expand", "--m", "4", "--n", "10", "--grid-lower", "0.1",
                                "--grid-upper", "0.2", "--grid-step", "0.1"})
                              .out);
  REQUIRE(rows.size() == 4);
  CHECK(split(rows[2])[0] == "0.10000000000000001");
}

TEST_CASE("simulate is deterministic and thread independent") {
  const std::vector<std::string> base{"simulate", "--law", "gaussian", "--n", "64",
                                      "--reps", "100000", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const auto r1 = call(a), r2 = call(a), r3 = call(b);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out == r3.out);
  CHECK(lines(r1.out)[1] == "x,ecdf,ecdf_se,hist_density");
}

TEST_CASE("simulate resumes from a snapshot") {
  const auto dir = scratch("resume");
  const auto snap = (dir / "state.json").string();
  // Fixed bins: the automatic count depends on the replication total.
  const std::vector<std::string> base{"simulate", "--law", "uniform", "--n", "16", "--seed",
                                      "11", "--hist-bins", "50"};
  auto first_args = base;
  first_args.insert(first_args.end(),
                    {"--reps", "40000", "--snapshot-out", snap, "--out", (dir / "a.csv").string()});
  const auto first = call(first_args);
  REQUIRE(first.code == 0);
  REQUIRE(fs::exists(snap));
  const auto resumed =
      call({"simulate", "--resume", snap, "--reps", "100000", "--threads", "2"});
  auto direct_args = base;
  direct_args.insert(direct_args.end(), {"--reps", "100000"});
  const auto direct = call(direct_args);
  REQUIRE(resumed.code == 0);
  const auto lr = lines(resumed.out), ld = lines(direct.out);
  REQUIRE(lr.size() == ld.size());
  // Counts are exact; only the streamed moments in the comment may differ by rounding.
  for (std::size_t i = 1; i < lr.size(); ++i) CHECK(lr[i] == ld[i]);
  CHECK(call({"simulate", "--resume", snap, "--reps", "1000"}).code == 2);
  CHECK(call({"simulate", "--resume", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch("config");
  const auto file = dir / "run.conf";
  {
    std::ofstream f(file, std::ios::binary);
    f << "# flat key = value\nlaw = uniform\nn = 32\nm = 2\nns = 16,32,64\n";
  }
  const auto r = call({"expand", "--config", file.string(), "--n", "40"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[0].rfind("# expand m=2 n=40 law=uniform", 0) == 0);

  {
    std::ofstream f(file, std::ios::binary);
    f << "law = uniform\nbanana = 3\n";
  }
  CHECK(call({"expand", "--config", file.string()}).code == 2);

  {
    std::ofstream f(file, std::ios::binary);
    f << "law = custom\nmoments = 1.8,3.857142857142857\nm = 6\nn = 30\n";
  }
  const auto c = call({"expand", "--config", file.string()});
  CHECK(c.code == 0);
  CHECK(lines(c.out)[0] == "# expand m=6 n=30 law=custom mu4=1.8 mu6=3.8571428571428572");
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("envdir");
  ::setenv("SELFNORM_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = call({"expand", "--n", "20"});
  const auto named = call({"expand", "--n", "20", "--out", "custom.csv"});
  const auto flag = call({"expand", "--n", "20", "--output-dir", (dir / "sub").string()});
  ::unsetenv("SELFNORM_OUTPUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(fs::exists(dir / "expand.csv"));
  CHECK(fs::exists(dir / "custom.csv"));
  CHECK(fs::exists(dir / "sub" / "expand.csv"));
  CHECK(slurp(dir / "expand.csv") == call({"expand", "--n", "20"}).out);
}

TEST_CASE("entropy coefficients JSON") {
  const auto r = call({"entropy-coeffs", "--law", "laplace", "--lmax", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["c1"].get<double>() == 0.0);
  CHECK(std::abs(j["c2"].get<double>() - 3.0) < 3e-6);
  CHECK(j["partial"]["c1"] == false);
  CHECK(j["partial"]["c2"] == false);
  CHECK(call({"entropy-coeffs", "--lmax", "4"}).code == 2);
}

TEST_CASE("rates with the exact oracle and an svg") {
  const auto dir = scratch("rates");
  const auto r = call({"rates", "--metric", "density-sup", "--oracle", "--m", "4", "--ns",
                       "16,32,64,128,256", "--svg", (dir / "plot.svg").string()});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  auto header = std::find(rows.begin(), rows.end(), "n,metric,m,law,value,stderr");
  REQUIRE(header != rows.end());
  CHECK(rows.end() - header == 7);
  const auto fit = split(rows.back());
  REQUIRE(fit.size() == 6);
  CHECK(fit[0] == "fit");
  CHECK(std::stod(fit[4]) < 0.0);
  const auto svg = slurp(dir / "plot.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);

  const auto mc = call({"rates", "--metric", "cdf-sup", "--law", "uniform", "--m", "4", "--ns",
                        "8,16,32", "--reps", "20000"});
  REQUIRE(mc.code == 0);
  const auto mrows = lines(mc.out);
  const auto row = split(mrows[mrows.size() - 2]);
  CHECK(row[0] == "32");
  CHECK(std::stod(row[5]) > 0.0);
}

TEST_CASE("lambda CSV") {
  const auto r = call({"lambda", "--law", "gaussian", "--ns", "32,64", "--reps", "2000",
                       "--term", "lambda4,lambda4_sq"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1] == "n,term,estimate,se,closed_form");
  const auto f = split(rows[2]);
  CHECK(f[0] == "32");
  CHECK(f[1] == "lambda4");
  // E[lambda_4 / 24] = -1 / (4 (n + 2)) exactly for gaussian inputs.
  CHECK(std::abs(std::stod(f[2]) + 1.0 / (4.0 * 34.0)) < 5.0 * std::stod(f[3]));
}

TEST_CASE("check passes on a correct build") {
  const auto r = call({"check"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  CHECK(rows.size() == 9);
  for (const auto& row : rows) CHECK(row.rfind("PASS ", 0) == 0);
}

TEST_CASE("the installed tool reports exit codes") {
  const std::string tool = SELFNORM_TOOL_PATH;
  const auto status = [&](const std::string& args) {
    const int s = std::system((tool + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("expand --n 10") == 0);
  CHECK(status("expand --law nope") == 2);
  CHECK(status("") == 2);
}
