#include <CLI11.hpp>

#include <ostream>

#include "internal.hpp"
#include "selfnorm/cli.hpp"
#include "selfnorm/error.hpp"

namespace selfnorm::cli {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invariant_violation:
    case ErrorKind::non_convergence:
    case ErrorKind::fit:
      return kExitInvariant;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edgeworth expansions and rate checks for self-normalized sums", "selfnorm"};
  RunConfig cfg;
  register_options(app, cfg);
  app.fallthrough();
  app.require_subcommand(1);
  const std::pair<const char*, const char*> commands[] = {
      {"expand", "Tabulate the expansion and the normal reference on a grid"},
      {"simulate", "Monte Carlo ECDF and histogram of T_n"},
      {"rates", "Error metric per n and the fitted log-log slope"},
      {"entropy-coeffs", "Entropy expansion coefficients as JSON"},
      {"lambda", "Monte Carlo means of the lambda terms against closed forms"},
      {"check", "Run the invariant suite"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&cfg, n = std::string(name)] { cfg.command = n; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    validate(cfg);
    if (cfg.command == "expand") return cmd_expand(cfg, out);
    if (cfg.command == "simulate") return cmd_simulate(cfg, out);
    if (cfg.command == "rates") return cmd_rates(cfg, out);
    if (cfg.command == "entropy-coeffs") return cmd_entropy(cfg, out);
    if (cfg.command == "lambda") return cmd_lambda(cfg, out);
    return cmd_check(cfg, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace selfnorm::cli
