#include <iostream>

#include <CLI11.hpp>

#include "goe_transit/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = goe_transit::cli;
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << cli::usage();
    return 2;
  }
  try {
    const cli::RunConfig cfg = cli::parse_config(args);
    const cli::ExecutionReport report = cli::execute(cfg);
    for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
    for (const auto& failure : report.check_failures) std::cerr << "check: " << failure << '\n';
    if (cfg.check) std::cout << (report.exit_status == 0 ? "check passed" : "check FAILED") << '\n';
    return report.exit_status;
  } catch (const CLI::CallForHelp&) {
    std::cout << cli::usage();
    return 0;
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << cli::usage();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
