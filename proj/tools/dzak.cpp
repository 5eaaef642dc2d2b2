#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dzak/config.hpp"
#include "dzak/error.hpp"
#include "dzak/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"degenerate Zakharov toolkit"};
  app.set_version_flag("--version", dzak::tool_version());
  std::string command, config_path, out_dir = ".";
  std::uint64_t seed = 0;
  app.add_option("command", command, "simulate | verify-linear | verify-bilinear | counterexample | norms | picard")
      ->required();
  app.add_option("--config", config_path, "line-oriented key = value file")->required();
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "base seed, overrides [run] seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 10;
  }

  try {
    const dzak::Command cmd = dzak::parse_command(command);
    std::ifstream f(config_path, std::ios::binary);
    if (!f) dzak::fail(dzak::ErrorDomain::Config, dzak::config_errc::io, "cannot read " + config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    dzak::RunConfig cfg = dzak::parse_config(ss.str(), cmd);
    cfg.out_dir = out_dir;
    if (*seed_opt) cfg.run["seed"] = seed;

    const dzak::RunOutcome r = dzak::run(cfg);
    for (const auto& c : r.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (" << c.bound << ")\n";
    if (!r.error.empty()) std::cerr << "error: " << r.error << "\n";
    std::cout << "exit " << r.exit_code << ", " << r.artifacts.size() << " artifacts in " << out_dir << "\n";
    return r.exit_code;
  } catch (const dzak::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}
