#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hompol/hompol.hpp"

namespace {

enum Exit : int { ok = 0, failure = 1, bad_config = 2, io_failure = 3 };

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference in lossy birefringent waveguides"};

  std::string command;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format;

  app.add_option("command", command,
                 "lattice-decay | hom-trace | visibility-scan | polarizer-synth | polarizer-fit | predict | "
                 "reproduce | show-config")
      ->required();
  app.add_option("--config", config_path, "key = value config file (defaults: fabricated device)");
  app.add_option("--out", out_dir, "output directory (overrides run.out)");
  app.add_option("--seed", seed, "random seed for synthetic-noise workflows (overrides run.seed)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  hompol::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = hompol::load_config(config_path);
  } catch (const hompol::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config error: " << d << "\n";
    return bad_config;
  }
  if (seed) cfg.seed = *seed;
  if (!out_dir.empty()) cfg.out = out_dir;

  if (command == "show-config") {
    std::cout << hompol::serialize_config(cfg);
    return ok;
  }

  const auto sub = hompol::parse_subcommand(command);
  if (!sub) {
    std::cerr << "unknown command '" << command << "'\n";
    return failure;
  }
  std::optional<hompol::OutputFormat> fmt;
  if (format == "csv") fmt = hompol::OutputFormat::csv;
  if (format == "json") fmt = hompol::OutputFormat::json;

  try {
    for (const auto& p : hompol::run(*sub, cfg, cfg.out, fmt)) std::cout << p.string() << "\n";
  } catch (const hompol::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return io_failure;
  } catch (const hompol::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return ok;
}
