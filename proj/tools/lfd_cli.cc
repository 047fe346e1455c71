// Command-line front end: lfd <demos|learn|certify|simulate|track|all> --config run.json --out DIR

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lfd/errors.h"
#include "lfd/io.h"
#include "lfd/pipeline.h"

int main(int argc, char** argv) {
  CLI::App app{"Learn stabilizing controllers from demonstrations"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 1;
  bool force = false;

  const char* commands[][2] = {
      {"demos", "record expert demonstrations and validate them"},
      {"learn", "build the learned controller and its certificate"},
      {"certify", "recompute the monodromy certificate of a stored controller"},
      {"simulate", "closed-loop simulation with the learned controller"},
      {"track", "reference tracking with the learned controller"},
      {"all", "demos, learn, simulate and (if configured) track"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads for independent simulations")->check(CLI::PositiveNumber);
    sub->add_flag("--force", force, "run simulations even if the certificate fails");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? lfd::kExitOk : lfd::kExitUsage;
  }

  lfd::RunConfig config;
  try {
    config = lfd::RunConfig::from_json(lfd::read_json(config_path));
  } catch (const lfd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return lfd::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return lfd::run_command(command, config, out_dir, jobs, force, std::cout);
}
