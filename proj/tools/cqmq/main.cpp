#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cqmq: half-form quantum operators on curved configuration spaces"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  for (const char* name : {"curvature", "verify", "spectrum"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "job pool size (0: hardware concurrency)");
  }
  app.get_subcommand("curvature")->description("metric, Christoffel symbols and scalar curvature at sample points");
  app.get_subcommand("verify")->description("run the residual checks and write one report per check");
  app.get_subcommand("spectrum")->description("low spectrum of the energy operator and its k dependence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cqmq::cli::kConfigError;
  }

  auto* sub = app.get_subcommands().front();
  cqmq::cli::CommandContext ctx;
  ctx.config_path = config;
  ctx.out_dir = out;
  if (sub->count("--seed")) ctx.seed = seed;
  ctx.threads = threads;
  return cqmq::cli::run_command(sub->get_name(), ctx);
}
