#include <iostream>

#include "CLI11.hpp"
#include "kamlie/commands.hpp"
#include "kamlie/kam_driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reducibility of quasi-periodically forced linear Schroedinger equations on SU(2) and SO(3)"};
  app.require_subcommand(1);
  std::string config;
  for (const char* name : {"reduce", "sieve", "stability", "verify", "bench"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("config", config, "flat key = value configuration file")->required();
  }
  app.footer("Worker count: KAMLIE_WORKERS (default " + std::to_string(kamlie::default_workers()) + ").");
  CLI11_PARSE(app, argc, argv);
  return kamlie::run_command(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
