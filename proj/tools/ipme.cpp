#include <iostream>

#include <CLI11.hpp>

#include "ipme/cli.hpp"
#include "ipme/config.hpp"
#include "ipme/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ipme: infinity-Laplacian porous medium solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON config file")->required();
    sub->add_option("--set", overrides, "override a scalar leaf, dotted.key=value");
  };

  auto* solve = app.add_subcommand("solve", "run a Dirichlet, maximal or Cauchy problem");
  add_config(solve);
  auto* exact = app.add_subcommand("exact", "sample an exact solution to snapshot files");
  add_config(exact);
  auto* asym = app.add_subcommand("asym", "post-process snapshots into traces and fits");
  add_config(asym);

  std::vector<std::string> suites;
  bool inject_fault = false;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suites, "suite name (repeatable)")
      ->check(CLI::IsMember(ipme::suite_names()));
  verify->add_flag("--inject-fault", inject_fault, "flip a stencil sign to check the suites notice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "IPME-E012: " << e.what() << '\n';
    return ipme::kExitError;
  }

  return ipme::guarded(
      [&]() -> int {
        if (*verify) return ipme::cmd_verify(suites, inject_fault, std::cout);
        const auto cfg = ipme::load_config(config_path, overrides);
        if (*solve) return ipme::cmd_solve(cfg, std::cout);
        if (*exact) return ipme::cmd_exact(cfg, std::cout);
        return ipme::cmd_asym(cfg, std::cout);
      },
      std::cerr);
}
