#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace dspp::cli;
  CLI::App app{"Distribution of the n-th jump of a doubly-stochastic Poisson process"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::int64_t paths = 0;
  std::string routes;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration or suite")->required();
    sub->add_option("--seed", seed, "Monte Carlo seed (overrides the config)");
    sub->add_option("--paths", paths, "Monte Carlo path count (overrides the config)");
    sub->add_option("--routes", routes, "Comma-separated routes: bell,malliavin,monte_carlo");
  };
  auto* survival = app.add_subcommand("survival", "Survival probabilities as CSV");
  add_common(survival);
  auto* validate = app.add_subcommand("validate", "Cross-route validation report");
  add_common(validate);
  auto* bell = app.add_subcommand("bell", "Complete Bell polynomial B_n(x_1..x_n)");
  int bell_n = 0;
  std::string bell_xs;
  bell->add_option("n", bell_n, "Polynomial order")->required();
  bell->add_option("xs", bell_xs, "Comma-separated arguments x_1,...,x_n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (bell->parsed()) return cmd_bell(bell_n, bell_xs, std::cout, std::cerr);

  Overrides overrides;
  CLI::App* active = survival->parsed() ? survival : validate;
  if (active->count("--seed")) overrides.seed = seed;
  if (active->count("--paths")) overrides.paths = paths;
  std::string text;
  try {
    if (active->count("--routes")) overrides.routes = parse_route_list(routes);
    text = read_file(config_path);
  } catch (const dspp::ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  }
  if (survival->parsed()) return cmd_survival(text, overrides, std::cout, std::cerr);
  return cmd_validate(text, overrides, std::cout, std::cerr);
}
