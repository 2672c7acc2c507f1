// netiss: simulate networks of discrete-time subsystems and check stability certificates.
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "netiss/cli.hpp"
#include "netiss/io.hpp"

namespace {

std::vector<netiss::Index> parse_sizes(const std::string& csv) {
  std::vector<netiss::Index> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size() || v < 1) throw std::invalid_argument("--sizes: '" + tok + "' is not a positive integer");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--sizes: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and certificate checks for networks of discrete-time subsystems"};
  app.require_subcommand(1);

  std::string config, out, sizes, builtin, network;
  std::uint64_t seed = 0;
  long horizon = 0;
  double tolerance = 0.0;
  bool serial = false;

  const std::map<std::string, std::string> about = {
      {"simulate", "simulate the observed indices and write trajectories.csv"},
      {"certify", "check a stored certificate on sampled grids"},
      {"wellposed", "growth-bound check and uniformity profile"},
      {"truncate", "truncated networks and their consistency with the full one"},
      {"traffic-demo", "traffic scaling experiment over several sizes"}};
  for (const auto& name : netiss::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed for every random draw");
    sub->add_option("--sizes", sizes, "comma-separated truncation sizes");
    sub->add_option("--horizon", horizon, "number of steps K");
    sub->add_option("--tolerance", tolerance, "absolute and relative residual tolerance");
    sub->add_option("--builtin", builtin, "built-in network name");
    sub->add_option("--network", network, "network JSON file")->check(CLI::ExistingFile);
    sub->add_flag("--serial", serial, "use the serial reference kernels");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    netiss::FlagOverrides f;
    if (sub->count("--config")) f.config = config;
    if (sub->count("--out")) f.out = out;
    if (sub->count("--seed")) f.seed = seed;
    if (sub->count("--sizes")) f.sizes = parse_sizes(sizes);
    if (sub->count("--horizon")) f.horizon = horizon;
    if (sub->count("--tolerance")) f.tolerance = tolerance;
    if (sub->count("--builtin")) f.builtin = builtin;
    if (sub->count("--network")) f.network = network;
    if (serial) f.serial = true;

    const auto cfg = netiss::parse_config(sub->get_name(), f);
    return netiss::run(cfg, std::cout).exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
