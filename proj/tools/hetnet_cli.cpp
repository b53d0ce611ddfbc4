#include <CLI11.hpp>
#include <string>
#include <vector>

#include "hetnet/config_io.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> presets;
  std::vector<std::string> overrides;
  std::string output_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long replicates = 0;
  bool replicates_set = false;
  int grid_points = 0;
  bool grid_set = false;
  double tol = 0.0;
  bool tol_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "Config file (key = value, [section] headers)");
  cmd->add_option("--preset", a.presets,
                  "Named preset (femto, pico, light, heavy); repeatable");
  cmd->add_option("--set", a.overrides, "Override key=value; repeatable, applied last");
  cmd->add_option("--out", a.output_path, "Output CSV path (default: stdout)");
  cmd->add_option("--seed", a.seed, "Simulation seed")->each([&a](const std::string&) {
    a.seed_set = true;
  });
  cmd->add_option("--replicates", a.replicates, "Monte Carlo replicates")
      ->each([&a](const std::string&) { a.replicates_set = true; });
  cmd->add_option("--grid", a.grid_points, "Grid points for sweeps and optimization")
      ->each([&a](const std::string&) { a.grid_set = true; });
  cmd->add_option("--tol", a.tol, "Refinement tolerance for optimization")
      ->each([&a](const std::string&) { a.tol_set = true; });
}

hetnet::ExperimentSpec to_spec(const std::string& command, const CommonArgs& a) {
  hetnet::ExperimentSpec spec;
  spec.command = command;
  if (!a.config_path.empty()) spec.config_path = a.config_path;
  spec.presets = a.presets;
  spec.overrides = a.overrides;
  spec.output_path = a.output_path;
  if (a.seed_set) spec.seed = a.seed;
  if (a.replicates_set) spec.replicates = a.replicates;
  if (a.grid_set) spec.grid_points = a.grid_points;
  if (a.tol_set) spec.tol = a.tol;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tier cellular network rate, power, and energy-efficiency tool"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"derive", "Print every derived model constant"},
      {"rates", "Per-link spectral efficiencies (bit/s/Hz)"},
      {"power", "Per-link and area power consumption"},
      {"ee", "Energy efficiency at the configured bandwidth split"},
      {"sweep-zeta", "Energy efficiency over a backhaul bandwidth fraction grid"},
      {"sweep-power", "Energy efficiency over an MBS transmit power grid"},
      {"sweep-saps", "Energy efficiency over the SAPs-per-MBS count"},
      {"optimize-zeta", "Grid-plus-refinement search for the best bandwidth split"},
      {"mc-validate", "Monte Carlo check of the analytical per-link rates"},
      {"load-pmf", "Macro cell-load distribution"}};

  std::vector<CommonArgs> args(commands.size());
  std::vector<CLI::App*> subs(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs[i] = app.add_subcommand(commands[i].first, commands[i].second);
    add_common(subs[i], args[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < commands.size(); ++i)
    if (subs[i]->parsed()) return hetnet::run(to_spec(commands[i].first, args[i]));
  return 2;
}
