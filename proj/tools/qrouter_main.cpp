#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include "qrouter/commands.hpp"
#include "qrouter/error.hpp"

int main(int argc, char** argv) {
  using namespace qrouter;

  CLI::App app{"Transmon photon router simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<double> gamma_d;
  std::optional<int> grid_points;

  for (const auto& [cmd, text] : {std::pair{Command::derive, "derive"}, {Command::scatter, "scatter"},
                                  {Command::table1, "table1"}, {Command::table2, "table2"},
                                  {Command::tune, "tune"}, {Command::oracle_check, "oracle-check"}}) {
    CLI::App* sub = app.add_subcommand(text);
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--out", out_path, "output file (default: stdout, or the [output] path)");
    sub->add_option("--gamma-d", gamma_d, "dephasing rate override, rad/ns");
    sub->add_option("--grid-points", grid_points, "points per resonance window override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  const Command cmd = *parse_command(app.get_subcommands().front()->get_name());

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (gamma_d) {
      if (!(*gamma_d >= 0.0) || !std::isfinite(*gamma_d))
        throw ValidationError("gamma_d", "--gamma-d must be finite and >= 0");
      cfg.model.gamma_d = *gamma_d;
      cfg.direct.gamma_d = *gamma_d;
      cfg.tune.model.gamma_d = *gamma_d;
    }
    if (grid_points) {
      if (*grid_points < 2) throw ValidationError("points_per_window", "--grid-points must be >= 2");
      cfg.grid.points_per_window = *grid_points;
    }
  } catch (const Error& e) {
    std::cerr << "qrouter " << command_name(cmd) << ": cli parse_config: " << e.what() << "\n";
    return exit_validation;
  }

  if (out_path.empty() && cfg.output) out_path = *cfg.output;
  if (out_path.empty()) return run_command(cmd, cfg, std::cout, std::cerr);

  std::ostringstream buffer;
  const int code = run_command(cmd, cfg, buffer, std::cerr);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "qrouter " << command_name(cmd) << ": cli write: cannot open " << out_path << "\n";
    return exit_validation;
  }
  file << buffer.str();
  return code;
}
