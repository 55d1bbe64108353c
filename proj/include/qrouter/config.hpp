#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qrouter/circuit.hpp"
#include "qrouter/model.hpp"
#include "qrouter/pulse.hpp"
#include "qrouter/scattering.hpp"
#include "qrouter/tuner.hpp"

namespace qrouter {

// Text format: one `key = value` per line, `[section]` headers, `#` comments.
// Exactly one of [circuit] or [direct] describes the model. Units: capacitances in
// units of c1, energies and rates in rad/ns, lifetimes in ns.
struct RunConfig {
  enum class Mode { circuit, direct };

  Mode mode = Mode::circuit;
  CircuitParams circuit;
  ModelOptions model;   // basis size, lifetimes and gamma_d for the circuit path
  RouterModel direct;
  TableOptions table;
  GridPolicy grid;
  Condition scatter_context = Condition::gs;
  ModeKind scatter_mode = ModeKind::even;
  TuneObjective objective;
  TuneOptions tune;
  std::optional<std::string> output;
};

RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

// Builds the router model the config describes.
RouterModel resolve_model(const RunConfig& cfg);

}  // namespace qrouter
