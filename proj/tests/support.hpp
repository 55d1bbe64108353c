#pragma once

#include <random>
#include <string>

#include "qrouter/config.hpp"
#include "qrouter/model.hpp"

namespace qrouter::testing {

inline std::string source_path(const std::string& relative) { return std::string(QROUTER_SOURCE_DIR) + "/" + relative; }

inline RunConfig reference_config() { return load_config(source_path("configs/reference.cfg")); }

inline RouterModel reference_model() { return resolve_model(reference_config()); }

// Model with the given lifetimes and level structure drawn around the Table S1 scale.
inline RouterModel random_model(std::mt19937_64& rng, Lifetimes tau) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RouterModel m;
  m.omega_t = {6.0 + u(rng), 13.0 + u(rng), 20.0 + u(rng)};
  for (double& w : m.omega_s) w = 0.8 + 0.4 * u(rng);
  for (auto& row : m.j)
    for (double& j : row) j = 0.3 * u(rng);
  m.tau = tau;
  return m;
}

}  // namespace qrouter::testing
