#include "qrouter/model.hpp"

#include <cmath>
#include <string>

#include "qrouter/error.hpp"

namespace qrouter {

std::string_view squid_name(Squid s) noexcept {
  switch (s) {
    case Squid::s2a: return "2a";
    case Squid::s2b: return "2b";
    case Squid::s3a: return "3a";
    case Squid::s3b: return "3b";
  }
  return "?";
}

std::string_view condition_name(Condition c) noexcept {
  switch (c) {
    case Condition::gs: return "GS";
    case Condition::t1: return "T1";
    case Condition::t3: return "T3";
  }
  return "?";
}

namespace {

void require_energy(double v, const std::string& key) {
  if (!std::isfinite(v) || v <= 0.0) throw ValidationError(key, key + " must be a positive finite energy");
}

void require_lifetime(double v, const std::string& key) {
  if (std::isnan(v) || v <= 0.0) throw ValidationError(key, key + " must be a positive lifetime");
}

}  // namespace

void RouterModel::validate() const {
  for (int i = 0; i < 3; ++i) require_energy(omega_t[i], "omega_t" + std::to_string(i + 1));
  for (Squid s : all_squids) require_energy(squid(s), "omega_" + std::string(squid_name(s)));
  if (!(omega_t[2] > omega_t[0])) throw ValidationError("omega_t3", "omega_t3 must exceed omega_t1");
  for (int i = 0; i < 3; ++i) {
    for (Squid s : all_squids) {
      if (!std::isfinite(j[i][index(s)])) {
        const std::string key = "j_" + std::to_string(i + 1) + "_" + std::string(squid_name(s));
        throw ValidationError(key, key + " must be finite");
      }
    }
  }
  require_lifetime(tau.t1, "tau_t1");
  require_lifetime(tau.t3, "tau_t3");
  require_lifetime(tau.a, "tau_a");
  require_lifetime(tau.b, "tau_b");
  if (!std::isfinite(gamma_d) || gamma_d < 0.0) throw ValidationError("gamma_d", "gamma_d must be >= 0");
}

void check_two_photon_regime(const RouterModel& m, double min_ratio) {
  const double slow = std::min(m.tau.t1, m.tau.t3);
  const double fast = std::max(m.tau.a, m.tau.b);
  if (!(slow >= min_ratio * fast)) {
    throw ValidationError("tau_t1", "transmon lifetimes must exceed absorber lifetimes by a factor " +
                                        std::to_string(min_ratio));
  }
}

}  // namespace qrouter
