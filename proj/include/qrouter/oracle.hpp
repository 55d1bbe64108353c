#pragma once

#include <array>
#include <cstdint>

#include "qrouter/model.hpp"
#include "qrouter/pulse.hpp"

namespace qrouter {

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;

  std::int64_t steps() const noexcept;
};

// Quantities the grid invariants refer to, evaluated in the rotating frame.
struct GridRequirements {
  double frame = 0.0;      // rotating-frame frequency
  double omega_max = 0.0;  // largest residual angular frequency
  double tau_min = 0.0;
  double tau_max = 0.0;

  double max_step() const noexcept;
  double min_window() const noexcept;
};

GridRequirements grid_requirements(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse);

// Throws ValidationError when dt or the window break the invariants.
void check_time_grid(const TimeGrid& grid, const GridRequirements& req);

// Smallest even step count meeting the invariants; refinement > 1 shrinks dt by that factor.
TimeGrid make_time_grid(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse, double refinement = 1.0);

struct TimeDomainResult {
  std::array<double, 3> probability{};  // flux inside the window plus the free decay of what is left
  double input_weight = 0.0;         // pulse weight injected inside the window
  double residual_excitation = 0.0;  // system population left at t1
  double norm_deficit = 0.0;         // input_weight - total probability
  complex reflected_overlap{};       // <b_in | b_1,out> over the window
  std::int64_t steps = 0;
};

// Even-mode pulse on line 1, integrated with classical fourth-order Runge-Kutta.
TimeDomainResult time_domain_scatter(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse,
                                     const TimeGrid& grid);

struct OracleReport {
  std::array<double, 3> p_freq{};
  std::array<double, 3> p_time{};
  std::array<double, 3> diff{};
  std::array<bool, 3> flagged{};
  double max_discrepancy = 0.0;
  double norm_deficit = 0.0;
  std::int64_t steps = 0;
};

inline constexpr double oracle_tolerance = 1e-3;

OracleReport compare(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse,
                     const PulseOptions& freq_opt = {}, double refinement = 1.0);

}  // namespace qrouter
