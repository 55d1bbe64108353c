#pragma once

#include <array>
#include <string>
#include <vector>

#include "qrouter/circuit.hpp"
#include "qrouter/pulse.hpp"

namespace qrouter {

// Weights over P_reflect(omega_T1), P_reflect(omega_T3), P_trans2(omega_a | T1), P_trans3(omega_a | T3).
struct TuneObjective {
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};
  double penalty = 100.0;

  void validate() const;
};

// Signed mismatch of the shifted absorber energies, (2a under T1) - (3a under T3) and the b analogue.
struct RoutingMismatch {
  double a = 0.0;
  double b = 0.0;
};

RoutingMismatch routing_mismatch(const RouterModel& m);

struct RoutingResidual {
  double a = 0.0;
  double b = 0.0;
};

RoutingResidual routing_residual(const RouterModel& m);

struct TuneOptions {
  int budget = 2000;
  double threshold = 1e-4;     // on r_a / omega_a and r_b / omega_a
  double initial_step = 0.05;  // relative simplex edge
  ModelOptions model;
  TableOptions table;
};

struct Evaluation {
  double objective = 0.0;
  std::array<double, 4> probability{};
  RoutingResidual residual;
  double omega_a = 0.0;
  bool feasible = false;
};

Evaluation evaluate(const CircuitParams& p, const TuneObjective& obj, const TuneOptions& opt);

struct TraceEntry {
  int evaluation = 0;
  std::array<double, 4> couplings{};
  double objective = 0.0;
  double best = 0.0;
};

struct TuneResult {
  CircuitParams params;
  Evaluation seed;
  Evaluation best;
  bool converged = false;
  int evaluations = 0;
  std::vector<TraceEntry> trace;
  std::string report;
};

// Simplex search over (c2sa, c2sb, c3sa, c3sb), clamped to the circuit invariants.
TuneResult tune(const CircuitParams& seed, const TuneObjective& obj, const TuneOptions& opt = {});

// Newton iteration on (c3sa, c3sb) driving both routing mismatches to zero.
CircuitParams polish_routing(const CircuitParams& p, const ModelOptions& opt = {}, int max_iterations = 40);

}  // namespace qrouter
