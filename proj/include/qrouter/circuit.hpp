#pragma once

#include <array>
#include <optional>

#include "qrouter/model.hpp"

namespace qrouter {

// Capacitances in units of the input-island capacitance, Josephson energies in rad/ns.
struct CircuitParams {
  double c1 = 1.0;
  double ct = 0.1;
  std::array<double, 4> c_branch{1.2, 1.1, 1.0, 1.0};           // C_2a, C_2b, C_3a, C_3b
  std::array<double, 4> c_couple{0.1824, 0.1934, 0.1560, 0.1799};  // C_2sa, C_2sb, C_3sa, C_3sb
  std::optional<double> alpha;  // nonlinear-capacitor coefficient; cancellation value when unset

  // Filled by solve_josephson_energies.
  double ej_transmon = 0.0;
  std::array<double, 4> ej_squid{};

  bool has_josephson() const noexcept;
};

// Reduced flux quantum in working units.
inline constexpr double flux_quantum = 1.0;

struct DerivedConstants {
  double csum = 0.0;
  double e_t = 0.0;        // transmon charging energy
  double alpha = 0.0;
  double beta = 0.0;       // 6 ct alpha
  double ej_total = 0.0;   // 3 csum^2 / beta
  double phi0 = flux_quantum;
  std::array<double, 4> participation{};  // C_ks / (C_k + C_ks)
  std::array<double, 4> e_squid{};        // per-branch charging energies

  double regime_ratio() const noexcept { return ej_total / e_t; }
};

// Throws ConstraintViolation naming the offending pair.
void check_circuit(const CircuitParams& p);

double alpha_cancellation(const CircuitParams& p);

DerivedConstants derive_constants(const CircuitParams& p);

// Solves the sum rule and the four branch products E_Jk E_k = E_Jt jointly.
CircuitParams solve_josephson_energies(CircuitParams p, const DerivedConstants& d);

struct JosephsonResiduals {
  double sum_rule = 0.0;
  std::array<double, 4> products{};
  double max() const noexcept;
};

// Relative residuals of the constraint families.
JosephsonResiduals josephson_residuals(const CircuitParams& p, const DerivedConstants& d);

// Matrix elements of the transmon line-coupling operator between Fock levels.
struct TransmonCouplings {
  double cubic_ratio = 0.0;  // weight of the cubic term relative to the linear one
  double g_t1 = 0.0;         // <1|O|0>
  double g_t3 = 0.0;         // <3|O|0>
  double g_t2t1 = 0.0;       // <2|O|1>
  double g_t3t2 = 0.0;       // <3|O|2>

  // tau_T3 / tau_T1 implied by the one-photon elements.
  double lifetime_ratio() const noexcept;
  // Cascade coefficients written with lifetimes: sqrt(2/t1) - sqrt(3/t3), sqrt(3/t1) - 3 sqrt(2/t3).
  static double cascade_t2t1(double tau_t1, double tau_t3) noexcept;
  static double cascade_t3t2(double tau_t1, double tau_t3) noexcept;
};

TransmonCouplings assemble_transmon_couplings(const DerivedConstants& d);

struct TransmonParams {
  double csum = 0.0;
  double beta = 0.0;
  double ej_total = 0.0;
  double e_t = 0.0;
  double phi0 = flux_quantum;

  static TransmonParams from(const DerivedConstants& d) noexcept;
};

struct SpectrumOptions {
  int basis_size = 30;
  int cosine_order = 4;       // 2 or 4
  bool kinetic_nonlinearity = true;
  bool diagonalize = true;    // false keeps the Fock-diagonal (first-order) estimate
};

struct TransmonSpectrum {
  std::array<double, 3> levels{};        // T1..T3 above ground
  std::array<double, 4> kerr_moment{};   // <W> per level, the cross-Kerr operator expectation
};

TransmonSpectrum transmon_spectrum(const TransmonParams& t, const SpectrumOptions& opt = {});

struct ModelOptions {
  int basis_size = 30;
  Lifetimes tau;
  double gamma_d = 0.0;
  bool check_convergence = true;
};

// Requires Josephson energies that satisfy the constraints.
RouterModel derive_model(const CircuitParams& p, const ModelOptions& opt = {});

// solve_josephson_energies followed by derive_model.
RouterModel build_model(const CircuitParams& p, const ModelOptions& opt = {});

}  // namespace qrouter
