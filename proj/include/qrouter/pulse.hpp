#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qrouter/model.hpp"
#include "qrouter/scattering.hpp"

namespace qrouter {

struct LorentzianPulse {
  double center = 0.0;
  double width = 1.0;  // half width at half maximum, 1/tau_1

  double duration() const noexcept { return 1.0 / width; }
  double spectral_density(double k) const noexcept;
  // Spectral weight inside [lo, hi].
  double weight(double lo, double hi) const noexcept;
  void validate() const;
};

// A narrow spectral feature of S(k) the quadrature must resolve.
struct Feature {
  double center = 0.0;
  double width = 0.0;
};

std::vector<Feature> features_of(const EquationsOfMotion& eom);

struct PulseOptions {
  double abs_tol = 1e-8;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  int samples = 201;  // beta(p) sample points kept for export
  int max_intervals = 4000;
};

using OnShellAmplitude = std::function<complex(double)>;
using OnShellResponse = std::function<Eigen::VectorXcd(double)>;

struct BetaProfile {
  LorentzianPulse pulse;
  OnShellAmplitude amplitude;
  std::vector<Feature> features;
  PulseOptions options;
  std::vector<double> p;
  std::vector<complex> beta;

  complex at(double k) const;
};

BetaProfile beta_amplitude(OnShellAmplitude s, const LorentzianPulse& pulse,
                           std::vector<Feature> features = {}, const PulseOptions& opt = {});

double channel_probability(const BetaProfile& beta);

// Integrates |s_c|^2 against the pulse density for every component with shared nodes.
std::vector<double> response_probabilities(const OnShellResponse& s, const LorentzianPulse& pulse,
                                           std::span<const Feature> features, const PulseOptions& opt = {});

struct PulseResult {
  std::vector<std::string> channels;
  std::vector<double> probability;
  std::vector<BetaProfile> beta;
};

// Even input reports (line1, line2, line3); right or left input reports
// (reflected, transmitted, line2, line3); odd input reports (line1).
PulseResult pulse_scatter(const RouterModel& m, Condition ctx, ModeKind kind, const LorentzianPulse& pulse,
                          const PulseOptions& opt = {});

struct Table {
  std::string corner;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // values[row][column]

  double at(std::string_view row, std::string_view column) const;
};

struct TableOptions {
  double bandwidth_ratio = 1e-3;  // pulse width over the linewidth of the targeted resonance
  PulseOptions pulse;
};

// Shifted-spectrum target frequencies.
double omega_a(const RouterModel& m);
double omega_b(const RouterModel& m);

Table table_one(const RouterModel& m, const TableOptions& opt = {});
Table table_two(const RouterModel& m, const TableOptions& opt = {});

struct ProbabilityTables {
  Table first;
  Table second;
};

ProbabilityTables probability_tables(const RouterModel& m, const TableOptions& opt = {});

// Even-mode reflection at omega_T1 for the table pulse.
double resonant_reflection(const RouterModel& m, const TableOptions& opt = {});

// gamma_d such that resonant_reflection equals target.
double calibrate_gamma_d(RouterModel m, double target = 0.997, const TableOptions& opt = {});

}  // namespace qrouter
