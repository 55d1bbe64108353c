#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qrouter/model.hpp"

namespace qrouter {

using complex = std::complex<double>;

enum class ModeKind { even, odd, right, left };

struct PhotonMode {
  int channel = 1;
  ModeKind kind = ModeKind::even;
  double frequency = 0.0;
};

// Linear single-excitation dynamics  da/dt = A a + drive b_1in,
// with outputs  b_c,out = phase_c (b_c,in - i coupling_c . a).
struct EquationsOfMotion {
  std::vector<std::string> labels;
  Eigen::VectorXd frequencies;
  Eigen::MatrixXd coupling;  // 3 x n, sqrt(2/tau) per line an amplitude radiates into
  Eigen::MatrixXcd system;
  Eigen::VectorXcd drive;
  Eigen::Vector3d output_phase{1.0, -1.0, -1.0};

  int size() const noexcept { return static_cast<int>(frequencies.size()); }
  // Amplitude decay rate of each amplitude (real part of -A on the diagonal).
  Eigen::VectorXd linewidths() const;
};

// Fraction of gamma_d that enters each amplitude's decay rate.
inline constexpr double dephasing_weight = 0.75;

EquationsOfMotion assemble_eom(const RouterModel& m, Condition ctx);

// S_c1(k) for c = 1, 2, 3 with the even mode of line 1 driven at frequency k.
Eigen::Vector3cd even_response(const EquationsOfMotion& eom, double k);

// On-shell coefficient of delta(p - k). For right/left input, out_channel 1 is the
// counter-propagating (reflected) wave and lines 2, 3 report their even-mode output.
complex single_photon_s(const RouterModel& m, Condition ctx, const PhotonMode& in, int out_channel);

struct LineResponse {
  complex reflected;    // into the opposite direction on line 1
  complex transmitted;  // onward on line 1
  complex line2;
  complex line3;
};

LineResponse directional_response(const Eigen::Vector3cd& even);

enum class Lineshape { even_t1, right_t1, cond_2 };

complex analytic_lineshape(Lineshape kind, double gamma_tau);

struct ScatteringAmplitude {
  int out_channel = 1;
  std::vector<double> p;
  std::vector<complex> amplitude;
};

struct GridPolicy {
  int points_per_window = 2001;
  double halfwidth_factor = 50.0;
};

// Windows of halfwidth_factor linewidths around every resonance, merged and sorted.
std::vector<double> resonance_grid(const EquationsOfMotion& eom, const GridPolicy& policy = {});

std::vector<ScatteringAmplitude> scan(const RouterModel& m, Condition ctx, ModeKind kind,
                                      const std::vector<double>& grid);

struct ModeGrid {
  std::vector<double> p;
  std::vector<complex> amplitude;
};

struct ModePair {
  ModeGrid first;
  ModeGrid second;
};

// (right over p, left over -p) -> (even, odd) over p. Left grid must mirror the right one.
ModePair to_even_odd(const ModeGrid& right, const ModeGrid& left);
// Inverse of to_even_odd.
ModePair to_right_left(const ModeGrid& even, const ModeGrid& odd);

}  // namespace qrouter
