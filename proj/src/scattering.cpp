#include "qrouter/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "qrouter/error.hpp"
#include "qrouter/hilbert.hpp"

namespace qrouter {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

double line_coupling(double tau) { return std::isinf(tau) ? 0.0 : std::sqrt(2.0 / tau); }

void check_channel(int c, const char* what) {
  if (c < 1 || c > 3) throw UnsupportedInput(std::string(what) + " must be 1, 2 or 3");
}

}  // namespace

Eigen::VectorXd EquationsOfMotion::linewidths() const { return -system.diagonal().real(); }

EquationsOfMotion assemble_eom(const RouterModel& m, Condition ctx) {
  m.validate();
  EquationsOfMotion eom;
  std::vector<double> freq;
  std::vector<std::array<double, 3>> k;

  if (ctx == Condition::gs) {
    eom.labels = {"T1", "T3"};
    freq = {m.transmon(Level::t1), m.transmon(Level::t3)};
    k.push_back({line_coupling(m.tau.t1), 0.0, 0.0});
    k.push_back({line_coupling(m.tau.t3), 0.0, 0.0});
  }
  const auto shifted = conditional_spectrum(m, ctx);
  for (Squid s : all_squids) {
    eom.labels.emplace_back(squid_name(s));
    freq.push_back(shifted[index(s)]);
    const double g = line_coupling(m.tau.squid(s));
    std::array<double, 3> row{g, 0.0, 0.0};
    row[output_line(s) - 1] = g;
    k.push_back(row);
  }

  const int n = static_cast<int>(freq.size());
  eom.frequencies = Eigen::Map<const Eigen::VectorXd>(freq.data(), n);
  eom.coupling.resize(3, n);
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < 3; ++c) eom.coupling(c, x) = k[x][c];

  const complex i(0.0, 1.0);
  eom.system = -0.5 * (eom.coupling.transpose() * eom.coupling).cast<complex>();
  for (int x = 0; x < n; ++x) {
    eom.system(x, x) -= i * eom.frequencies(x) + dephasing_weight * m.gamma_d;
  }
  eom.drive = -i * eom.coupling.row(0).transpose().cast<complex>();
  return eom;
}

Eigen::Vector3cd even_response(const EquationsOfMotion& eom, double k) {
  const complex i(0.0, 1.0);
  const int n = eom.size();
  const Eigen::MatrixXcd shifted = eom.system + i * k * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::VectorXcd a = -shifted.partialPivLu().solve(eom.drive);
  Eigen::Vector3cd s = -i * (eom.coupling.cast<complex>() * a);
  s(0) += 1.0;
  return s.cwiseProduct(eom.output_phase.cast<complex>());
}

LineResponse directional_response(const Eigen::Vector3cd& even) {
  return {(even(0) - 1.0) * 0.5, (even(0) + 1.0) * 0.5, even(1) * inv_sqrt2, even(2) * inv_sqrt2};
}

namespace {

complex pick(ModeKind kind, const Eigen::Vector3cd& even, int out) {
  switch (kind) {
    case ModeKind::even:
      return even(out - 1);
    case ModeKind::odd:
      return out == 1 ? complex(1.0) : complex(0.0);
    case ModeKind::right:
    case ModeKind::left: {
      const LineResponse r = directional_response(even);
      return out == 1 ? r.reflected : (out == 2 ? r.line2 : r.line3);
    }
  }
  return {};
}

}  // namespace

complex single_photon_s(const RouterModel& m, Condition ctx, const PhotonMode& in, int out_channel) {
  if (in.channel != 1) throw UnsupportedInput("photons enter on line 1 only");
  check_channel(out_channel, "out_channel");
  if (in.kind == ModeKind::odd) return pick(in.kind, {}, out_channel);
  return pick(in.kind, even_response(assemble_eom(m, ctx), in.frequency), out_channel);
}

complex analytic_lineshape(Lineshape kind, double gamma_tau) {
  if (!(gamma_tau >= 0.0)) throw ValidationError("gamma_tau", "gamma_tau must be >= 0");
  switch (kind) {
    case Lineshape::even_t1:
      return -(1.0 - 0.75 * gamma_tau) / (1.0 + 0.75 * gamma_tau);
    case Lineshape::right_t1:
      return -1.0 / (1.0 + 0.75 * gamma_tau);
    case Lineshape::cond_2:
      return 1.0 / (1.0 + 0.375 * gamma_tau);
  }
  return {};
}

std::vector<double> resonance_grid(const EquationsOfMotion& eom, const GridPolicy& policy) {
  if (policy.points_per_window < 2) throw ValidationError("points_per_window", "need at least 2 points");
  if (!(policy.halfwidth_factor > 0.0)) throw ValidationError("halfwidth_factor", "must be positive");
  std::vector<double> grid;
  const Eigen::VectorXd widths = eom.linewidths();
  const int n = policy.points_per_window;
  for (int x = 0; x < eom.size(); ++x) {
    const double center = eom.frequencies(x);
    const double half = policy.halfwidth_factor * widths(x);
    if (!(half > 0.0)) {
      grid.push_back(center);
      continue;
    }
    for (int i = 0; i < n; ++i) grid.push_back(center - half + 2.0 * half * i / (n - 1));
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> merged;
  for (double p : grid) {
    if (merged.empty() || p - merged.back() > 1e-12 * std::max(1.0, std::abs(p))) merged.push_back(p);
  }
  return merged;
}

std::vector<ScatteringAmplitude> scan(const RouterModel& m, Condition ctx, ModeKind kind,
                                      const std::vector<double>& grid) {
  const EquationsOfMotion eom = assemble_eom(m, ctx);
  std::vector<ScatteringAmplitude> out(3);
  for (int c = 0; c < 3; ++c) {
    out[c].out_channel = c + 1;
    out[c].p = grid;
    out[c].amplitude.reserve(grid.size());
  }
  for (double p : grid) {
    const Eigen::Vector3cd even =
        kind == ModeKind::odd ? Eigen::Vector3cd::Zero() : even_response(eom, p);
    for (int c = 0; c < 3; ++c) out[c].amplitude.push_back(pick(kind, even, c + 1));
  }
  return out;
}

ModePair to_even_odd(const ModeGrid& right, const ModeGrid& left) {
  const std::size_t n = right.p.size();
  if (right.amplitude.size() != n || left.p.size() != n || left.amplitude.size() != n)
    throw GridMismatch("right and left grids differ in size");
  ModePair out;
  for (std::size_t i = 0; i < n; ++i) {
    const double tol = 1e-12 * std::max(1.0, std::abs(right.p[i]));
    if (std::abs(right.p[i] + left.p[i]) > tol)
      throw GridMismatch("left grid is not the mirror of the right grid at index " + std::to_string(i));
    out.first.p.push_back(right.p[i]);
    out.second.p.push_back(right.p[i]);
    out.first.amplitude.push_back((right.amplitude[i] + left.amplitude[i]) * inv_sqrt2);
    out.second.amplitude.push_back((right.amplitude[i] - left.amplitude[i]) * inv_sqrt2);
  }
  return out;
}

ModePair to_right_left(const ModeGrid& even, const ModeGrid& odd) {
  const std::size_t n = even.p.size();
  if (even.amplitude.size() != n || odd.p.size() != n || odd.amplitude.size() != n)
    throw GridMismatch("even and odd grids differ in size");
  ModePair out;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(even.p[i] - odd.p[i]) > 1e-12 * std::max(1.0, std::abs(even.p[i])))
      throw GridMismatch("even and odd grids differ at index " + std::to_string(i));
    out.first.p.push_back(even.p[i]);
    out.second.p.push_back(-even.p[i]);
    out.first.amplitude.push_back((even.amplitude[i] + odd.amplitude[i]) * inv_sqrt2);
    out.second.amplitude.push_back((even.amplitude[i] - odd.amplitude[i]) * inv_sqrt2);
  }
  return out;
}

}  // namespace qrouter
