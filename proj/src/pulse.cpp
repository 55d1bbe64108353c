#include "qrouter/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "qrouter/error.hpp"
#include "qrouter/quadrature.hpp"

namespace qrouter {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double quarter = std::numbers::pi / 4.0;
constexpr double feature_offsets[] = {-64.0, -16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0, 64.0};
constexpr int initial_splits = 4;

// One of the three charts covering the real line: the core |p - c| <= w in the
// angle of p - c, and each tail in the angle of w / |p - c|.
struct Chart {
  enum Kind { core, right_tail, left_tail } kind;
  double lo;
  double hi;
};

double to_frequency(const Chart& chart, double v, double c, double w) {
  switch (chart.kind) {
    case Chart::core: return c + w * std::tan(v);
    case Chart::right_tail: return c + w / std::tan(v);
    case Chart::left_tail: return c - w / std::tan(v);
  }
  return c;
}

std::vector<double> chart_breakpoints(const Chart& chart, std::span<const Feature> features, double c, double w) {
  std::vector<double> b;
  for (int i = 0; i <= initial_splits; ++i) b.push_back(chart.lo + (chart.hi - chart.lo) * i / initial_splits);
  for (const Feature& f : features) {
    for (double m : feature_offsets) {
      const double p = f.center + m * f.width;
      double v = 0.0;
      if (chart.kind == Chart::core) {
        v = std::atan((p - c) / w);
      } else if (chart.kind == Chart::right_tail) {
        if (!(p - c > w)) continue;
        v = std::atan(w / (p - c));
      } else {
        if (!(c - p > w)) continue;
        v = std::atan(w / (c - p));
      }
      if (v > chart.lo && v < chart.hi) b.push_back(v);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace

double LorentzianPulse::spectral_density(double k) const noexcept {
  const double d = center - k;
  return (width / pi) / (d * d + width * width);
}

double LorentzianPulse::weight(double lo, double hi) const noexcept {
  return (std::atan((hi - center) / width) - std::atan((lo - center) / width)) / pi;
}

void LorentzianPulse::validate() const {
  if (!std::isfinite(center)) throw ValidationError("center", "pulse center must be finite");
  if (!(std::isfinite(width) && width > 0.0)) throw ValidationError("width", "pulse width must be positive");
}

std::vector<Feature> features_of(const EquationsOfMotion& eom) {
  std::vector<Feature> f;
  const Eigen::VectorXd widths = eom.linewidths();
  for (int x = 0; x < eom.size(); ++x) f.push_back({eom.frequencies(x), widths(x)});
  return f;
}

std::vector<double> response_probabilities(const OnShellResponse& s, const LorentzianPulse& pulse,
                                           std::span<const Feature> features, const PulseOptions& opt) {
  pulse.validate();
  if (!(opt.hi > opt.lo)) throw ValidationError("window", "empty frequency window");
  const double captured = pulse.weight(opt.lo, opt.hi);
  if (captured < 0.9999) {
    throw CoverageError(captured, "frequency window holds only " + std::to_string(captured) + " of the pulse weight");
  }
  const double c = pulse.center;
  const double w = pulse.width;

  std::vector<Chart> charts;
  {
    const double a = std::max(-quarter, std::atan((opt.lo - c) / w));
    const double b = std::min(quarter, std::atan((opt.hi - c) / w));
    if (b > a) charts.push_back({Chart::core, a, b});
    if (opt.hi > c + w) charts.push_back({Chart::right_tail, std::isinf(opt.hi) ? 0.0 : std::atan(w / (opt.hi - c)), quarter});
    if (opt.lo < c - w) charts.push_back({Chart::left_tail, std::isinf(opt.lo) ? 0.0 : std::atan(w / (c - opt.lo)), quarter});
  }

  Eigen::VectorXd total;
  const double tol = opt.abs_tol / static_cast<double>(charts.size());
  for (const Chart& chart : charts) {
    if (!(chart.hi > chart.lo)) continue;
    const auto integrand = [&](double v) -> Eigen::VectorXd {
      return s(to_frequency(chart, v, c, w)).cwiseAbs2() / pi;
    };
    const std::vector<double> bp = chart_breakpoints(chart, features, c, w);
    const QuadratureResult r = integrate_adaptive(integrand, bp, tol, opt.max_intervals);
    if (!r.converged) {
      throw ConvergenceError("pulse quadrature error " + std::to_string(r.error) + " exceeds tolerance " +
                             std::to_string(tol));
    }
    if (total.size() == 0) total = Eigen::VectorXd::Zero(r.value.size());
    total += r.value;
  }
  return {total.data(), total.data() + total.size()};
}

complex BetaProfile::at(double k) const {
  const complex i(0.0, 1.0);
  return std::sqrt(pulse.width / pi) * amplitude(k) / (i * (pulse.center - k) + pulse.width);
}

BetaProfile beta_amplitude(OnShellAmplitude s, const LorentzianPulse& pulse, std::vector<Feature> features,
                           const PulseOptions& opt) {
  pulse.validate();
  BetaProfile b{pulse, std::move(s), std::move(features), opt, {}, {}};
  for (int i = 0; i < opt.samples; ++i) {
    const double theta = -pi / 2.0 + pi * (i + 0.5) / opt.samples;
    const double k = pulse.center + pulse.width * std::tan(theta);
    if (k < opt.lo || k > opt.hi) continue;
    b.p.push_back(k);
    b.beta.push_back(b.at(k));
  }
  return b;
}

double channel_probability(const BetaProfile& beta) {
  const auto s = [&](double k) {
    Eigen::VectorXcd v(1);
    v(0) = beta.amplitude(k);
    return v;
  };
  return response_probabilities(s, beta.pulse, beta.features, beta.options).front();
}

namespace {

Eigen::VectorXcd select(ModeKind kind, const Eigen::Vector3cd& even) {
  switch (kind) {
    case ModeKind::even:
      return even;
    case ModeKind::odd: {
      Eigen::VectorXcd v(1);
      v(0) = 1.0;
      return v;
    }
    case ModeKind::right:
    case ModeKind::left: {
      const LineResponse r = directional_response(even);
      Eigen::VectorXcd v(4);
      v << r.reflected, r.transmitted, r.line2, r.line3;
      return v;
    }
  }
  return {};
}

std::vector<std::string> channel_names(ModeKind kind) {
  switch (kind) {
    case ModeKind::even: return {"line1", "line2", "line3"};
    case ModeKind::odd: return {"line1"};
    case ModeKind::right:
    case ModeKind::left: return {"reflected", "transmitted", "line2", "line3"};
  }
  return {};
}

}  // namespace

PulseResult pulse_scatter(const RouterModel& m, Condition ctx, ModeKind kind, const LorentzianPulse& pulse,
                          const PulseOptions& opt) {
  const auto eom = std::make_shared<const EquationsOfMotion>(assemble_eom(m, ctx));
  const std::vector<Feature> features = features_of(*eom);
  const auto response = [eom, kind](double k) -> Eigen::VectorXcd {
    if (kind == ModeKind::odd) return select(kind, Eigen::Vector3cd::Zero());
    return select(kind, even_response(*eom, k));
  };

  PulseResult r;
  r.channels = channel_names(kind);
  r.probability = response_probabilities(response, pulse, features, opt);
  for (std::size_t c = 0; opt.samples > 0 && c < r.channels.size(); ++c) {
    r.beta.push_back(beta_amplitude([response, c](double k) { return response(k)(static_cast<Eigen::Index>(c)); },
                                    pulse, features, opt));
  }
  return r;
}

double Table::at(std::string_view row, std::string_view column) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] != row) continue;
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (columns[j] == column) return values[i][j];
  }
  throw ValidationError(std::string(row), "no table entry " + std::string(row) + "/" + std::string(column));
}

double omega_a(const RouterModel& m) { return m.squid(Squid::s2a) - m.kerr(Level::t1, Squid::s2a); }
double omega_b(const RouterModel& m) { return m.squid(Squid::s2b) - m.kerr(Level::t1, Squid::s2b); }

namespace {

double linewidth(const EquationsOfMotion& eom, std::string_view label) {
  for (int x = 0; x < eom.size(); ++x)
    if (eom.labels[x] == label) return eom.linewidths()(x);
  throw ValidationError(std::string(label), "no amplitude " + std::string(label));
}

PulseOptions without_samples(PulseOptions opt) {
  opt.samples = 0;
  return opt;
}

LorentzianPulse table_pulse(double center, double target_width, const TableOptions& opt) {
  if (!(opt.bandwidth_ratio > 0.0)) throw ValidationError("bandwidth_ratio", "bandwidth_ratio must be positive");
  return {center, opt.bandwidth_ratio * target_width};
}

}  // namespace

Table table_one(const RouterModel& m, const TableOptions& opt) {
  const EquationsOfMotion gs = assemble_eom(m, Condition::gs);
  struct Row {
    const char* label;
    double freq;
    double width;
  };
  const Row rows[] = {{"omega_T1", m.transmon(Level::t1), linewidth(gs, "T1")},
                      {"omega_T3", m.transmon(Level::t3), linewidth(gs, "T3")},
                      {"omega_2a", m.squid(Squid::s2a), linewidth(gs, "2a")},
                      {"omega_a", omega_a(m), linewidth(assemble_eom(m, Condition::t1), "2a")}};
  Table t;
  t.corner = "freq";
  t.columns = {"refl_even", "refl_right", "trans2", "trans3"};
  for (const Row& row : rows) {
    const LorentzianPulse pulse = table_pulse(row.freq, row.width, opt);
    const PulseResult even = pulse_scatter(m, Condition::gs, ModeKind::even, pulse, without_samples(opt.pulse));
    const PulseResult right = pulse_scatter(m, Condition::gs, ModeKind::right, pulse, without_samples(opt.pulse));
    t.rows.emplace_back(row.label);
    t.values.push_back({even.probability[0], right.probability[0], even.probability[1], even.probability[2]});
  }
  return t;
}

Table table_two(const RouterModel& m, const TableOptions& opt) {
  const EquationsOfMotion gs = assemble_eom(m, Condition::gs);
  const EquationsOfMotion t1 = assemble_eom(m, Condition::t1);
  struct Row {
    const char* label;
    double freq;
    double width;
  };
  const Row rows[] = {{"omega_2a", m.squid(Squid::s2a), linewidth(gs, "2a")},
                      {"omega_a", omega_a(m), linewidth(t1, "2a")},
                      {"omega_b", omega_b(m), linewidth(t1, "2b")}};
  Table t;
  t.corner = "freq";
  t.columns = {"trans2_T1", "trans3_T1", "trans2_T3", "trans3_T3"};
  for (const Row& row : rows) {
    const LorentzianPulse pulse = table_pulse(row.freq, row.width, opt);
    const PulseResult a = pulse_scatter(m, Condition::t1, ModeKind::even, pulse, without_samples(opt.pulse));
    const PulseResult b = pulse_scatter(m, Condition::t3, ModeKind::even, pulse, without_samples(opt.pulse));
    t.rows.emplace_back(row.label);
    t.values.push_back({a.probability[1], a.probability[2], b.probability[1], b.probability[2]});
  }
  return t;
}

ProbabilityTables probability_tables(const RouterModel& m, const TableOptions& opt) {
  return {table_one(m, opt), table_two(m, opt)};
}

double resonant_reflection(const RouterModel& m, const TableOptions& opt) {
  const EquationsOfMotion gs = assemble_eom(m, Condition::gs);
  const LorentzianPulse pulse = table_pulse(m.transmon(Level::t1), linewidth(gs, "T1"), opt);
  return pulse_scatter(m, Condition::gs, ModeKind::even, pulse, without_samples(opt.pulse)).probability[0];
}

double calibrate_gamma_d(RouterModel m, double target, const TableOptions& opt) {
  if (!(target > 0.0 && target < 1.0)) throw ValidationError("target", "calibration target must lie in (0, 1)");
  const auto reflection = [&](double g) {
    m.gamma_d = g;
    return resonant_reflection(m, opt);
  };
  if (reflection(0.0) < target) throw ConvergenceError("reflection target exceeds the lossless value");
  double lo = 0.0;
  double hi = 1e-3 / m.tau.t1;
  for (int i = 0; reflection(hi) >= target; ++i) {
    if (i > 200) throw ConvergenceError("could not bracket the calibration target");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reflection(mid) >= target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qrouter
