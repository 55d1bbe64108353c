#include "qrouter/tuner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qrouter/error.hpp"
#include "format.hpp"
#include "qrouter/hilbert.hpp"

namespace qrouter {

void TuneObjective::validate() const {
  bool any = false;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights", "weights must be finite and >= 0");
    any = any || w > 0.0;
  }
  if (!any) throw ValidationError("weights", "at least one weight must be positive");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw ValidationError("penalty", "penalty must be positive");
}

RoutingMismatch routing_mismatch(const RouterModel& m) {
  const auto t1 = conditional_spectrum(m, Condition::t1);
  const auto t3 = conditional_spectrum(m, Condition::t3);
  return {t1[index(Squid::s2a)] - t3[index(Squid::s3a)], t1[index(Squid::s2b)] - t3[index(Squid::s3b)]};
}

RoutingResidual routing_residual(const RouterModel& m) {
  const RoutingMismatch d = routing_mismatch(m);
  return {std::abs(d.a), std::abs(d.b)};
}

namespace {

constexpr double lower_bound = 1e-3;

double coupling_ceiling(const CircuitParams& p) {
  double limit = p.c1;
  for (double c : p.c_branch) limit = std::min(limit, c);
  return limit * (1.0 - 1e-6);
}

double target_probability(const RouterModel& m, Condition ctx, double center, std::string_view target, int channel,
                          const TableOptions& opt) {
  const EquationsOfMotion eom = assemble_eom(m, ctx);
  double width = 0.0;
  for (int x = 0; x < eom.size(); ++x)
    if (eom.labels[x] == target) width = eom.linewidths()(x);
  const LorentzianPulse pulse{center, opt.bandwidth_ratio * width};
  PulseOptions po = opt.pulse;
  po.samples = 0;
  return pulse_scatter(m, ctx, ModeKind::even, pulse, po).probability[channel];
}

}  // namespace

Evaluation evaluate(const CircuitParams& p, const TuneObjective& obj, const TuneOptions& opt) {
  Evaluation e;
  RouterModel m;
  try {
    m = build_model(p, opt.model);
  } catch (const Error&) {
    e.objective = -std::numeric_limits<double>::infinity();
    return e;
  }
  e.feasible = true;
  e.residual = routing_residual(m);
  e.omega_a = omega_a(m);
  const double wa = e.omega_a;
  const auto& w = obj.weights;
  if (w[0] > 0.0) e.probability[0] = target_probability(m, Condition::gs, m.transmon(Level::t1), "T1", 0, opt.table);
  if (w[1] > 0.0) e.probability[1] = target_probability(m, Condition::gs, m.transmon(Level::t3), "T3", 0, opt.table);
  if (w[2] > 0.0) e.probability[2] = target_probability(m, Condition::t1, wa, "2a", 1, opt.table);
  if (w[3] > 0.0) e.probability[3] = target_probability(m, Condition::t3, wa, "3a", 2, opt.table);
  e.objective = 0.0;
  for (int i = 0; i < 4; ++i) e.objective += w[i] * e.probability[i];
  e.objective -= obj.penalty * (e.residual.a + e.residual.b) / wa;
  return e;
}

namespace {

using Point = std::array<double, 4>;

struct Vertex {
  Point x;
  double value;  // objective, maximized
};

bool better(const Vertex& u, const Vertex& v) {
  if (u.value != v.value) return u.value > v.value;
  return u.x < v.x;
}

class Search {
 public:
  Search(const CircuitParams& seed, const TuneObjective& obj, const TuneOptions& opt)
      : seed_(seed), obj_(obj), opt_(opt), ceiling_(coupling_ceiling(seed)) {}

  Point clamp(Point x) const {
    for (double& v : x) v = std::clamp(v, lower_bound, ceiling_);
    return x;
  }

  CircuitParams params(const Point& x) const {
    CircuitParams p = seed_;
    p.c_couple = x;
    p.ej_transmon = 0.0;
    p.ej_squid = {};
    return p;
  }

  bool exhausted() const { return count_ >= opt_.budget; }

  Vertex eval(const Point& raw) {
    const Point x = clamp(raw);
    const Evaluation e = evaluate(params(x), obj_, opt_);
    ++count_;
    const Vertex v{x, e.objective};
    if (count_ == 1) first_eval_ = e;
    if (count_ == 1 || better(v, best_)) {
      best_ = v;
      best_eval_ = e;
    }
    trace_.push_back({count_, x, e.objective, best_.value});
    return v;
  }

  const Vertex& best() const { return best_; }
  const Evaluation& best_evaluation() const { return best_eval_; }
  const Evaluation& first_evaluation() const { return first_eval_; }
  int count() const { return count_; }
  std::vector<TraceEntry>& trace() { return trace_; }

 private:
  CircuitParams seed_;
  TuneObjective obj_;
  TuneOptions opt_;
  double ceiling_;
  int count_ = 0;
  Vertex best_{};
  Evaluation best_eval_;
  Evaluation first_eval_;
  std::vector<TraceEntry> trace_;
};

Point combine(const Point& a, const Point& b, double t) {
  Point r;
  for (int i = 0; i < 4; ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

double spread(const std::vector<Vertex>& s) {
  double size = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k)
    for (int i = 0; i < 4; ++i) size = std::max(size, std::abs(s[k].x[i] - s[0].x[i]) / s[0].x[i]);
  return size;
}

// Runs one simplex from start until it collapses or the budget is spent.
void simplex(Search& search, const Point& start, double step) {
  std::vector<Vertex> s;
  s.push_back(search.eval(start));
  for (int i = 0; i < 4 && !search.exhausted(); ++i) {
    Point x = s.front().x;
    const Point up = search.clamp([&] {
      Point y = x;
      y[i] *= 1.0 + step;
      return y;
    }());
    x[i] = up[i] != x[i] ? up[i] : x[i] * (1.0 - step);
    s.push_back(search.eval(x));
  }
  if (s.size() < 5) return;

  while (!search.exhausted()) {
    std::sort(s.begin(), s.end(), better);
    if (spread(s) < 1e-13) return;

    Point centroid{};
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i) centroid[i] += s[k].x[i] / 4.0;
    const Vertex& worst = s[4];

    const Vertex reflected = search.eval(combine(centroid, worst.x, -1.0));
    if (better(reflected, s[0])) {
      if (search.exhausted()) {
        s[4] = reflected;
        return;
      }
      const Vertex expanded = search.eval(combine(centroid, worst.x, -2.0));
      s[4] = better(expanded, reflected) ? expanded : reflected;
      continue;
    }
    if (better(reflected, s[3])) {
      s[4] = reflected;
      continue;
    }
    if (search.exhausted()) return;
    const bool outside = better(reflected, worst);
    const Vertex contracted =
        search.eval(outside ? combine(centroid, worst.x, -0.5) : combine(centroid, worst.x, 0.5));
    if (better(contracted, outside ? reflected : worst)) {
      s[4] = contracted;
      continue;
    }
    for (int k = 1; k < 5 && !search.exhausted(); ++k) s[k] = search.eval(combine(s[0].x, s[k].x, 0.5));
  }
}

bool routed(const Evaluation& e, double threshold) {
  return e.feasible && e.residual.a / e.omega_a < threshold && e.residual.b / e.omega_a < threshold;
}

}  // namespace

TuneResult tune(const CircuitParams& seed, const TuneObjective& obj, const TuneOptions& opt) {
  check_circuit(seed);
  obj.validate();
  if (opt.budget < 5) throw ValidationError("budget", "budget must allow an initial simplex (>= 5)");
  if (!(opt.initial_step > 0.0)) throw ValidationError("initial_step", "initial_step must be positive");

  Search search(seed, obj, opt);
  TuneResult result;

  double step = opt.initial_step;
  while (!search.exhausted()) {
    const int before = search.count();
    simplex(search, search.count() == 0 ? search.clamp(seed.c_couple) : search.best().x, step);
    if (search.count() == before) break;
    step = std::max(step * 0.1, 1e-7);
  }

  result.seed = search.first_evaluation();
  result.best = search.best_evaluation();
  result.params = search.params(search.best().x);
  if (result.best.feasible) result.params = solve_josephson_energies(result.params, derive_constants(result.params));
  result.evaluations = search.count();
  result.trace = std::move(search.trace());
  result.converged = routed(result.best, opt.threshold);

  std::ostringstream r;
  r << "objective " << sci(result.best.objective) << " (seed " << sci(result.seed.objective) << ")\n";
  r << "routing residual r_a/omega_a " << sci(result.best.residual.a / result.best.omega_a) << ", r_b/omega_a "
    << sci(result.best.residual.b / result.best.omega_a) << ", threshold " << sci(opt.threshold) << "\n";
  r << "evaluations " << result.evaluations << " of " << opt.budget << "\n";
  if (!result.converged) r << "not converged: routing residual above threshold after the evaluation budget\n";
  result.report = r.str();
  return result;
}

CircuitParams polish_routing(const CircuitParams& p, const ModelOptions& opt, int max_iterations) {
  ModelOptions mo = opt;
  const auto mismatch = [&](const CircuitParams& q) {
    const RoutingMismatch d = routing_mismatch(build_model(q, mo));
    return Eigen::Vector2d(d.a, d.b);
  };
  CircuitParams x = p;
  x.ej_transmon = 0.0;
  x.ej_squid = {};
  Eigen::Vector2d f = mismatch(x);
  const double scale = omega_a(build_model(x, mo));
  for (int it = 0; it < max_iterations && f.cwiseAbs().maxCoeff() > 1e-15 * scale; ++it) {
    Eigen::Matrix2d jac;
    for (int col = 0; col < 2; ++col) {
      CircuitParams y = x;
      const int k = index(col == 0 ? Squid::s3a : Squid::s3b);
      const double h = 1e-7 * y.c_couple[k];
      y.c_couple[k] += h;
      jac.col(col) = (mismatch(y) - f) / h;
    }
    const Eigen::Vector2d delta = jac.fullPivLu().solve(-f);
    double t = 1.0;
    for (;;) {
      CircuitParams y = x;
      y.c_couple[index(Squid::s3a)] += t * delta(0);
      y.c_couple[index(Squid::s3b)] += t * delta(1);
      try {
        const Eigen::Vector2d g = mismatch(y);
        if (g.norm() < f.norm() || t < 1e-6) {
          x = y;
          f = g;
          break;
        }
      } catch (const Error&) {
        if (t < 1e-6) throw;
      }
      t *= 0.5;
    }
  }
  if (f.cwiseAbs().maxCoeff() > 1e-12 * scale) throw ConvergenceError("routing polish did not converge");
  return solve_josephson_energies(x, derive_constants(x));
}

}  // namespace qrouter
