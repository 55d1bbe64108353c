#include "qrouter/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qrouter/error.hpp"

namespace qrouter {

namespace {

constexpr double steps_per_period = 50.0;
constexpr double window_lifetimes = 20.0;
constexpr double max_condition = 1e8;
constexpr std::int64_t reseed_interval = 1024;
constexpr double passivity_tolerance = 1e-4;

std::vector<double> lifetimes_in(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse) {
  std::vector<double> taus{pulse.duration()};
  if (ctx == Condition::gs) {
    taus.push_back(m.tau.t1);
    taus.push_back(m.tau.t3);
  }
  taus.push_back(m.tau.a);
  taus.push_back(m.tau.b);
  std::erase_if(taus, [](double t) { return !std::isfinite(t); });
  return taus;
}

// One classical RK4 step of a' = B a + s(t) d with s(t + h/2) = sh s(t), s(t + h) = sf s(t)
// is  a -> R a + s q.  These build q and R stage by stage.
template <class Apply>
Eigen::VectorXcd rk4_drive_response(const Apply& b, const Eigen::VectorXcd& d, double h, complex sh, complex sf) {
  const Eigen::VectorXcd k1 = d;
  const Eigen::VectorXcd k2 = b(0.5 * h * k1) + sh * d;
  const Eigen::VectorXcd k3 = b(0.5 * h * k2) + sh * d;
  const Eigen::VectorXcd k4 = b(h * k3) + sf * d;
  return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class Apply>
Eigen::MatrixXcd rk4_free_map(const Apply& b, int n, double h) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd k1 = b(id);
  const Eigen::MatrixXcd k2 = b(id + 0.5 * h * k1);
  const Eigen::MatrixXcd k3 = b(id + 0.5 * h * k2);
  const Eigen::MatrixXcd k4 = b(id + h * k3);
  return id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Flux each line still receives from state a once the drive has died out:
// a^H X_c a with A^H X_c + X_c A = -k_c^H k_c, solved through its Kronecker form.
std::array<double, 3> free_decay_flux(const Eigen::MatrixXcd& a_mat, const Eigen::MatrixXcd& k,
                                      const Eigen::VectorXcd& a) {
  const int n = static_cast<int>(a_mat.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd op(n * n, n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) op.block(r * n, c * n, n, n) = a_mat(c, r) * id;
    op.block(r * n, r * n, n, n) += a_mat.adjoint();
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(op);
  std::array<double, 3> flux{};
  for (int c = 0; c < 3; ++c) {
    const Eigen::MatrixXcd rhs = -(k.row(c).adjoint() * k.row(c));
    const Eigen::VectorXcd x = lu.solve(Eigen::Map<const Eigen::VectorXcd>(rhs.data(), n * n));
    const Eigen::Map<const Eigen::MatrixXcd> xm(x.data(), n, n);
    flux[c] = (a.adjoint() * xm * a)(0, 0).real();
  }
  return flux;
}

}  // namespace

std::int64_t TimeGrid::steps() const noexcept {
  return static_cast<std::int64_t>(std::llround((t1 - t0) / dt));
}

double GridRequirements::max_step() const noexcept {
  const double period = omega_max > 0.0 ? 2.0 * std::numbers::pi / omega_max : INFINITY;
  return std::min(period, tau_min) / steps_per_period;
}

double GridRequirements::min_window() const noexcept { return window_lifetimes * tau_max; }

GridRequirements grid_requirements(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse) {
  pulse.validate();
  const EquationsOfMotion eom = assemble_eom(m, ctx);
  GridRequirements req;
  req.frame = pulse.center;
  for (int x = 0; x < eom.size(); ++x)
    req.omega_max = std::max(req.omega_max, std::abs(eom.frequencies(x) - pulse.center));
  const std::vector<double> taus = lifetimes_in(m, ctx, pulse);
  req.tau_min = *std::min_element(taus.begin(), taus.end());
  req.tau_max = *std::max_element(taus.begin(), taus.end());
  return req;
}

void check_time_grid(const TimeGrid& grid, const GridRequirements& req) {
  if (!(grid.dt > 0.0)) throw ValidationError("dt", "time step must be positive");
  if (grid.dt > req.max_step() * (1.0 + 1e-12))
    throw ValidationError("dt", "time step " + std::to_string(grid.dt) + " exceeds " + std::to_string(req.max_step()));
  if (grid.t1 - grid.t0 < req.min_window() * (1.0 - 1e-12))
    throw ValidationError("t1", "integration window shorter than " + std::to_string(req.min_window()));
  const std::int64_t n = grid.steps();
  if (n < 2 || n % 2 != 0 || std::abs(n * grid.dt - (grid.t1 - grid.t0)) > 1e-9 * (grid.t1 - grid.t0))
    throw ValidationError("dt", "window must hold an even number of whole steps");
}

TimeGrid make_time_grid(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse, double refinement) {
  if (!(refinement >= 1.0)) throw ValidationError("refinement", "refinement must be >= 1");
  const GridRequirements req = grid_requirements(m, ctx, pulse);
  const double window = req.min_window();
  auto n = static_cast<std::int64_t>(std::ceil(window * refinement / req.max_step()));
  n += n % 2;
  n = std::max<std::int64_t>(n, 2);
  return {0.0, window, window / static_cast<double>(n)};
}

TimeDomainResult time_domain_scatter(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse,
                                     const TimeGrid& grid) {
  const GridRequirements req = grid_requirements(m, ctx, pulse);
  check_time_grid(grid, req);
  const EquationsOfMotion eom = assemble_eom(m, ctx);
  const int n = eom.size();
  const complex i(0.0, 1.0);
  const double h = grid.dt;
  const std::int64_t steps = grid.steps();

  // Rotating frame at req.frame; the input carrier keeps the residual detuning.
  const Eigen::MatrixXcd b = eom.system + i * req.frame * Eigen::MatrixXcd::Identity(n, n);
  const complex rate = -pulse.width - i * (pulse.center - req.frame);
  const complex sh = std::exp(0.5 * h * rate);
  const complex sf = std::exp(h * rate);
  const double amplitude0 = std::sqrt(2.0 * pulse.width);
  const Eigen::MatrixXcd k = eom.coupling.cast<complex>();

  // Propagate in the eigenbasis of B when it is well conditioned; the RK4 map is
  // a polynomial in hB, so this is the same scheme.
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b);
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> vlu(v);
  const Eigen::MatrixXcd vinv = vlu.inverse();
  const bool diagonal = es.info() == Eigen::Success && v.norm() * vinv.norm() < max_condition;

  Eigen::MatrixXcd rmat;
  Eigen::VectorXcd rdiag;
  Eigen::VectorXcd q;
  Eigen::MatrixXcd out;  // maps propagated state to K a
  Eigen::MatrixXcd to_physical;
  if (diagonal) {
    const Eigen::VectorXcd lambda = es.eigenvalues();
    rdiag = rk4_free_map([&](const Eigen::MatrixXcd& x) { return Eigen::MatrixXcd(lambda.asDiagonal() * x); }, n, h)
                .diagonal();
    q = rk4_drive_response([&](const Eigen::VectorXcd& x) { return Eigen::VectorXcd(lambda.cwiseProduct(x)); },
                           vinv * eom.drive, h, sh, sf);
    out = k * v;
    to_physical = v;
    if (rdiag.cwiseAbs().maxCoeff() > 1.0 + 1e-12) throw StabilityError("RK4 step amplifies a decaying mode");
  } else {
    rmat = rk4_free_map([&](const Eigen::MatrixXcd& x) { return Eigen::MatrixXcd(b * x); }, n, h);
    q = rk4_drive_response([&](const Eigen::VectorXcd& x) { return Eigen::VectorXcd(b * x); }, eom.drive, h, sh, sf);
    out = k;
    to_physical = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> rs(rmat, false);
    if (rs.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + 1e-12)
      throw StabilityError("RK4 step amplifies a decaying mode");
  }

  // Hot loop on split real/imaginary arrays.
  const int nn = diagonal ? n : n * n;
  std::vector<double> rr(nn), ri(nn), qr(n), qi(n), orr(3 * n), oi(3 * n), ar(n, 0.0), ai(n, 0.0), tr(n), ti(n);
  for (int x = 0; x < n; ++x) {
    qr[x] = q(x).real();
    qi[x] = q(x).imag();
    for (int c = 0; c < 3; ++c) {
      orr[c * n + x] = out(c, x).real();
      oi[c * n + x] = out(c, x).imag();
    }
    if (diagonal) {
      rr[x] = rdiag(x).real();
      ri[x] = rdiag(x).imag();
    } else {
      for (int y = 0; y < n; ++y) {
        rr[x * n + y] = rmat(x, y).real();
        ri[x * n + y] = rmat(x, y).imag();
      }
    }
  }

  std::array<double, 3> acc{0.0, 0.0, 0.0};
  complex overlap = 0.0;
  double sr = amplitude0;
  double si = 0.0;
  const double fr = sf.real();
  const double fi = sf.imag();

  const auto accumulate = [&](std::int64_t step) {
    const double w = (step == 0 || step == steps) ? 1.0 : (step % 2 == 1 ? 4.0 : 2.0);
    for (int c = 0; c < 3; ++c) {
      // b_out = delta_c1 s - i (out a)
      double yr = 0.0;
      double yi = 0.0;
      for (int x = 0; x < n; ++x) {
        yr += orr[c * n + x] * ar[x] - oi[c * n + x] * ai[x];
        yi += orr[c * n + x] * ai[x] + oi[c * n + x] * ar[x];
      }
      double br = yi;
      double bi = -yr;
      if (c == 0) {
        br += sr;
        bi += si;
        overlap += w * complex(sr * br + si * bi, sr * bi - si * br);
      }
      acc[c] += w * (br * br + bi * bi);
    }
  };

  accumulate(0);
  for (std::int64_t step = 1; step <= steps; ++step) {
    if (diagonal) {
      for (int x = 0; x < n; ++x) {
        const double xr = rr[x] * ar[x] - ri[x] * ai[x] + sr * qr[x] - si * qi[x];
        const double xi = rr[x] * ai[x] + ri[x] * ar[x] + sr * qi[x] + si * qr[x];
        ar[x] = xr;
        ai[x] = xi;
      }
    } else {
      for (int x = 0; x < n; ++x) {
        double xr = sr * qr[x] - si * qi[x];
        double xi = sr * qi[x] + si * qr[x];
        for (int y = 0; y < n; ++y) {
          xr += rr[x * n + y] * ar[y] - ri[x * n + y] * ai[y];
          xi += rr[x * n + y] * ai[y] + ri[x * n + y] * ar[y];
        }
        tr[x] = xr;
        ti[x] = xi;
      }
      ar.swap(tr);
      ai.swap(ti);
    }
    if (step % reseed_interval == 0) {
      const complex s = amplitude0 * std::exp(rate * (static_cast<double>(step) * h));
      sr = s.real();
      si = s.imag();
    } else {
      const double t = sr * fr - si * fi;
      si = sr * fi + si * fr;
      sr = t;
    }
    accumulate(step);
  }

  Eigen::VectorXcd a(n);
  for (int x = 0; x < n; ++x) a(x) = complex(ar[x], ai[x]);

  TimeDomainResult r;
  r.steps = steps;
  const Eigen::VectorXcd left = to_physical * a;
  const std::array<double, 3> tail = free_decay_flux(b, k, left);
  for (int c = 0; c < 3; ++c) r.probability[c] = acc[c] * h / 3.0 + tail[c];
  r.input_weight = 1.0 - std::exp(-2.0 * pulse.width * (grid.t1 - grid.t0));
  r.residual_excitation = left.squaredNorm();
  r.norm_deficit = r.input_weight - (r.probability[0] + r.probability[1] + r.probability[2]);
  r.reflected_overlap = overlap * (h / 3.0) / r.input_weight;
  if (!(r.norm_deficit > -passivity_tolerance)) throw StabilityError("emitted flux exceeds the injected pulse weight");
  return r;
}

OracleReport compare(const RouterModel& m, Condition ctx, const LorentzianPulse& pulse, const PulseOptions& freq_opt,
                     double refinement) {
  PulseOptions opt = freq_opt;
  opt.samples = 0;
  const PulseResult freq = pulse_scatter(m, ctx, ModeKind::even, pulse, opt);
  const TimeDomainResult time = time_domain_scatter(m, ctx, pulse, make_time_grid(m, ctx, pulse, refinement));
  OracleReport r;
  for (int c = 0; c < 3; ++c) {
    r.p_freq[c] = freq.probability[c];
    r.p_time[c] = time.probability[c];
    r.diff[c] = std::abs(r.p_freq[c] - r.p_time[c]);
    r.flagged[c] = r.diff[c] > oracle_tolerance;
    r.max_discrepancy = std::max(r.max_discrepancy, r.diff[c]);
  }
  r.norm_deficit = time.norm_deficit;
  r.steps = time.steps;
  return r;
}

}  // namespace qrouter
