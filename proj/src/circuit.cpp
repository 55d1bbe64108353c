#include "qrouter/circuit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "qrouter/error.hpp"

namespace qrouter {

namespace {

constexpr std::array<const char*, 4> branch_names{"c2a", "c2b", "c3a", "c3b"};
constexpr std::array<const char*, 4> couple_names{"c2sa", "c2sb", "c3sa", "c3sb"};

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

double capacitance_sum(const CircuitParams& p) {
  double s = p.c1 + p.ct;
  for (int k = 0; k < 4; ++k) {
    s += p.c_branch[k] * p.c_couple[k] / (p.c_branch[k] + p.c_couple[k]);
  }
  return s;
}

// Lowering operator on a Fock space of dimension n.
Eigen::MatrixXd lowering(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
  return a;
}

constexpr int basis_padding = 8;

}  // namespace

bool CircuitParams::has_josephson() const noexcept {
  if (ej_transmon <= 0.0) return false;
  for (double e : ej_squid)
    if (e <= 0.0) return false;
  return true;
}

void check_circuit(const CircuitParams& p) {
  if (!positive(p.c1)) throw ConstraintViolation("c1", "c1", "c1 must be positive");
  if (!positive(p.ct)) throw ConstraintViolation("ct", "ct", "ct must be positive");
  for (int k = 0; k < 4; ++k) {
    if (!positive(p.c_branch[k]))
      throw ConstraintViolation(branch_names[k], branch_names[k],
                                std::string(branch_names[k]) + " must be positive");
    if (!positive(p.c_couple[k]))
      throw ConstraintViolation(couple_names[k], couple_names[k],
                                std::string(couple_names[k]) + " must be positive");
  }
  if (p.alpha && !positive(*p.alpha)) throw ConstraintViolation("alpha", "alpha", "alpha must be positive");

  std::string smallest = "c1";
  double limit = p.c1;
  for (int k = 0; k < 4; ++k) {
    if (p.c_branch[k] < limit) {
      limit = p.c_branch[k];
      smallest = branch_names[k];
    }
  }
  for (int k = 0; k < 4; ++k) {
    if (!(p.c_couple[k] < limit)) {
      throw ConstraintViolation(couple_names[k], smallest,
                                std::string(couple_names[k]) + " must be smaller than " + smallest);
    }
  }
}

double alpha_cancellation(const CircuitParams& p) {
  check_circuit(p);
  const double csum = capacitance_sum(p);
  return csum * csum * csum * flux_quantum * flux_quantum / (324.0 * p.ct);
}

DerivedConstants derive_constants(const CircuitParams& p) {
  check_circuit(p);
  DerivedConstants d;
  const double phi2 = flux_quantum * flux_quantum;
  d.phi0 = flux_quantum;
  d.csum = capacitance_sum(p);
  d.e_t = 1.0 / (8.0 * d.csum * phi2);
  d.alpha = p.alpha.value_or(alpha_cancellation(p));
  d.beta = 6.0 * p.ct * d.alpha;
  d.ej_total = 3.0 * d.csum * d.csum / d.beta;
  for (int k = 0; k < 4; ++k) {
    d.participation[k] = p.c_couple[k] / (p.c_branch[k] + p.c_couple[k]);
    d.e_squid[k] = 1.0 / (8.0 * p.c_couple[k] * phi2);
  }
  return d;
}

CircuitParams solve_josephson_energies(CircuitParams p, const DerivedConstants& d) {
  Eigen::Matrix<double, 5, 5> a = Eigen::Matrix<double, 5, 5>::Zero();
  Eigen::Matrix<double, 5, 1> rhs = Eigen::Matrix<double, 5, 1>::Zero();
  a.row(0).setOnes();
  rhs(0) = d.ej_total;
  for (int k = 0; k < 4; ++k) {
    a(k + 1, 0) = -1.0;
    a(k + 1, k + 1) = d.e_squid[k];
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 5, 5>> lu(a);
  if (!lu.isInvertible()) throw InfeasibleConstraint(INFINITY, "Josephson constraints are singular");
  const Eigen::Matrix<double, 5, 1> x = lu.solve(rhs);

  p.ej_transmon = x(0);
  for (int k = 0; k < 4; ++k) p.ej_squid[k] = x(k + 1);
  const JosephsonResiduals r = josephson_residuals(p, d);
  bool feasible = r.max() < 1e-10;
  for (int i = 0; i < 5; ++i) feasible = feasible && x(i) > 0.0;
  if (!feasible) {
    throw InfeasibleConstraint(r.max(), "no positive Josephson energies satisfy the constraints (residual " +
                                            std::to_string(r.max()) + ")");
  }
  return p;
}

double JosephsonResiduals::max() const noexcept {
  double m = sum_rule;
  for (double r : products) m = std::max(m, r);
  return m;
}

JosephsonResiduals josephson_residuals(const CircuitParams& p, const DerivedConstants& d) {
  JosephsonResiduals r;
  double total = p.ej_transmon;
  for (double e : p.ej_squid) total += e;
  r.sum_rule = std::abs(total - d.ej_total) / d.ej_total;
  const double scale = std::abs(p.ej_transmon) > 0.0 ? std::abs(p.ej_transmon) : INFINITY;
  for (int k = 0; k < 4; ++k) {
    r.products[k] = std::isinf(scale) ? INFINITY
                                      : std::abs(p.ej_squid[k] * d.e_squid[k] - p.ej_transmon) / scale;
  }
  return r;
}

double TransmonCouplings::lifetime_ratio() const noexcept { return (g_t1 / g_t3) * (g_t1 / g_t3); }

double TransmonCouplings::cascade_t2t1(double tau_t1, double tau_t3) noexcept {
  return std::sqrt(2.0 / tau_t1) - std::sqrt(3.0 / tau_t3);
}

double TransmonCouplings::cascade_t3t2(double tau_t1, double tau_t3) noexcept {
  return std::sqrt(3.0 / tau_t1) - 3.0 * std::sqrt(2.0 / tau_t3);
}

TransmonCouplings assemble_transmon_couplings(const DerivedConstants& d) {
  const double pz2 = std::sqrt(d.ej_total / (2.0 * d.e_t)) / (4.0 * d.phi0 * d.phi0);
  const double expansion_ratio = -d.beta * pz2 / (3.0 * d.csum * d.csum * d.csum);
  // Normalization fixed so that alpha_cancellation zeroes <3|O|2>.
  const double rho = std::sqrt(8.0) * expansion_ratio;

  const Eigen::MatrixXd a = lowering(6);
  const Eigen::MatrixXd x = a - a.transpose();
  const Eigen::MatrixXd q = x - rho * x * x * x;

  TransmonCouplings c;
  c.cubic_ratio = rho;
  c.g_t1 = -q(1, 0);
  c.g_t3 = -q(3, 0);
  c.g_t2t1 = -q(2, 1);
  c.g_t3t2 = -q(3, 2);
  return c;
}

TransmonParams TransmonParams::from(const DerivedConstants& d) noexcept {
  return {d.csum, d.beta, d.ej_total, d.e_t, d.phi0};
}

TransmonSpectrum transmon_spectrum(const TransmonParams& t, const SpectrumOptions& opt) {
  if (opt.basis_size < 10) throw ValidationError("basis_size", "basis_size must be at least 10");
  if (opt.cosine_order != 2 && opt.cosine_order != 4)
    throw UnsupportedInput("cosine_order must be 2 or 4");

  const int n = opt.basis_size;
  const int m = n + basis_padding;
  const Eigen::MatrixXd a = lowering(m);
  const Eigen::MatrixXd y = a - a.transpose();
  const Eigen::MatrixXd x = a + a.transpose();

  const double pz = std::pow(t.ej_total / (2.0 * t.e_t), 0.25) / (2.0 * t.phi0);
  const double fz = std::pow(2.0 * t.e_t / t.ej_total, 0.25);

  const Eigen::MatrixXd p2 = -(pz * pz) * (y * y);
  const Eigen::MatrixXd p4 = p2 * p2;
  const Eigen::MatrixXd p6 = p4 * p2;
  const Eigen::MatrixXd f2 = (fz * fz) * (x * x);

  const double g = t.csum;
  const double c2 = -t.beta / (12.0 * std::pow(g, 4));
  const double c3 = t.beta * t.beta / (18.0 * std::pow(g, 7));
  const double c4 = -t.beta * t.beta * t.beta / (18.0 * std::pow(g, 10));

  Eigen::MatrixXd h = p2 / (2.0 * g) + t.ej_total * 0.5 * f2;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  if (opt.kinetic_nonlinearity) {
    h += c2 * p4 + c3 * p6;
    w = 6.0 * c2 * p2 + 15.0 * c3 * p4 + 28.0 * c4 * p6;
  }
  if (opt.cosine_order == 4) h -= t.ej_total * (f2 * f2) / 24.0;

  const Eigen::MatrixXd hn = h.topLeftCorner(n, n);
  const Eigen::MatrixXd wn = w.topLeftCorner(n, n);

  TransmonSpectrum s;
  if (opt.diagonalize) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hn);
    if (es.info() != Eigen::Success) throw ConvergenceError("transmon diagonalization failed");
    const Eigen::VectorXd& e = es.eigenvalues();
    for (int i = 0; i < 3; ++i) s.levels[i] = e(i + 1) - e(0);
    for (int i = 0; i < 4; ++i) {
      const auto v = es.eigenvectors().col(i);
      s.kerr_moment[i] = v.dot(wn * v);
    }
  } else {
    for (int i = 0; i < 3; ++i) s.levels[i] = hn(i + 1, i + 1) - hn(0, 0);
    for (int i = 0; i < 4; ++i) s.kerr_moment[i] = wn(i, i);
  }
  return s;
}

RouterModel derive_model(const CircuitParams& p, const ModelOptions& opt) {
  const DerivedConstants d = derive_constants(p);
  const JosephsonResiduals r = josephson_residuals(p, d);
  if (!(r.max() < 1e-10)) {
    throw InfeasibleConstraint(r.max(), "Josephson energies do not satisfy the constraints");
  }

  SpectrumOptions so;
  so.basis_size = opt.basis_size;
  const TransmonParams tp = TransmonParams::from(d);
  const TransmonSpectrum s = transmon_spectrum(tp, so);
  if (opt.check_convergence) {
    so.basis_size = opt.basis_size + 5;
    const TransmonSpectrum s5 = transmon_spectrum(tp, so);
    for (int i = 0; i < 3; ++i) {
      const double change = std::abs(s5.levels[i] - s.levels[i]) / std::abs(s.levels[i]);
      if (change > 1e-6) {
        throw ConvergenceError("transmon level T" + std::to_string(i + 1) + " changes by " +
                               std::to_string(change) + " between basis sizes " +
                               std::to_string(opt.basis_size) + " and " + std::to_string(opt.basis_size + 5));
      }
    }
  }

  RouterModel m;
  m.omega_t = s.levels;
  const double plasma = std::sqrt(8.0 * d.ej_total * d.e_t);
  const double shift_scale = 2.0 * d.phi0 * d.phi0 * std::sqrt(2.0 * d.ej_total * d.e_t);
  for (int k = 0; k < 4; ++k) {
    const double f = d.participation[k];
    const double coupling = f * p.ej_squid[k] / shift_scale;
    m.omega_s[k] = f * plasma + coupling * s.kerr_moment[0];
    for (int i = 0; i < 3; ++i) m.j[i][k] = -coupling * (s.kerr_moment[i + 1] - s.kerr_moment[0]);
  }
  m.tau = opt.tau;
  m.gamma_d = opt.gamma_d;
  m.validate();
  return m;
}

RouterModel build_model(const CircuitParams& p, const ModelOptions& opt) {
  const DerivedConstants d = derive_constants(p);
  return derive_model(solve_josephson_energies(p, d), opt);
}

}  // namespace qrouter
