#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qrouter/circuit.hpp"
#include "qrouter/error.hpp"
#include "qrouter/hilbert.hpp"
#include "qrouter/scattering.hpp"
#include "support.hpp"

using namespace qrouter;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

RouterModel table_s1_model(double gamma_d = 0.0) {
  ModelOptions opt;
  opt.gamma_d = gamma_d;
  return build_model(CircuitParams{}, opt);
}

double total_probability(const Eigen::Vector3cd& s) { return s.squaredNorm(); }

std::vector<double> spanning_frequencies(const EquationsOfMotion& eom, int count) {
  const double lo = eom.frequencies.minCoeff() - 1.0;
  const double hi = eom.frequencies.maxCoeff() + 1.0;
  std::vector<double> k;
  for (int i = 0; i < count - eom.size(); ++i) k.push_back(lo + (hi - lo) * i / (count - eom.size() - 1));
  for (int x = 0; x < eom.size(); ++x) k.push_back(eom.frequencies(x));
  return k;
}

// Line membership per amplitude, transcribed from the amplitude equations.
struct Row {
  double omega;
  double tau;
  bool line2;
  bool line3;
};

std::vector<Row> transcription(const RouterModel& m, Condition ctx) {
  std::vector<Row> rows;
  if (ctx == Condition::gs) {
    rows.push_back({m.transmon(Level::t1), m.tau.t1, false, false});
    rows.push_back({m.transmon(Level::t3), m.tau.t3, false, false});
  }
  const Level l = level_of(ctx);
  rows.push_back({m.squid(Squid::s2a) - m.kerr(l, Squid::s2a), m.tau.a, true, false});
  rows.push_back({m.squid(Squid::s2b) - m.kerr(l, Squid::s2b), m.tau.b, true, false});
  rows.push_back({m.squid(Squid::s3a) - m.kerr(l, Squid::s3a), m.tau.a, false, true});
  rows.push_back({m.squid(Squid::s3b) - m.kerr(l, Squid::s3b), m.tau.b, false, true});
  return rows;
}

}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("absorber diagonal carries twice the inverse lifetime") {
    const RouterModel m = table_s1_model(0.02);
    const EquationsOfMotion eom = assemble_eom(m, Condition::gs);
    CHECK(eom.labels[2] == "2a");
    const complex expected(-(2.0 / m.tau.a + 0.75 * m.gamma_d), -m.squid(Squid::s2a));
    CHECK(std::abs(eom.system(2, 2) - expected) < 1e-14);
    CHECK(std::abs(eom.system(0, 0) - complex(-(1.0 / m.tau.t1 + 0.75 * m.gamma_d), -m.transmon(Level::t1))) <
          1e-14);
  }

  TEST_CASE("system matrix matches the transcribed coefficients") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Condition ctx : {Condition::gs, Condition::t1, Condition::t3}) {
      RouterModel m = testing::random_model(rng, {500 + 500 * u(rng), 500 + 500 * u(rng), 5 + 5 * u(rng), 5 + 5 * u(rng)});
      m.gamma_d = 0.01 * u(rng);
      const EquationsOfMotion eom = assemble_eom(m, ctx);
      const auto rows = transcription(m, ctx);
      REQUIRE(eom.size() == static_cast<int>(rows.size()));
      for (std::size_t x = 0; x < rows.size(); ++x) {
        for (std::size_t y = 0; y < rows.size(); ++y) {
          double shared = 2.0 / std::sqrt(rows[x].tau * rows[y].tau);  // line 1
          if ((rows[x].line2 && rows[y].line2) || (rows[x].line3 && rows[y].line3))
            shared += 2.0 / std::sqrt(rows[x].tau * rows[y].tau);
          complex expected = -0.5 * shared;
          if (x == y) expected += complex(-0.75 * m.gamma_d, -rows[x].omega);
          CHECK(std::abs(eom.system(x, y) - expected) < 1e-13);
        }
        CHECK(std::abs(eom.drive(x) - complex(0.0, -std::sqrt(2.0 / rows[x].tau))) < 1e-14);
      }
    }
  }

  TEST_CASE("infinite lifetimes decouple the amplitudes") {
    RouterModel m = table_s1_model();
    m.tau = {1000.0, inf, inf, inf};
    const EquationsOfMotion eom = assemble_eom(m, Condition::gs);
    const Eigen::MatrixXcd off = eom.system - Eigen::MatrixXcd(eom.system.diagonal().asDiagonal());
    CHECK(off.norm() == 0.0);
  }

  TEST_CASE("even response matches the independent linear solve") {
    // Frozen from tools/reference_values.py: GS, default lifetimes, gamma_d = 0.01.
    const RouterModel m = table_s1_model(0.01);
    const EquationsOfMotion eom = assemble_eom(m, Condition::gs);
    const Eigen::Vector3cd s1 = even_response(eom, m.squid(Squid::s2a));
    CHECK(std::abs(s1(0) - complex(-0.298971765309233, 0.0454362245833638)) < 1e-9);
    CHECK(std::abs(s1(1) - complex(0.652586929069541, 0.0396555896203104)) < 1e-9);
    CHECK(std::abs(s1(2) - complex(0.646375197554178, -0.0849453948073417)) < 1e-9);
    const Eigen::Vector3cd s2 = even_response(eom, 1.0);
    CHECK(std::abs(s2(0) - complex(-0.261076355679887, -0.0948717616738929)) < 1e-9);
    CHECK(std::abs(s2(1) - complex(0.577347697167548, 0.135134390738755)) < 1e-9);
    CHECK(std::abs(s2(2) - complex(0.683748402578973, -0.0401076015845919)) < 1e-9);
  }

  TEST_CASE("lossless resonant reflection at T1 is minus one") {
    const RouterModel m = table_s1_model();
    const complex s = single_photon_s(m, Condition::gs, {1, ModeKind::even, m.transmon(Level::t1)}, 1);
    CHECK(std::abs(s - complex(-1.0)) < 1e-4);
  }

  TEST_CASE("odd modes pass freely") {
    const RouterModel m = table_s1_model(0.05);
    for (double k : {0.5, 0.97, 7.19, 30.0}) {
      CHECK(single_photon_s(m, Condition::gs, {1, ModeKind::odd, k}, 1) == complex(1.0));
      CHECK(single_photon_s(m, Condition::t1, {1, ModeKind::odd, k}, 2) == complex(0.0));
    }
  }

  TEST_CASE("far detuned input passes nearly unchanged") {
    const RouterModel m = testing::reference_model();
    const double k = m.transmon(Level::t1) + 100.0 / m.tau.t1;
    const complex s = single_photon_s(m, Condition::gs, {1, ModeKind::even, k}, 1);
    CHECK(std::abs(s - 1.0) < 0.05);
  }

  TEST_CASE("photons enter on line 1 only") {
    const RouterModel m = table_s1_model();
    CHECK_THROWS_AS(single_photon_s(m, Condition::gs, {2, ModeKind::even, 1.0}, 1), UnsupportedInput);
    CHECK_THROWS_AS(single_photon_s(m, Condition::gs, {1, ModeKind::even, 1.0}, 4), UnsupportedInput);
  }

  TEST_CASE("analytic line shapes") {
    CHECK(analytic_lineshape(Lineshape::even_t1, 0.0) == complex(-1.0));
    CHECK(analytic_lineshape(Lineshape::cond_2, 0.0) == complex(1.0));
    CHECK(std::abs(analytic_lineshape(Lineshape::right_t1, 4.0 / 3.0) - complex(-0.5)) < 1e-15);
    CHECK_THROWS_AS(analytic_lineshape(Lineshape::even_t1, -0.1), ValidationError);
  }

  TEST_CASE("isolated T1 resonance follows the analytic shapes") {
    RouterModel m = table_s1_model();
    m.tau = {1000.0, inf, inf, inf};
    for (double x : {0.0, 0.01, 0.1, 1.0}) {
      m.gamma_d = x / m.tau.t1;
      const Eigen::Vector3cd even = even_response(assemble_eom(m, Condition::gs), m.transmon(Level::t1));
      CHECK(std::abs(even(0) - analytic_lineshape(Lineshape::even_t1, x)) < 1e-6);
      CHECK(std::abs(directional_response(even).reflected - analytic_lineshape(Lineshape::right_t1, x)) < 1e-6);
    }
  }

  TEST_CASE("lossless scattering is unitary in every context") {
    const RouterModel m = table_s1_model();
    for (Condition ctx : {Condition::gs, Condition::t1, Condition::t3}) {
      const EquationsOfMotion eom = assemble_eom(m, ctx);
      for (double k : spanning_frequencies(eom, 50)) CHECK(std::abs(total_probability(even_response(eom, k)) - 1.0) < 1e-6);
    }
  }

  TEST_CASE("amplitudes stay bounded on the resonance grid") {
    const RouterModel m = table_s1_model();
    GridPolicy policy;
    policy.points_per_window = 101;
    for (ModeKind kind : {ModeKind::even, ModeKind::right, ModeKind::odd}) {
      for (const ScatteringAmplitude& a : scan(m, Condition::gs, kind, resonance_grid(assemble_eom(m, Condition::gs), policy)))
        for (const complex& s : a.amplitude) CHECK(std::norm(s) <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("resonance grid is sorted, merged and spans every window") {
    const RouterModel m = table_s1_model();
    const EquationsOfMotion eom = assemble_eom(m, Condition::gs);
    GridPolicy policy;
    policy.points_per_window = 11;
    const auto grid = resonance_grid(eom, policy);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(std::adjacent_find(grid.begin(), grid.end()) == grid.end());
    const Eigen::VectorXd widths = eom.linewidths();
    for (int x = 0; x < eom.size(); ++x) {
      CHECK(grid.front() <= eom.frequencies(x) - 50.0 * widths(x) + 1e-12);
      CHECK(grid.back() >= eom.frequencies(x) + 50.0 * widths(x) - 1e-12);
      CHECK(std::find_if(grid.begin(), grid.end(), [&](double p) { return std::abs(p - eom.frequencies(x)) < 1e-12; }) !=
            grid.end());
    }
  }

  TEST_CASE("mode transform round trip") {
    const ModeGrid right{{1.0}, {complex(1.0)}};
    const ModeGrid left{{-1.0}, {complex(0.0)}};
    const ModePair eo = to_even_odd(right, left);
    CHECK(std::abs(eo.first.amplitude[0] - complex(M_SQRT1_2)) < 1e-15);
    CHECK(std::abs(eo.second.amplitude[0] - complex(M_SQRT1_2)) < 1e-15);

    const ModePair same = to_even_odd(ModeGrid{{2.0}, {complex(0.3, 0.4)}}, ModeGrid{{-2.0}, {complex(0.3, 0.4)}});
    CHECK(std::abs(same.second.amplitude[0]) == 0.0);

    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    ModeGrid r, l;
    for (int i = 0; i < 20; ++i) {
      const double p = 0.1 * i;
      r.p.push_back(p);
      l.p.push_back(-p);
      r.amplitude.emplace_back(g(rng), g(rng));
      l.amplitude.emplace_back(g(rng), g(rng));
    }
    const ModePair even_odd = to_even_odd(r, l);
    const ModePair back = to_right_left(even_odd.first, even_odd.second);
    for (int i = 0; i < 20; ++i) {
      CHECK(std::abs(back.first.amplitude[i] - r.amplitude[i]) < 1e-12);
      CHECK(std::abs(back.second.amplitude[i] - l.amplitude[i]) < 1e-12);
      CHECK(back.second.p[i] == l.p[i]);
    }
    l.p[3] += 0.01;
    CHECK_THROWS_AS(to_even_odd(r, l), GridMismatch);
  }

  TEST_CASE("conditional routing on a routed model") {
    const RouterModel m = testing::reference_model();
    const double wa = m.squid(Squid::s2a) - m.kerr(Level::t1, Squid::s2a);
    for (double x : {0.0, 0.1}) {
      RouterModel g = m;
      g.gamma_d = x / g.tau.a;
      const Eigen::Vector3cd t1 = even_response(assemble_eom(g, Condition::t1), wa);
      const Eigen::Vector3cd t3 = even_response(assemble_eom(g, Condition::t3), wa);
      CHECK(std::norm(t1(2)) < 1e-4);
      CHECK(std::norm(t1(1)) > 0.9);
      CHECK(std::norm(t3(1)) < 1e-4);
      CHECK(std::norm(t3(2)) > 0.9);
      CHECK(std::abs(std::abs(t1(1)) - std::abs(t3(2))) < 1e-6);
    }
  }
}
