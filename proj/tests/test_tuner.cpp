#include <doctest.h>

#include <random>

#include "qrouter/error.hpp"
#include "qrouter/hilbert.hpp"
#include "qrouter/tuner.hpp"
#include "support.hpp"

using namespace qrouter;

TEST_SUITE("tuner") {
  TEST_CASE("routing residual of an unshifted model is the bare detuning") {
    std::mt19937_64 rng(12);
    RouterModel m = testing::random_model(rng, {});
    m.j = {};
    const RoutingResidual r = routing_residual(m);
    CHECK(r.a == std::abs(m.squid(Squid::s2a) - m.squid(Squid::s3a)));
    CHECK(r.b == std::abs(m.squid(Squid::s2b) - m.squid(Squid::s3b)));
  }

  TEST_CASE("a model built on the routing conditions has zero residual") {
    std::mt19937_64 rng(13);
    RouterModel m = testing::random_model(rng, {});
    m.omega_s[index(Squid::s3a)] = m.squid(Squid::s2a) - m.kerr(Level::t1, Squid::s2a) + m.kerr(Level::t3, Squid::s3a);
    m.omega_s[index(Squid::s3b)] = m.squid(Squid::s2b) - m.kerr(Level::t1, Squid::s2b) + m.kerr(Level::t3, Squid::s3b);
    const RoutingResidual r = routing_residual(m);
    CHECK(r.a < 1e-15);
    CHECK(r.b < 1e-15);
  }

  TEST_CASE("the reference circuit is routed") {
    const RouterModel m = testing::reference_model();
    const RoutingResidual r = routing_residual(m);
    CHECK(r.a / omega_a(m) < 1e-12);
    CHECK(r.b / omega_a(m) < 1e-12);
  }

  TEST_CASE("objective validation") {
    TuneObjective o;
    CHECK_NOTHROW(o.validate());
    o.weights = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(o.validate(), ValidationError);
    o = TuneObjective{};
    o.weights[1] = -1.0;
    CHECK_THROWS_AS(o.validate(), ValidationError);
    o = TuneObjective{};
    o.penalty = 0.0;
    CHECK_THROWS_AS(o.validate(), ValidationError);
  }

  TEST_CASE("short runs from table S1 improve, stay feasible and repeat exactly") {
    TuneOptions opt;
    opt.budget = 150;
    const TuneResult a = tune(CircuitParams{}, TuneObjective{}, opt);
    const TuneResult b = tune(CircuitParams{}, TuneObjective{}, opt);
    CHECK(a.evaluations == 150);
    CHECK(a.best.objective >= a.seed.objective);
    CHECK(a.params.c_couple == b.params.c_couple);
    CHECK(a.best.objective == b.best.objective);
    REQUIRE(a.trace.size() == b.trace.size());
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK(a.trace[i].couplings == b.trace[i].couplings);
      CHECK(a.trace[i].best >= previous);
      previous = a.trace[i].best;
      CircuitParams p;
      p.c_couple = a.trace[i].couplings;
      CHECK_NOTHROW(check_circuit(p));
    }
    CHECK_NOTHROW(check_circuit(a.params));
    CHECK(a.params.has_josephson());
  }

  TEST_CASE("an exhausted budget attaches a non-convergence report") {
    TuneOptions opt;
    opt.budget = 6;
    const TuneResult r = tune(CircuitParams{}, TuneObjective{}, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.report.find("not converged") != std::string::npos);
    opt.budget = 4;
    CHECK_THROWS_AS(tune(CircuitParams{}, TuneObjective{}, opt), ValidationError);
  }

  TEST_CASE("polish drives both mismatches to zero") {
    const RunConfig cfg = testing::reference_config();
    CircuitParams p = cfg.circuit;
    p.c_couple[index(Squid::s3a)] *= 1.01;
    p.c_couple[index(Squid::s3b)] *= 0.99;
    const CircuitParams q = polish_routing(p, cfg.model);
    const RouterModel m = build_model(q, cfg.model);
    CHECK(routing_residual(m).a / omega_a(m) < 1e-12);
    CHECK(routing_residual(m).b / omega_a(m) < 1e-12);
  }
}
