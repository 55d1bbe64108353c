#include "qrouter/commands.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "format.hpp"
#include "qrouter/error.hpp"

namespace qrouter {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 6> command_names{{
    {Command::derive, "derive"},
    {Command::scatter, "scatter"},
    {Command::table1, "table1"},
    {Command::table2, "table2"},
    {Command::tune, "tune"},
    {Command::oracle_check, "oracle-check"},
}};

void write_key(std::ostream& os, std::string_view key, double v) { os << key << " = " << exact(v) << "\n"; }

void write_lifetimes(std::ostream& os, const Lifetimes& tau, double gamma_d) {
  write_key(os, "tau_t1", tau.t1);
  write_key(os, "tau_t3", tau.t3);
  write_key(os, "tau_a", tau.a);
  write_key(os, "tau_b", tau.b);
  write_key(os, "gamma_d", gamma_d);
}

void write_settings(std::ostream& os, const RunConfig& cfg) {
  os << "\n[pulse]\n";
  write_key(os, "bandwidth_ratio", cfg.table.bandwidth_ratio);
  write_key(os, "abs_tol", cfg.table.pulse.abs_tol);
  os << "\n[grid]\n";
  os << "points_per_window = " << cfg.grid.points_per_window << "\n";
  write_key(os, "halfwidth_factor", cfg.grid.halfwidth_factor);
}

std::string_view mode_name(ModeKind k) {
  switch (k) {
    case ModeKind::even:
      return "even";
    case ModeKind::odd:
      return "odd";
    case ModeKind::right:
      return "right";
    case ModeKind::left:
      return "left";
  }
  return {};
}

double target_width(const RouterModel& m, Condition ctx, std::string_view label) {
  const EquationsOfMotion eom = assemble_eom(m, ctx);
  for (int x = 0; x < eom.size(); ++x)
    if (eom.labels[x] == label) return eom.linewidths()(x);
  throw ValidationError(std::string(label), "no resonance labelled " + std::string(label));
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& [cmd, text] : command_names)
    if (text == name) return cmd;
  return std::nullopt;
}

std::string_view command_name(Command c) noexcept {
  for (const auto& [cmd, text] : command_names)
    if (cmd == c) return text;
  return {};
}

std::string model_document(const RouterModel& m, const RunConfig& cfg) {
  std::ostringstream os;
  os << "[direct]\n";
  for (int i = 0; i < 3; ++i) write_key(os, "omega_t" + std::to_string(i + 1), m.omega_t[i]);
  for (Squid s : all_squids) write_key(os, "omega_" + std::string(squid_name(s)), m.squid(s));
  for (int i = 0; i < 3; ++i)
    for (Squid s : all_squids)
      write_key(os, "j_" + std::to_string(i + 1) + "_" + std::string(squid_name(s)), m.j[i][index(s)]);
  write_lifetimes(os, m.tau, m.gamma_d);
  write_settings(os, cfg);
  return os.str();
}

std::string table_csv(const Table& t) {
  std::ostringstream os;
  os << t.corner;
  for (const auto& c : t.columns) os << "," << c;
  os << "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << t.rows[r];
    for (double v : t.values[r]) os << "," << sci(v);
    os << "\n";
  }
  return os.str();
}

std::string scatter_csv(const RouterModel& m, Condition ctx, ModeKind kind, const GridPolicy& grid) {
  const auto amplitudes = scan(m, ctx, kind, resonance_grid(assemble_eom(m, ctx), grid));
  std::ostringstream os;
  for (const ScatteringAmplitude& a : amplitudes) {
    if (a.out_channel > 1) os << "\n";
    os << "# context " << condition_name(ctx) << ", " << mode_name(kind) << " input, out_channel "
       << a.out_channel << "\n";
    os << "p_GHz,re_S,im_S,abs2\n";
    for (std::size_t i = 0; i < a.p.size(); ++i) {
      const complex s = a.amplitude[i];
      os << sci(a.p[i] / (2.0 * std::numbers::pi)) << "," << sci(s.real()) << "," << sci(s.imag()) << ","
         << sci(std::norm(s)) << "\n";
    }
  }
  return os.str();
}

std::string circuit_document(const CircuitParams& p, const RunConfig& cfg) {
  std::ostringstream os;
  os << "[circuit]\n";
  write_key(os, "c1", p.c1);
  write_key(os, "ct", p.ct);
  const char* branch[] = {"c2a", "c2b", "c3a", "c3b"};
  const char* couple[] = {"c2sa", "c2sb", "c3sa", "c3sb"};
  const char* ej[] = {"ej2a", "ej2b", "ej3a", "ej3b"};
  for (int k = 0; k < 4; ++k) write_key(os, branch[k], p.c_branch[k]);
  for (int k = 0; k < 4; ++k) write_key(os, couple[k], p.c_couple[k]);
  if (p.alpha) write_key(os, "alpha", *p.alpha);
  if (p.has_josephson()) {
    write_key(os, "ejt", p.ej_transmon);
    for (int k = 0; k < 4; ++k) write_key(os, ej[k], p.ej_squid[k]);
  }
  os << "basis_size = " << cfg.model.basis_size << "\n";
  write_lifetimes(os, cfg.model.tau, cfg.model.gamma_d);
  write_settings(os, cfg);
  return os.str();
}

std::string tune_document(const TuneResult& r, const RunConfig& cfg) {
  std::ostringstream os;
  os << circuit_document(r.params, cfg);
  os << "\n";
  std::istringstream report(r.report);
  for (std::string line; std::getline(report, line);) os << "# " << line << "\n";
  os << "# trace\n# evaluation,c2sa,c2sb,c3sa,c3sb,objective,best\n";
  for (const TraceEntry& t : r.trace) {
    os << "# " << t.evaluation;
    for (double c : t.couplings) os << "," << sci(c);
    os << "," << sci(t.objective) << "," << sci(t.best) << "\n";
  }
  return os.str();
}

std::vector<OracleCase> oracle_cases(const RouterModel& m, const PulseOptions& opt) {
  std::vector<OracleCase> cases;
  cases.push_back({"omega_T1", Condition::gs, {m.transmon(Level::t1), target_width(m, Condition::gs, "T1")}, {}});
  cases.push_back({"omega_a", Condition::t1, {omega_a(m), target_width(m, Condition::t1, "2a")}, {}});
  for (OracleCase& c : cases) c.report = compare(m, c.context, c.pulse, opt);
  return cases;
}

std::string oracle_report(const std::vector<OracleCase>& cases) {
  std::ostringstream os;
  os << "pulse,context,center,width,channel,p_freq,p_time,diff,flagged\n";
  double worst = 0.0;
  for (const OracleCase& c : cases) {
    for (int ch = 0; ch < 3; ++ch) {
      os << c.label << "," << condition_name(c.context) << "," << sci(c.pulse.center) << "," << sci(c.pulse.width)
         << ",line" << ch + 1 << "," << sci(c.report.p_freq[ch]) << "," << sci(c.report.p_time[ch]) << ","
         << sci(c.report.diff[ch]) << "," << (c.report.flagged[ch] ? "yes" : "no") << "\n";
    }
    worst = std::max(worst, c.report.max_discrepancy);
  }
  os << "\n";
  for (const OracleCase& c : cases)
    os << "# " << c.label << ": steps " << c.report.steps << ", norm_deficit " << sci(c.report.norm_deficit) << "\n";
  os << "# max_discrepancy " << sci(worst) << ", tolerance " << sci(oracle_tolerance) << "\n";
  return os.str();
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string stage = "cli run_command";
  const auto fail = [&](int code, const std::exception& e) {
    err << "qrouter " << command_name(cmd) << ": " << stage << ": " << e.what() << "\n";
    return code;
  };
  try {
    const auto model = [&] {
      stage = cfg.mode == RunConfig::Mode::circuit ? "circuit derive_model" : "cli resolve_model";
      return resolve_model(cfg);
    };
    switch (cmd) {
      case Command::derive: {
        const RouterModel m = model();
        out << model_document(m, cfg);
        return exit_ok;
      }
      case Command::scatter: {
        const RouterModel m = model();
        stage = "scattering scan";
        out << scatter_csv(m, cfg.scatter_context, cfg.scatter_mode, cfg.grid);
        return exit_ok;
      }
      case Command::table1: {
        const RouterModel m = model();
        stage = "pulse table_one";
        out << table_csv(table_one(m, cfg.table));
        return exit_ok;
      }
      case Command::table2: {
        const RouterModel m = model();
        stage = "pulse table_two";
        out << table_csv(table_two(m, cfg.table));
        return exit_ok;
      }
      case Command::tune: {
        stage = "tuner tune";
        if (cfg.mode != RunConfig::Mode::circuit)
          throw ValidationError("circuit", "tune needs a [circuit] section");
        const TuneResult r = tune(cfg.circuit, cfg.objective, cfg.tune);
        out << tune_document(r, cfg);
        if (!r.converged) {
          err << "qrouter tune: tuner tune: routing residual above threshold after " << r.evaluations
              << " evaluations\n";
          return exit_numerical;
        }
        return exit_ok;
      }
      case Command::oracle_check: {
        const RouterModel m = model();
        stage = "oracle compare";
        const auto cases = oracle_cases(m, cfg.table.pulse);
        out << oracle_report(cases);
        for (const OracleCase& c : cases) {
          if (c.report.max_discrepancy > oracle_tolerance) {
            err << "qrouter oracle-check: oracle compare: discrepancy " << sci(c.report.max_discrepancy) << " at "
                << c.label << " exceeds " << sci(oracle_tolerance) << "\n";
            return exit_numerical;
          }
        }
        return exit_ok;
      }
    }
  } catch (const ConvergenceError& e) {
    return fail(exit_numerical, e);
  } catch (const CoverageError& e) {
    return fail(exit_numerical, e);
  } catch (const StabilityError& e) {
    return fail(exit_numerical, e);
  } catch (const Error& e) {
    return fail(exit_validation, e);
  }
  return exit_validation;
}

}  // namespace qrouter
