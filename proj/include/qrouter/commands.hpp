#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qrouter/config.hpp"
#include "qrouter/oracle.hpp"
#include "qrouter/pulse.hpp"
#include "qrouter/tuner.hpp"

namespace qrouter {

enum class Command { derive, scatter, table1, table2, tune, oracle_check };

std::optional<Command> parse_command(std::string_view name) noexcept;
std::string_view command_name(Command c) noexcept;

enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_numerical = 3 };

// Model as a [direct] document that parse_config reads back to the same values.
std::string model_document(const RouterModel& m, const RunConfig& cfg);

std::string table_csv(const Table& t);

std::string scatter_csv(const RouterModel& m, Condition ctx, ModeKind kind, const GridPolicy& grid);

std::string circuit_document(const CircuitParams& p, const RunConfig& cfg);

std::string tune_document(const TuneResult& r, const RunConfig& cfg);

struct OracleCase {
  std::string label;
  Condition context;
  LorentzianPulse pulse;
  OracleReport report;
};

// Pulses at omega_T1 under GS and omega_a under T1, each matched to its target linewidth.
std::vector<OracleCase> oracle_cases(const RouterModel& m, const PulseOptions& opt = {});

std::string oracle_report(const std::vector<OracleCase>& cases);

// Writes the artifact to out and diagnostics to err; returns the exit code.
int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qrouter
