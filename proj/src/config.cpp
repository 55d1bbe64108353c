#include "qrouter/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "qrouter/error.hpp"

namespace qrouter {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = [] {
    std::map<std::string, std::set<std::string>> k;
    const std::set<std::string> lifetimes{"tau_t1", "tau_t3", "tau_a", "tau_b", "gamma_d"};
    k["circuit"] = {"c1",   "ct",   "c2a",  "c2b",  "c3a",  "c3b",  "c2sa", "c2sb", "c3sa",      "c3sb",
                    "alpha", "ejt", "ej2a", "ej2b", "ej3a", "ej3b", "basis_size"};
    k["direct"] = {"omega_t1", "omega_t2", "omega_t3", "omega_2a", "omega_2b", "omega_3a", "omega_3b"};
    for (int i = 1; i <= 3; ++i)
      for (Squid s : all_squids) k["direct"].insert("j_" + std::to_string(i) + "_" + std::string(squid_name(s)));
    k["circuit"].insert(lifetimes.begin(), lifetimes.end());
    k["direct"].insert(lifetimes.begin(), lifetimes.end());
    k["pulse"] = {"bandwidth_ratio", "abs_tol"};
    k["grid"] = {"points_per_window", "halfwidth_factor"};
    k["scatter"] = {"context", "mode"};
    k["tune"] = {"weight_reflect_t1", "weight_reflect_t3", "weight_trans2_t1", "weight_trans3_t3",
                 "penalty",           "budget",            "threshold",        "initial_step"};
    k["output"] = {"path"};
    return k;
  }();
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::map<std::string, Section> tokenize(std::string_view text) {
  std::map<std::string, Section> sections;
  Section* current = nullptr;
  std::string current_name;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ParseError(line_no, indent, "malformed section header");
      current_name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_keys().contains(current_name))
        throw ValidationError(current_name, "unknown section [" + current_name + "] at line " + std::to_string(line_no));
      if (sections.contains(current_name))
        throw ValidationError(current_name, "section [" + current_name + "] repeated at line " + std::to_string(line_no));
      current = &sections[current_name];
      current->line = line_no;
    } else {
      const auto eq = raw.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, indent, "expected `key = value`");
      if (!current) throw ParseError(line_no, indent, "key outside of any section");
      const std::string key = trim(raw.substr(0, eq));
      const std::string value = trim(raw.substr(eq + 1));
      if (key.empty()) throw ParseError(line_no, indent, "missing key before `=`");
      const int value_col = static_cast<int>(eq + 1 + raw.substr(eq + 1).find_first_not_of(" \t")) + 1;
      if (value.empty()) throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value for " + key);
      if (!known_keys().at(current_name).contains(key))
        throw ValidationError(key, "unknown key '" + key + "' in [" + current_name + "] at line " +
                                       std::to_string(line_no));
      if (current->entries.contains(key))
        throw ValidationError(key, "key '" + key + "' repeated at line " + std::to_string(line_no));
      current->entries[key] = {value, line_no, value_col, false};
    }
    if (end == text.size()) break;
  }
  return sections;
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::string name)
      : section_(sections.contains(name) ? &sections[name] : nullptr), name_(std::move(name)) {}

  bool present() const { return section_ != nullptr; }
  bool has(const std::string& key) const { return section_ && section_->entries.contains(key); }

  std::optional<double> number(const std::string& key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw ParseError(e->line, e->column, key + " is not a number");
    if (!std::isfinite(v)) throw ParseError(e->line, e->column, key + " is not a finite number");
    return v;
  }

  double require(const std::string& key) {
    const auto v = number(key);
    if (!v) throw ValidationError(key, "[" + name_ + "] requires " + key);
    return *v;
  }

  void read(const std::string& key, double& out) {
    if (auto v = number(key)) out = *v;
  }

  void read(const std::string& key, int& out) {
    Entry* e = find(key);
    if (!e) return;
    int v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw ParseError(e->line, e->column, key + " is not an integer");
    out = v;
  }

  std::optional<std::string> text(const std::string& key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  int line_of(const std::string& key) const { return section_->entries.at(key).line; }

 private:
  Entry* find(const std::string& key) {
    if (!section_) return nullptr;
    const auto it = section_->entries.find(key);
    if (it == section_->entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  Section* section_;
  std::string name_;
};

void read_lifetimes(Reader& r, Lifetimes& tau, double& gamma_d) {
  r.read("tau_t1", tau.t1);
  r.read("tau_t3", tau.t3);
  r.read("tau_a", tau.a);
  r.read("tau_b", tau.b);
  r.read("gamma_d", gamma_d);
}

Condition parse_context(Reader& r) {
  const auto v = r.text("context");
  if (!v || *v == "GS") return Condition::gs;
  if (*v == "T1") return Condition::t1;
  if (*v == "T3") return Condition::t3;
  throw ValidationError("context", "context must be GS, T1 or T3 (line " + std::to_string(r.line_of("context")) + ")");
}

ModeKind parse_mode(Reader& r) {
  const auto v = r.text("mode");
  if (!v || *v == "even") return ModeKind::even;
  if (*v == "odd") return ModeKind::odd;
  if (*v == "right") return ModeKind::right;
  if (*v == "left") return ModeKind::left;
  throw ValidationError("mode", "mode must be even, odd, right or left (line " + std::to_string(r.line_of("mode")) + ")");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  auto sections = tokenize(text);
  RunConfig cfg;

  Reader circuit(sections, "circuit");
  Reader direct(sections, "direct");
  if (circuit.present() && direct.present())
    throw ValidationError("direct", "[circuit] and [direct] are mutually exclusive");
  if (!circuit.present() && !direct.present())
    throw ValidationError("circuit", "missing model section: exactly one of [circuit] or [direct] is required");

  if (circuit.present()) {
    cfg.mode = RunConfig::Mode::circuit;
    CircuitParams& p = cfg.circuit;
    p.c1 = circuit.require("c1");
    p.ct = circuit.require("ct");
    const char* branch[] = {"c2a", "c2b", "c3a", "c3b"};
    const char* couple[] = {"c2sa", "c2sb", "c3sa", "c3sb"};
    for (int k = 0; k < 4; ++k) {
      p.c_branch[k] = circuit.require(branch[k]);
      p.c_couple[k] = circuit.require(couple[k]);
    }
    p.alpha = circuit.number("alpha");
    const char* ej[] = {"ej2a", "ej2b", "ej3a", "ej3b"};
    const bool any_ej = circuit.has("ejt") || std::any_of(std::begin(ej), std::end(ej), [&](const char* k) {
                          return circuit.has(k);
                        });
    if (any_ej) {
      p.ej_transmon = circuit.require("ejt");
      for (int k = 0; k < 4; ++k) p.ej_squid[k] = circuit.require(ej[k]);
    }
    circuit.read("basis_size", cfg.model.basis_size);
    read_lifetimes(circuit, cfg.model.tau, cfg.model.gamma_d);
    check_circuit(p);
  } else {
    cfg.mode = RunConfig::Mode::direct;
    RouterModel& m = cfg.direct;
    for (int i = 0; i < 3; ++i) m.omega_t[i] = direct.require("omega_t" + std::to_string(i + 1));
    for (Squid s : all_squids) {
      m.omega_s[index(s)] = direct.require("omega_" + std::string(squid_name(s)));
      for (int i = 0; i < 3; ++i) direct.read("j_" + std::to_string(i + 1) + "_" + std::string(squid_name(s)), m.j[i][index(s)]);
    }
    read_lifetimes(direct, m.tau, m.gamma_d);
    m.validate();
  }

  Reader pulse(sections, "pulse");
  pulse.read("bandwidth_ratio", cfg.table.bandwidth_ratio);
  pulse.read("abs_tol", cfg.table.pulse.abs_tol);
  if (!(cfg.table.bandwidth_ratio > 0.0)) throw ValidationError("bandwidth_ratio", "bandwidth_ratio must be positive");
  if (!(cfg.table.pulse.abs_tol > 0.0)) throw ValidationError("abs_tol", "abs_tol must be positive");

  Reader grid(sections, "grid");
  grid.read("points_per_window", cfg.grid.points_per_window);
  grid.read("halfwidth_factor", cfg.grid.halfwidth_factor);
  if (cfg.grid.points_per_window < 2) throw ValidationError("points_per_window", "points_per_window must be >= 2");
  if (!(cfg.grid.halfwidth_factor > 0.0)) throw ValidationError("halfwidth_factor", "halfwidth_factor must be positive");

  Reader scatter(sections, "scatter");
  cfg.scatter_context = parse_context(scatter);
  cfg.scatter_mode = parse_mode(scatter);

  Reader tune(sections, "tune");
  tune.read("weight_reflect_t1", cfg.objective.weights[0]);
  tune.read("weight_reflect_t3", cfg.objective.weights[1]);
  tune.read("weight_trans2_t1", cfg.objective.weights[2]);
  tune.read("weight_trans3_t3", cfg.objective.weights[3]);
  tune.read("penalty", cfg.objective.penalty);
  tune.read("budget", cfg.tune.budget);
  tune.read("threshold", cfg.tune.threshold);
  tune.read("initial_step", cfg.tune.initial_step);
  cfg.objective.validate();
  if (cfg.tune.budget < 5) throw ValidationError("budget", "budget must be >= 5");
  if (!(cfg.tune.threshold > 0.0)) throw ValidationError("threshold", "threshold must be positive");

  Reader output(sections, "output");
  cfg.output = output.text("path");

  cfg.tune.model = cfg.model;
  cfg.tune.table = cfg.table;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RouterModel resolve_model(const RunConfig& cfg) {
  if (cfg.mode == RunConfig::Mode::direct) {
    cfg.direct.validate();
    return cfg.direct;
  }
  if (cfg.circuit.has_josephson()) return derive_model(cfg.circuit, cfg.model);
  return build_model(cfg.circuit, cfg.model);
}

}  // namespace qrouter
