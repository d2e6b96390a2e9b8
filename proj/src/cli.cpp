// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/cli.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "superint/dynamics.hpp"
#include "superint/geometry.hpp"
#include "superint/poisson.hpp"

namespace superint::cli {

namespace {

struct CommandInfo {
  Command command;
  const char* name;
  const char* help;
};

constexpr std::array<CommandInfo, 8> kCommands = {{
    {Command::Verify, "verify", "Check {H,A}, {H,B}, {H,C} and the {A,C}, {B,C} algebra rows"},
    {Command::Casimir, "casimir", "Check the Casimir combination against K(H)"},
    {Command::Curvature, "curvature", "Classify the Gaussian curvature of the metric"},
    {Command::Revolution, "revolution", "Test whether the metric is a surface of revolution"},
    {Command::Linear, "linear", "Search for a linear integral of motion"},
    {Command::Tables, "tables", "Verify catalog rows"},
    {Command::Trajectory, "trajectory", "Integrate Hamilton's equations and check conservation"},
    {Command::DumpCatalog, "dump-catalog", "Print the embedded catalog"},
}};

bool needs_spec(Command c) { return c != Command::Tables && c != Command::DumpCatalog; }

// Raw option storage shared by every subcommand; at most one is parsed.
struct RawOptions {
  std::string cls;
  std::map<std::string, double> params;
  std::string spec_file;
  int points = 0;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  std::string format = "json";
  std::string output;
  bool no_timestamp = false;
  Tolerances tol;
  std::string table;
  std::string row;
  int draws = 5;
  std::array<double, 4> initial{};
  std::array<bool, 4> initial_set{};
  double t_end = 10.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

void add_common(CLI::App& sub, RawOptions& raw) {
  sub.add_option("--points", raw.points, "Sample points per check")->check(CLI::PositiveNumber);
  sub.add_option("--seed", raw.seed, "Random seed");
  sub.add_option("--threads", raw.threads, "Maximum worker threads")->check(CLI::PositiveNumber);
  sub.add_option("--format", raw.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  sub.add_option("--output", raw.output, "Write the report to this file");
  sub.add_flag("--no-timestamp", raw.no_timestamp, "Omit the timestamp from JSON reports");
  sub.add_option("--tol-first", raw.tol.first_bracket, "Tolerance for first brackets");
  sub.add_option("--tol-nested", raw.tol.nested_bracket, "Tolerance for nested brackets");
  sub.add_option("--tol-casimir", raw.tol.casimir, "Tolerance for the Casimir");
  sub.add_option("--tol-curvature", raw.tol.curvature, "Tolerance for curvature");
}

void add_spec(CLI::App& sub, RawOptions& raw) {
  sub.add_option("--class", raw.cls, "System class: I1 I2 I3 II1 II2 II3");
  for (const auto name : kParamNames) {
    const std::string key(name);
    sub.add_option("--" + key, raw.params[key], "Parameter " + key);
  }
  sub.add_option("--spec-file", raw.spec_file, "JSON spec file");
}

SystemSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file: " + path);
  try {
    return spec_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid spec file " + path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid spec file " + path + ": " + e.what());
  }
}

RunConfig build_config(Command command, const CLI::App& sub, const RawOptions& raw) {
  RunConfig cfg;
  cfg.command = command;
  if (sub.count("--points") > 0) cfg.n_points = raw.points;
  cfg.seed = raw.seed;
  cfg.threads = raw.threads;
  cfg.tol = raw.tol;
  cfg.format = raw.format == "csv" ? Format::Csv : raw.format == "human" ? Format::Human : Format::Json;
  cfg.output = raw.output;
  cfg.timestamp = !raw.no_timestamp;

  if (needs_spec(command)) {
    bool inline_params = false;
    for (const auto name : kParamNames) inline_params = inline_params || sub.count("--" + std::string(name)) > 0;
    const bool has_class = sub.count("--class") > 0;
    if (sub.count("--spec-file") > 0) {
      if (has_class || inline_params) throw ConfigError("--spec-file cannot be combined with inline parameters");
      cfg.spec = load_spec_file(raw.spec_file);
    } else {
      if (!has_class) throw ConfigError("a system is required: give --class or --spec-file");
      const auto cls = parse_system_class(raw.cls);
      if (!cls) throw ConfigError("unknown class '" + raw.cls + "'");
      SystemSpec spec;
      spec.cls = *cls;
      for (int i = 0; i < 8; ++i) {
        const std::string key(kParamNames[i]);
        if (sub.count("--" + key) > 0) set_param(spec, i, raw.params.at(key));
      }
      cfg.spec = spec;
    }
  }

  if (command == Command::Tables) {
    if (!raw.table.empty()) {
      cfg.table = parse_table(raw.table);
      if (!cfg.table) throw ConfigError("unknown table '" + raw.table + "'");
    }
    if (!raw.row.empty()) cfg.row = raw.row;
    cfg.draws = raw.draws;
  }

  if (command == Command::Trajectory) {
    const int given = static_cast<int>(std::count(raw.initial_set.begin(), raw.initial_set.end(), true));
    if (given != 0 && given != 4) throw ConfigError("give all of --xi --eta --p-xi --p-eta or none");
    if (given == 4) cfg.initial = PhasePoint{raw.initial[0], raw.initial[1], raw.initial[2], raw.initial[3]};
    cfg.t_end = raw.t_end;
    cfg.rel_tol = raw.rel_tol;
    cfg.abs_tol = raw.abs_tol;
    if (!(cfg.t_end > 0.0)) throw ConfigError("--t-end must be positive");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol >= 0.0)) throw ConfigError("integrator tolerances must be positive");
  }
  return cfg;
}

std::string csv_reports(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "report,identity,residual,tolerance,pass\n";
  char buf[64];
  for (const auto& r : reports) {
    const std::string label = r.details.contains("row") ? r.details["row"].get<std::string>() : r.kind;
    for (const auto& id : r.identities) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", id.max_residual, id.tolerance);
      os << label << ',' << id.name << ',' << buf << ',' << (id.pass ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

std::string human_reports(const std::vector<VerificationReport>& reports, const std::vector<std::string>& skipped) {
  std::ostringstream os;
  for (const auto& r : reports) {
    if (r.details.contains("row")) {
      os << r.details["row"].get<std::string>() << "  " << (r.pass() ? "PASS" : "FAIL");
      if (r.details.contains("alias_of")) os << "  (alias of " << r.details["alias_of"].get<std::string>() << ")";
      os << '\n';
      std::istringstream lines(human_summary(r));
      for (std::string line; std::getline(lines, line);) os << "    " << line << '\n';
    } else {
      os << human_summary(r);
    }
  }
  for (const auto& s : skipped) os << s << "  SKIP  metadata only\n";
  return os.str();
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file: " + cfg.output);
  file << text;
  if (!file) throw ConfigError("failed writing output file: " + cfg.output);
}

int run_trajectory(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SystemSpec& spec = *cfg.spec;
  PhasePoint initial;
  if (cfg.initial) {
    initial = *cfg.initial;
  } else {
    Rng rng(cfg.seed);
    initial = sample_points(spec, 1, rng).front();
  }
  const PhasePoint start = clamp_energy(spec, initial);
  if (!(start.p_xi == initial.p_xi && start.p_eta == initial.p_eta)) {
    err << "note: momenta scaled so that |H| <= 10\n";
  }
  IntegratorOptions io;
  io.rel_tol = cfg.rel_tol;
  io.abs_tol = cfg.abs_tol;

  if (cfg.format == Format::Csv) {
    const Trajectory traj = integrate(spec, start, cfg.t_end, io);
    std::ostringstream os;
    write_csv(os, traj);
    emit(cfg, out, os.str());
    if (traj.status == TrajectoryStatus::DomainExit) {
      err << "trajectory left the domain at t = " << *traj.exit_time << "\n";
      return kDomainFailure;
    }
    return kPass;
  }
  TrajectoryCheckOptions topts;
  topts.t_end = cfg.t_end;
  topts.integrator = io;
  VerificationReport r = verify_trajectory(spec, start, topts);
  r.seed = cfg.seed;
  const std::vector<VerificationReport> reports{r};
  if (cfg.format == Format::Json) {
    emit(cfg, out, report_document("trajectory", reports, cfg.timestamp).dump(2) + "\n");
  } else {
    emit(cfg, out, human_reports(reports, {}));
  }
  return r.pass() ? kPass : kFail;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& info : kCommands) {
    if (info.command == c) return info.name;
  }
  return "unknown";
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Numerical verification of two-dimensional superintegrable systems", "superint"};
  app.require_subcommand(1);
  RawOptions raw;
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& info : kCommands) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    add_common(*sub, raw);
    if (needs_spec(info.command)) add_spec(*sub, raw);
    if (info.command == Command::Tables) {
      sub->add_option("--table", raw.table, "Restrict to one table (T1..T6)");
      sub->add_option("--row", raw.row, "Restrict to one row id");
      sub->add_option("--draws", raw.draws, "Random free-parameter draws per row")->check(CLI::PositiveNumber);
    }
    if (info.command == Command::Trajectory) {
      static constexpr std::array<const char*, 4> kInit = {"--xi", "--eta", "--p-xi", "--p-eta"};
      static constexpr std::array<const char*, 4> kInitHelp = {"Initial xi", "Initial eta", "Initial p_xi",
                                                               "Initial p_eta"};
      for (int i = 0; i < 4; ++i) {
        sub->add_option_function<double>(
            kInit[i], [&raw, i](double v) { raw.initial[i] = v; raw.initial_set[i] = true; }, kInitHelp[i]);
      }
      sub->add_option("--t-end", raw.t_end, "Integration time");
      sub->add_option("--rel-tol", raw.rel_tol, "Relative error tolerance");
      sub->add_option("--abs-tol", raw.abs_tol, "Absolute error tolerance");
    }
    subs.emplace_back(sub, info.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [sub, command] : subs) {
    if (sub->parsed()) return build_config(command, *sub, raw);
  }
  throw ConfigError("no command given");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (needs_spec(cfg.command) && !cfg.spec) throw ConfigError("command requires a system spec");
  if (cfg.command == Command::DumpCatalog) {
    emit(cfg, out, catalog_json().dump(2) + "\n");
    return kPass;
  }
  if (cfg.command == Command::Trajectory) return run_trajectory(cfg, out, err);

  std::vector<VerificationReport> reports;
  std::vector<std::string> skipped;
  const int n = cfg.n_points.value_or(100);
  switch (cfg.command) {
    case Command::Verify:
    case Command::Casimir: {
      VerifyOptions vo;
      vo.n_points = n;
      vo.seed = cfg.seed;
      vo.threads = cfg.threads;
      vo.tol = cfg.tol;
      reports.push_back(cfg.command == Command::Verify ? verify_algebra(*cfg.spec, vo)
                                                       : verify_casimir(*cfg.spec, vo));
      break;
    }
    case Command::Curvature:
      reports.push_back(curvature_report(*cfg.spec, n, cfg.seed, {cfg.tol.curvature, cfg.tol.curvature}));
      break;
    case Command::Revolution:
      reports.push_back(revolution_report(*cfg.spec, n, cfg.seed));
      break;
    case Command::Linear:
      reports.push_back(linear_report(*cfg.spec, n, cfg.seed, cfg.tol.first_bracket));
      break;
    case Command::Tables: {
      EntryOptions eo;
      eo.draws = cfg.draws;
      eo.n_points = cfg.n_points.value_or(eo.n_points);
      eo.algebra_points = eo.n_points;
      eo.seed = cfg.seed;
      eo.threads = cfg.threads;
      eo.tol = cfg.tol;
      std::vector<CatalogEntry> rows;
      if (cfg.row) {
        try {
          rows.push_back(find_entry(*cfg.row));
        } catch (const std::out_of_range&) {
          throw ConfigError("unknown catalog row '" + *cfg.row + "'");
        }
      } else {
        CatalogFilter filter;
        filter.table = cfg.table;
        rows = lookup(filter);
      }
      for (const auto& e : rows) {
        if (!e.checkable()) {
          skipped.push_back(e.row_id);
          continue;
        }
        reports.push_back(verify_entry(e, eo));
      }
      break;
    }
    default: break;
  }

  std::string text;
  switch (cfg.format) {
    case Format::Json: {
      nlohmann::json doc = report_document(std::string(to_string(cfg.command)), reports, cfg.timestamp);
      if (!skipped.empty()) doc["skipped"] = skipped;
      text = doc.dump(2) + "\n";
      break;
    }
    case Format::Csv: text = csv_reports(reports); break;
    case Format::Human: text = human_reports(reports, skipped); break;
  }
  emit(cfg, out, text);
  bool all = true;
  for (const auto& r : reports) all = all && r.pass();
  return all ? kPass : kFail;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_args(argc, argv, out);
    if (!cfg) return kPass;
    return run(*cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SamplingError& e) {
    err << "sampling failure: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const DomainError& e) {
    err << "domain failure: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const StepFailure& e) {
    err << "integration failure: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace superint::cli
