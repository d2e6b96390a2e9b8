// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "superint/catalog.hpp"
#include "superint/jets.hpp"
#include "superint/report.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint::cli {

enum class Command { Verify, Casimir, Curvature, Revolution, Linear, Tables, Trajectory, DumpCatalog };
std::string_view to_string(Command c);

enum class Format { Json, Csv, Human };

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2, kDomainFailure = 3 };

// Bad flags, unreadable spec files, inconsistent options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Verify;
  std::optional<SystemSpec> spec;  // required except for tables / dump-catalog
  std::optional<int> n_points;  // default 100, or 50 per draw for tables
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  Tolerances tol;
  Format format = Format::Json;
  std::string output;  // empty writes to stdout
  bool timestamp = true;

  // tables
  std::optional<Table> table;
  std::optional<std::string> row;
  int draws = 5;

  // trajectory; the initial point is sampled from the seed when absent
  std::optional<PhasePoint> initial;
  double t_end = 10.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

// Parses argv (subcommand first). Throws ConfigError with a diagnostic;
// returns nullopt when --help was requested and printed to `out`.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

// Executes the command and writes the report to config.output (or `out`).
// Returns an ExitCode; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with exit-code mapping of every failure class.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace superint::cli
