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

// Classification tables as data: each row constrains the eight parameters of
// one class and claims a property that can be checked numerically.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "superint/report.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint {

class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Unverifiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Table { T1, T2, T3, T4, T5, T6 };
std::string_view to_string(Table t);
std::optional<Table> parse_table(std::string_view s);

enum class Claim { CurvatureZero, CurvatureConstant, Revolution, LinearIntegral, KoenigsForm };
std::string_view to_string(Claim c);
std::optional<Claim> parse_claim(std::string_view s);

struct Constraint {
  enum class Kind { Fixed, Free, Tied, PerCurvature };
  Kind kind = Kind::Free;
  double value = 0.0;  // Fixed: the value; Tied: factor; PerCurvature: numerator
  int tie = -1;        // Tied: index of the parameter it follows
};

struct CatalogEntry {
  Table table = Table::T1;
  std::string row_id;
  SystemClass cls = SystemClass::I1;
  std::array<Constraint, 8> params{};
  Claim claim = Claim::KoenigsForm;
  // Linear-integral rows of T6 also claim a geometric property.
  std::optional<Claim> geometry;
  std::vector<std::string> tags;
  std::optional<std::string> alias_of;
  std::string note;
  std::string annotation;
  nlohmann::json metadata;

  bool checkable() const { return claim != Claim::KoenigsForm; }
  bool uses_curvature_scale() const;
  // Names of the Free parameters, in storage order.
  std::vector<std::string> free_slots() const;
};

const std::vector<CatalogEntry>& catalog();
// The embedded JSON document the catalog is parsed from.
const nlohmann::json& catalog_json();
// Throws ConstraintError for malformed or inconsistent entries.
CatalogEntry entry_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CatalogEntry& e);

struct CatalogFilter {
  std::optional<Table> table;
  std::optional<SystemClass> cls;
  std::optional<Claim> claim;
  bool include_aliases = true;
};
std::vector<CatalogEntry> lookup(const CatalogFilter& filter = {});
// Throws std::out_of_range for an unknown row id.
const CatalogEntry& find_entry(std::string_view row_id);

// free_values must name exactly the Free slots. curvature_scale is the K of
// entries written as c/K and must be nonzero when such entries appear.
SystemSpec instantiate(const CatalogEntry& entry, const std::map<std::string, double>& free_values,
                       double curvature_scale = 1.0);

// Free values of magnitude in [0.5, 2] with random sign.
std::map<std::string, double> random_free_values(const CatalogEntry& entry, Rng& rng);

struct EntryOptions {
  int draws = 5;
  int n_points = 50;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> curvatures = {1.0, 2.0, -1.0};
  bool run_algebra = true;
  int algebra_points = 50;
  int threads = 1;
  Tolerances tol;
};

// Checks the claim at opts.draws random instantiations and runs the algebra
// verification on each. Throws Unverifiable for metadata-only rows.
VerificationReport verify_entry(const CatalogEntry& entry, const EntryOptions& opts = {});

}  // namespace superint
