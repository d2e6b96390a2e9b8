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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "superint/systems.hpp"

namespace superint {

inline constexpr const char* kReportSchema = "superint-report/1";

struct Tolerances {
  double first_bracket = 1e-9;
  double nested_bracket = 1e-8;
  double casimir = 1e-8;
  double curvature = 1e-8;
};

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string kind;
  SystemSpec spec;
  std::uint64_t seed = 0;
  int n_points = 0;
  std::vector<IdentityResult> identities;
  bool correction_applied = false;
  // Residual after the convention-drift fit, when one was needed.
  std::optional<double> corrected_residual;
  // Free-form details specific to the check (curvature class, row id, ...).
  nlohmann::json details = nlohmann::json::object();

  void add(std::string name, double residual, double tolerance);
  bool pass() const;
};

nlohmann::json to_json(const VerificationReport& r);

// Wraps reports in the versioned top-level document.
nlohmann::json report_document(const std::string& command, const std::vector<VerificationReport>& reports,
                               bool with_timestamp);

// One line per identity.
std::string human_summary(const VerificationReport& r);

}  // namespace superint
