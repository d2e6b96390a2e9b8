// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace superint {

void VerificationReport::add(std::string name, double residual, double tolerance) {
  // NaN never passes.
  const bool ok = residual <= tolerance;
  identities.push_back({std::move(name), residual, tolerance, ok});
}

bool VerificationReport::pass() const {
  for (const auto& id : identities) {
    if (!id.pass) return false;
  }
  return !identities.empty();
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["spec"] = to_json(r.spec);
  j["seed"] = r.seed;
  j["n_points"] = r.n_points;
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& id : r.identities) {
    ids.push_back({{"name", id.name},
                   {"max_residual", number(id.max_residual)},
                   {"tolerance", id.tolerance},
                   {"pass", id.pass}});
  }
  j["identities"] = std::move(ids);
  j["correction_applied"] = r.correction_applied;
  if (r.corrected_residual) j["corrected_residual"] = number(*r.corrected_residual);
  j["pass"] = r.pass();
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

nlohmann::json report_document(const std::string& command, const std::vector<VerificationReport>& reports,
                               bool with_timestamp) {
  nlohmann::json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  if (with_timestamp) doc["timestamp"] = utc_timestamp();
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    all = all && r.pass();
    arr.push_back(to_json(r));
  }
  doc["reports"] = std::move(arr);
  doc["pass"] = all;
  return doc;
}

std::string human_summary(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& id : r.identities) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-28s residual %.3e  tol %.1e\n", id.pass ? "PASS" : "FAIL",
                  id.name.c_str(), id.max_residual, id.tolerance);
    os << line;
  }
  if (r.correction_applied && r.corrected_residual) {
    char line[128];
    std::snprintf(line, sizeof line, "     convention-drift fit residual %.3e\n", *r.corrected_residual);
    os << line;
  }
  const auto& d = r.details;
  if (r.kind == "curvature" && d.contains("class")) {
    char line[128];
    std::snprintf(line, sizeof line, "     curvature %s, K = %.10g\n", d["class"].get<std::string>().c_str(),
                  d.value("value", 0.0));
    os << line;
  } else if (r.kind == "revolution" && d.contains("kind")) {
    os << "     " << d["kind"].get<std::string>();
    if (d.contains("frame")) os << " in frame " << d["frame"].get<std::string>();
    os << '\n';
  } else if (d.contains("frame") && d.contains("sign")) {
    os << "     p_1 " << (d["sign"] == "plus" ? "+" : "-") << " p_2 in frame " << d["frame"].get<std::string>()
       << '\n';
  }
  return os.str();
}

}  // namespace superint
