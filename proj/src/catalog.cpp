// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/catalog.hpp"

#include <cmath>
#include <sstream>

#include "superint/geometry.hpp"
#include "superint/poisson.hpp"

namespace superint {

namespace detail {
extern const std::string_view kCatalogJson;
}

std::string_view to_string(Table t) {
  static constexpr std::array<std::string_view, 6> names = {"T1", "T2", "T3", "T4", "T5", "T6"};
  return names[static_cast<std::size_t>(t)];
}

std::optional<Table> parse_table(std::string_view s) {
  for (Table t : {Table::T1, Table::T2, Table::T3, Table::T4, Table::T5, Table::T6}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Claim c) {
  switch (c) {
    case Claim::CurvatureZero: return "CurvatureZero";
    case Claim::CurvatureConstant: return "CurvatureConstant";
    case Claim::Revolution: return "Revolution";
    case Claim::LinearIntegral: return "LinearIntegral";
    case Claim::KoenigsForm: return "KoenigsForm";
  }
  return "?";
}

std::optional<Claim> parse_claim(std::string_view s) {
  for (Claim c : {Claim::CurvatureZero, Claim::CurvatureConstant, Claim::Revolution, Claim::LinearIntegral,
                  Claim::KoenigsForm}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

bool CatalogEntry::uses_curvature_scale() const {
  for (const auto& c : params) {
    if (c.kind == Constraint::Kind::PerCurvature) return true;
  }
  return false;
}

std::vector<std::string> CatalogEntry::free_slots() const {
  std::vector<std::string> out;
  for (int i = 0; i < 8; ++i) {
    if (params[i].kind == Constraint::Kind::Free) out.emplace_back(kParamNames[i]);
  }
  return out;
}

namespace {

Constraint constraint_from_json(const nlohmann::json& j, const std::string& row) {
  Constraint c;
  if (j.is_number()) {
    c.kind = Constraint::Kind::Fixed;
    c.value = j.get<double>();
  } else if (j.is_string() && j.get<std::string>() == "free") {
    c.kind = Constraint::Kind::Free;
  } else if (j.is_object() && j.contains("tie")) {
    c.kind = Constraint::Kind::Tied;
    const auto idx = param_index(j.at("tie").get<std::string>());
    if (!idx) throw ConstraintError(row + ": tie to unknown parameter");
    c.tie = *idx;
    c.value = j.at("factor").get<double>();
  } else if (j.is_object() && j.contains("per_curvature")) {
    c.kind = Constraint::Kind::PerCurvature;
    c.value = j.at("per_curvature").get<double>();
  } else {
    throw ConstraintError(row + ": malformed parameter constraint " + j.dump());
  }
  return c;
}

nlohmann::json constraint_to_json(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::Fixed: return c.value;
    case Constraint::Kind::Free: return "free";
    case Constraint::Kind::Tied: return {{"tie", std::string(kParamNames[c.tie])}, {"factor", c.value}};
    case Constraint::Kind::PerCurvature: return {{"per_curvature", c.value}};
  }
  return nullptr;
}

CatalogEntry parse_entry(const nlohmann::json& j) {
  CatalogEntry e;
  e.row_id = j.at("row").get<std::string>();
  const auto table = parse_table(j.at("table").get<std::string>());
  const auto cls = parse_system_class(j.at("class").get<std::string>());
  if (!table || !cls) throw ConstraintError(e.row_id + ": bad table or class");
  e.table = *table;
  e.cls = *cls;
  const auto& params = j.at("params");
  for (const auto& [key, value] : params.items()) {
    const auto idx = param_index(key);
    if (!idx) throw ConstraintError(e.row_id + ": unknown parameter " + key);
    e.params[*idx] = constraint_from_json(value, e.row_id);
  }
  for (const auto& c : e.params) {
    if (c.kind == Constraint::Kind::Tied && e.params[c.tie].kind == Constraint::Kind::Tied) {
      throw ConstraintError(e.row_id + ": chained ties are not supported");
    }
  }
  const auto& claim = j.at("claim");
  const auto kind = parse_claim(claim.at("type").get<std::string>());
  if (!kind) throw ConstraintError(e.row_id + ": unknown claim");
  e.claim = *kind;
  if (claim.contains("geometry")) {
    const auto geo = parse_claim(claim.at("geometry").get<std::string>());
    if (!geo) throw ConstraintError(e.row_id + ": unknown geometry claim");
    e.geometry = geo;
  }
  if (j.contains("tags")) e.tags = j.at("tags").get<std::vector<std::string>>();
  if (j.contains("alias_of")) e.alias_of = j.at("alias_of").get<std::string>();
  if (j.contains("note")) e.note = j.at("note").get<std::string>();
  if (j.contains("annotation")) e.annotation = j.at("annotation").get<std::string>();
  if (j.contains("metadata")) e.metadata = j.at("metadata");
  return e;
}

}  // namespace

CatalogEntry entry_from_json(const nlohmann::json& j) {
  try {
    return parse_entry(j);
  } catch (const nlohmann::json::exception& ex) {
    throw ConstraintError(std::string("malformed catalog entry: ") + ex.what());
  }
}

nlohmann::json to_json(const CatalogEntry& e) {
  nlohmann::json j;
  j["table"] = std::string(to_string(e.table));
  j["row"] = e.row_id;
  j["class"] = std::string(to_string(e.cls));
  nlohmann::json params = nlohmann::json::object();
  for (int i = 0; i < 8; ++i) params[std::string(kParamNames[i])] = constraint_to_json(e.params[i]);
  j["params"] = std::move(params);
  nlohmann::json claim = {{"type", std::string(to_string(e.claim))}};
  if (e.geometry) claim["geometry"] = std::string(to_string(*e.geometry));
  j["claim"] = std::move(claim);
  j["tags"] = e.tags;
  if (e.alias_of) j["alias_of"] = *e.alias_of;
  if (!e.note.empty()) j["note"] = e.note;
  if (!e.annotation.empty()) j["annotation"] = e.annotation;
  if (!e.metadata.is_null()) j["metadata"] = e.metadata;
  return j;
}

const nlohmann::json& catalog_json() {
  static const nlohmann::json doc = nlohmann::json::parse(detail::kCatalogJson);
  return doc;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& j : catalog_json().at("entries")) out.push_back(entry_from_json(j));
    return out;
  }();
  return entries;
}

std::vector<CatalogEntry> lookup(const CatalogFilter& filter) {
  std::vector<CatalogEntry> out;
  for (const auto& e : catalog()) {
    if (filter.table && e.table != *filter.table) continue;
    if (filter.cls && e.cls != *filter.cls) continue;
    if (filter.claim && e.claim != *filter.claim && e.geometry != filter.claim) continue;
    if (!filter.include_aliases && e.alias_of) continue;
    out.push_back(e);
  }
  return out;
}

const CatalogEntry& find_entry(std::string_view row_id) {
  for (const auto& e : catalog()) {
    if (e.row_id == row_id) return e;
  }
  throw std::out_of_range("no catalog row " + std::string(row_id));
}

SystemSpec instantiate(const CatalogEntry& entry, const std::map<std::string, double>& free_values,
                       double curvature_scale) {
  for (const auto& [name, value] : free_values) {
    const auto idx = param_index(name);
    if (!idx || entry.params[*idx].kind != Constraint::Kind::Free) {
      throw ConstraintError(entry.row_id + ": " + name + " is not a free parameter");
    }
  }
  if (entry.uses_curvature_scale() && (curvature_scale == 0.0 || !std::isfinite(curvature_scale))) {
    throw ConstraintError(entry.row_id + ": curvature scale must be finite and nonzero");
  }
  SystemSpec s;
  s.cls = entry.cls;
  for (int i = 0; i < 8; ++i) {
    const Constraint& c = entry.params[i];
    switch (c.kind) {
      case Constraint::Kind::Fixed: set_param(s, i, c.value); break;
      case Constraint::Kind::PerCurvature: set_param(s, i, c.value / curvature_scale); break;
      case Constraint::Kind::Free: {
        const auto it = free_values.find(std::string(kParamNames[i]));
        if (it == free_values.end()) {
          throw ConstraintError(entry.row_id + ": missing value for free parameter " + std::string(kParamNames[i]));
        }
        set_param(s, i, it->second);
        break;
      }
      case Constraint::Kind::Tied: break;
    }
  }
  for (int i = 0; i < 8; ++i) {
    const Constraint& c = entry.params[i];
    if (c.kind == Constraint::Kind::Tied) set_param(s, i, c.value * param(s, c.tie));
  }
  return s;
}

std::map<std::string, double> random_free_values(const CatalogEntry& entry, Rng& rng) {
  std::map<std::string, double> out;
  for (const auto& name : entry.free_slots()) {
    const double mag = rng.uniform(0.5, 2.0);
    out[name] = rng.uniform01() < 0.5 ? -mag : mag;
  }
  return out;
}

namespace {

// FNV-1a, so per-row streams do not depend on the standard library.
std::uint64_t row_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Keeps the worst residual per identity name across draws.
void merge(VerificationReport& r, const std::string& name, double residual, double tol) {
  for (auto& id : r.identities) {
    if (id.name == name) {
      if (!(residual <= id.max_residual)) id.max_residual = residual;
      id.pass = id.pass && residual <= tol;
      return;
    }
  }
  r.add(name, residual, tol);
}

std::string k_label(double k) {
  std::ostringstream os;
  os << "K=" << k;
  return os.str();
}

void check_geometry(Claim claim, const SystemSpec& spec, const EntryOptions& opts, std::uint64_t seed,
                    double k, VerificationReport& r, nlohmann::json& draw) {
  switch (claim) {
    case Claim::CurvatureZero: {
      const CurvatureClass c = classify_curvature(spec, opts.n_points, seed);
      draw["curvature"] = {{"class", std::string(to_string(c.tag))}, {"max_abs", c.max_abs}};
      merge(r, "curvature-zero", c.max_abs, opts.tol.curvature);
      break;
    }
    case Claim::CurvatureConstant: {
      const CurvatureClass c = classify_curvature(spec, opts.n_points, seed);
      draw["curvature"] = {{"class", std::string(to_string(c.tag))}, {"mean", c.mean}, {"stddev", c.stddev}};
      merge(r, "curvature-mean(" + k_label(k) + ")", std::abs(c.mean - k), 1e-7);
      merge(r, "curvature-stddev(" + k_label(k) + ")", c.stddev, opts.tol.curvature);
      break;
    }
    case Claim::Revolution: {
      const VerificationReport rev = revolution_report(spec, opts.n_points, seed);
      draw["revolution"] = rev.details;
      merge(r, "revolution", rev.identities[0].max_residual, rev.identities[0].tolerance);
      break;
    }
    case Claim::LinearIntegral: {
      const VerificationReport lin = linear_report(spec, opts.n_points, seed, opts.tol.first_bracket);
      draw["linear"] = lin.details;
      merge(r, "linear-integral", lin.identities[0].max_residual, lin.identities[0].tolerance);
      break;
    }
    case Claim::KoenigsForm: break;
  }
}

}  // namespace

VerificationReport verify_entry(const CatalogEntry& entry, const EntryOptions& opts) {
  if (!entry.checkable()) {
    throw Unverifiable(entry.row_id + " carries metadata only (" + std::string(to_string(entry.claim)) + ")");
  }
  VerificationReport r;
  r.kind = "catalog-entry";
  r.spec.cls = entry.cls;
  r.seed = opts.seed;
  r.n_points = opts.n_points;
  r.details["row"] = entry.row_id;
  r.details["table"] = std::string(to_string(entry.table));
  r.details["claim"] = std::string(to_string(entry.claim));
  if (entry.geometry) r.details["geometry"] = std::string(to_string(*entry.geometry));
  if (entry.alias_of) r.details["alias_of"] = *entry.alias_of;

  Rng rng(opts.seed ^ row_hash(entry.row_id));
  const std::vector<double> scales =
      entry.uses_curvature_scale() ? opts.curvatures : std::vector<double>{1.0};
  nlohmann::json draws = nlohmann::json::array();
  for (double k : scales) {
    for (int d = 0; d < opts.draws; ++d) {
      const SystemSpec spec = instantiate(entry, random_free_values(entry, rng), k);
      const std::uint64_t seed = rng.next();
      nlohmann::json draw = {{"spec", to_json(spec)}, {"seed", seed}};
      if (entry.uses_curvature_scale()) draw["K"] = k;
      check_geometry(entry.claim, spec, opts, seed, k, r, draw);
      if (entry.geometry) check_geometry(*entry.geometry, spec, opts, seed, k, r, draw);
      if (opts.run_algebra) {
        VerifyOptions vo;
        vo.n_points = opts.algebra_points;
        vo.seed = seed;
        vo.threads = opts.threads;
        vo.tol = opts.tol;
        const VerificationReport alg = verify_algebra(spec, vo);
        for (const auto& id : alg.identities) merge(r, "algebra:" + id.name, id.max_residual, id.tolerance);
        r.correction_applied = r.correction_applied || alg.correction_applied;
      }
      draws.push_back(std::move(draw));
    }
  }
  r.details["draws"] = std::move(draws);
  if (!entry.annotation.empty()) r.details["annotation"] = entry.annotation;
  return r;
}

}  // namespace superint
