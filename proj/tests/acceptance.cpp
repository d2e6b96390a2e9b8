// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "superint/catalog.hpp"
#include "superint/cli.hpp"
#include "superint/dynamics.hpp"
#include "superint/geometry.hpp"
#include "superint/membership.hpp"
#include "superint/poisson.hpp"
#include "support.hpp"

using namespace superint;
using superint::testing::pins;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double worst_of(const VerificationReport& r, const std::string& name) {
  for (const auto& id : r.identities) {
    if (id.name == name) return id.max_residual;
  }
  throw std::runtime_error("identity " + name + " missing from report");
}

// 6 classes x 20 random draws, verified once and shared by the first three
// criteria.
struct Sweep {
  std::vector<VerificationReport> algebra;
  std::vector<VerificationReport> casimir;
  double algebra_seconds = 0.0;
};

const Sweep& sweep() {
  static const Sweep s = [] {
    Sweep out;
    Rng rng(kDefaultSeed);
    VerifyOptions vo;
    vo.n_points = 100;
    vo.threads = 1;
    const auto t0 = Clock::now();
    std::vector<SystemSpec> specs;
    for (const auto c : kAllClasses) {
      int accepted = 0;
      while (accepted < 20) {
        const SystemSpec spec = random_spec(c, rng);
        vo.seed = rng.next();
        try {
          out.algebra.push_back(verify_algebra(spec, vo));
        } catch (const SamplingError&) {
          continue;  // draw rejected by the sampling domain
        }
        specs.push_back(spec);
        out.casimir.push_back(verify_casimir(spec, vo));
        ++accepted;
      }
    }
    out.algebra_seconds = seconds_since(t0);
    return out;
  }();
  return s;
}

Outcome commutation() {
  const Sweep& s = sweep();
  double ha = 0.0, hb = 0.0, hc = 0.0;
  for (const auto& r : s.algebra) {
    ha = std::max(ha, worst_of(r, "HA"));
    hb = std::max(hb, worst_of(r, "HB"));
    hc = std::max(hc, worst_of(r, "HC"));
  }
  const bool ok = std::max({ha, hb, hc}) <= 1e-9 && s.algebra_seconds < 30.0;
  return {ok, fmt("%zu draws; max {H,A} %.2e {H,B} %.2e {H,C} %.2e; sweep %.2fs (algebra + casimir)",
                  s.algebra.size(), ha, hb, hc, s.algebra_seconds)};
}

Outcome quadratic_algebra() {
  const Sweep& s = sweep();
  double ac = 0.0, bc = 0.0;
  bool corrected = false;
  for (const auto& r : s.algebra) {
    ac = std::max(ac, worst_of(r, "AC-row"));
    bc = std::max(bc, worst_of(r, "BC-row"));
    corrected = corrected || r.correction_applied;
  }
  return {std::max(ac, bc) <= 1e-8 && !corrected,
          fmt("max {A,C} row %.2e, {B,C} row %.2e, correction_applied %s", ac, bc, corrected ? "true" : "false")};
}

Outcome casimir() {
  const Sweep& s = sweep();
  double worst = 0.0;
  bool corrected = false;
  for (const auto& r : s.casimir) {
    worst = std::max(worst, worst_of(r, "casimir"));
    corrected = corrected || r.correction_applied;
  }
  return {worst <= 1e-8 && !corrected, fmt("max residual %.2e over %zu draws", worst, s.casimir.size())};
}

Outcome characteristic() {
  double worst = 0.0;
  Rng rng(kDefaultSeed + 4);
  for (const auto c : kAllClasses) {
    const SampleDomain d = default_domain(c);
    SystemSpec spec;
    spec.cls = c;
    for (int i = 0; i < 20; ++i) worst = std::max(worst, characteristic_residual(spec, rng.uniform(d.xi)));
  }
  // The I3 constant: a = 3 gamma A^2 + 3 alpha A - 6 A'^2 must not depend on xi.
  SystemSpec i3;
  i3.cls = SystemClass::I3;
  const SystemFns fns(i3);
  const ClassConstants k = class_constants(SystemClass::I3);
  std::vector<double> as;
  for (int i = 0; i < 20; ++i) {
    const Jet2 a = fns.char_solution(Jet2::variable(kXi, rng.uniform(-1.0, 1.0)));
    const double d1 = a.grad[kXi];
    as.push_back(3.0 * k.gamma * a.val * a.val + 3.0 * k.alpha * a.val - 6.0 * d1 * d1);
  }
  double mean = 0.0;
  for (double v : as) mean += v / as.size();
  double var = 0.0;
  for (double v : as) var += (v - mean) * (v - mean) / as.size();
  const double pinned = pins()["char_a_i3"]["a"].get<double>();
  const bool ok = worst <= 1e-10 && std::sqrt(var) <= 1e-10 && k.a == pinned;
  return {ok, fmt("max residual %.2e; I3 a = %g (oracle %g), stddev over 20 points %.2e", worst, k.a, pinned,
                  std::sqrt(var))};
}

Outcome structural() {
  double worst = 0.0;
  Rng rng(kDefaultSeed + 5);
  int draws = 0;
  for (const auto c : kAllClasses) {
    for (int d = 0; d < 5; ++d) {
      const SystemSpec spec = random_spec(c, rng);
      std::vector<std::pair<double, double>> pts;
      try {
        pts = sample_coordinates(spec, default_domain(c), 20, rng);
      } catch (const SamplingError&) {
        continue;
      }
      ++draws;
      for (const auto& [x, y] : pts) {
        worst = std::max(worst, structural_pde_residual(spec, Pair::Metric, x, y));
        worst = std::max(worst, structural_pde_residual(spec, Pair::Potential, x, y));
      }
    }
  }
  return {worst <= 1e-9, fmt("%d draws x 20 points, both pairs; max residual %.2e", draws, worst)};
}

EntryOptions catalog_options() {
  EntryOptions eo;
  eo.draws = 5;
  eo.n_points = 50;
  return eo;
}

Outcome table_rows(Table t, const std::string& identity_prefix, double tol) {
  CatalogFilter f;
  f.table = t;
  const auto rows = lookup(f);
  int passed = 0;
  double worst = 0.0;
  std::string failed;
  for (const auto& e : rows) {
    const VerificationReport r = verify_entry(e, catalog_options());
    for (const auto& id : r.identities) {
      if (id.name.rfind(identity_prefix, 0) == 0) worst = std::max(worst, id.max_residual);
    }
    if (r.pass()) {
      ++passed;
    } else {
      failed += " " + e.row_id;
    }
  }
  const bool ok = passed == static_cast<int>(rows.size()) && worst <= tol;
  return {ok, fmt("%d/%zu rows pass (claim + algebra); max %s residual %.2e%s%s", passed, rows.size(),
                  identity_prefix.c_str(), worst, failed.empty() ? "" : "; failed:", failed.c_str())};
}

Outcome table3() { return table_rows(Table::T3, "curvature-zero", 1e-8); }

Outcome table4() {
  CatalogFilter f;
  f.table = Table::T4;
  const auto rows = lookup(f);
  int passed = 0;
  double worst_mean = 0.0, worst_std = 0.0;
  for (const auto& e : rows) {
    const VerificationReport r = verify_entry(e, catalog_options());
    for (const auto& id : r.identities) {
      if (id.name.rfind("curvature-mean", 0) == 0) worst_mean = std::max(worst_mean, id.max_residual);
      if (id.name.rfind("curvature-stddev", 0) == 0) worst_std = std::max(worst_std, id.max_residual);
    }
    if (r.pass()) ++passed;
  }
  const bool ok = passed == static_cast<int>(rows.size()) && worst_mean <= 1e-7 && worst_std <= 1e-8;
  return {ok, fmt("%d/%zu rows Constant(K) for K in {1,2,-1}; max |mean-K| %.2e, max stddev %.2e", passed,
                  rows.size(), worst_mean, worst_std)};
}

Outcome table2() {
  CatalogFilter f;
  f.table = Table::T2;
  const auto rows = lookup(f);
  std::map<std::string, bool> verified;
  int annotated = 0;
  std::string frames;
  for (const auto& e : rows) {
    const VerificationReport r = verify_entry(e, catalog_options());
    verified[e.row_id] = r.pass();
    if (!r.pass() && e.annotation.find("unchecked") != std::string::npos) ++annotated;
    const auto& d = r.details["draws"][0]["revolution"];
    frames += " " + e.row_id + ":" + d.value("frame", std::string("-"));
  }
  int ok_rows = 0;
  for (const auto& [id, v] : verified) ok_rows += v ? 1 : 0;
  bool required = true;
  for (const char* id : {"R_1", "R_2", "R_3", "R_9", "R_10"}) required = required && verified.at(id);
  const bool ok = required && ok_rows + annotated == static_cast<int>(rows.size());
  return {ok, fmt("%d/%zu verified, %d annotated unchecked;%s", ok_rows, rows.size(), annotated, frames.c_str())};
}

Outcome table5() {
  CatalogFilter f;
  f.table = Table::T5;
  f.include_aliases = false;
  const auto rows = lookup(f);
  int passed = 0;
  double worst = 0.0;
  std::string failed;
  for (const auto& e : rows) {
    const VerificationReport r = verify_entry(e, catalog_options());
    worst = std::max(worst, worst_of(r, "linear-integral"));
    if (r.pass()) {
      ++passed;
    } else {
      failed += " " + e.row_id;
    }
  }
  const bool ok = passed == static_cast<int>(rows.size()) && worst <= 1e-9;
  return {ok, fmt("%d/%zu principal rows pass; max linear residual %.2e%s%s", passed, rows.size(), worst,
                  failed.empty() ? "" : "; failed:", failed.c_str())};
}

Outcome membership() {
  double worst_coef = 0.0;
  double worst_rms = 0.0;
  const auto& classes = pins()["casimir_cubic"]["classes"];
  for (const auto c : kAllClasses) {
    const SystemSpec spec = superint::testing::make_spec(c, superint::testing::kGenericParams);
    Rng rng(kDefaultSeed + 10);
    const auto pts = sample_points(spec, 200, rng);
    const Observable h = hamiltonian(spec), a = integral_a(spec), b = integral_b(spec);
    const FirstOrderObservable cobs = c_observable(spec);
    const MembershipResult m = polynomial_membership(
        [&](const PhasePoint& p) { const double v = cobs(p).val; return v * v; },
        {[&](const PhasePoint& p) { return h(p).val; }, [&](const PhasePoint& p) { return a(p).val; },
         [&](const PhasePoint& p) { return b(p).val; }},
        pts);
    const auto& expected = classes[std::string(to_string(c))]["coefficients"];
    for (const auto& mono : m.basis) {
      const auto& pw = mono.powers;
      const std::string key = std::to_string(pw[0]) + std::to_string(pw[1]) + std::to_string(pw[2]);
      const double want = expected.contains(key) ? expected[key].get<double>() : 0.0;
      worst_coef = std::max(worst_coef, std::abs(m.coefficient(pw[0], pw[1], pw[2]) - want));
    }
    worst_rms = std::max(worst_rms, m.rms_residual);
  }
  return {worst_coef <= 1e-6 && worst_rms <= 1e-7,
          fmt("6 classes; max |coefficient - oracle| %.2e, max held-out rms %.2e", worst_coef, worst_rms)};
}

Outcome jets() {
  Rng rng(kDefaultSeed + 11);
  double g = 0.0, h = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const superint::testing::RandomComposition comp(rng, 3);
    const Observable obs(comp.text(), [comp](const PhasePoint& p) { return comp(p); });
    PhasePoint p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto r = superint::testing::compare_with_fd(obs, p);
    g = std::max(g, r.grad);
    h = std::max(h, r.hess);
  }
  return {g <= 1e-6 && h <= 1e-4, fmt("1000 compositions; max gradient diff %.2e, max Hessian diff %.2e", g, h)};
}

Outcome dynamics() {
  const auto t0 = Clock::now();
  double drift = 0.0, reversal = 0.0;
  bool ok = true;
  for (const auto& c : superint::testing::dynamics_cases()) {
    const VerificationReport r = verify_trajectory(c.spec, c.initial);
    for (const auto& id : r.identities) {
      if (id.name == "time-reversal") {
        reversal = std::max(reversal, id.max_residual);
      } else {
        drift = std::max(drift, id.max_residual);
      }
    }
    ok = ok && r.pass();
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 10.0,
          fmt("5 trajectories to t = 10; max drift %.2e, max reversal %.2e, %.2fs", drift, reversal, secs)};
}

std::string run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"superint"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

std::string full_suite(int threads) {
  const std::string t = std::to_string(threads);
  const std::vector<std::string> spec = {"--class", "I2", "--kappa", "1", "--lambda", "0.5", "--mu", "-0.3",
                                         "--nu", "2", "--k", "0.4", "--ell", "-0.1", "--m", "0.2", "--n", "1"};
  std::string all;
  for (const char* cmd : {"verify", "casimir", "curvature", "revolution", "linear", "trajectory"}) {
    std::vector<std::string> args{cmd};
    args.insert(args.end(), spec.begin(), spec.end());
    for (const char* extra : {"--no-timestamp", "--seed", "12648430", "--threads"}) args.emplace_back(extra);
    args.push_back(t);
    if (std::string(cmd) == "trajectory") {
      for (const char* extra : {"--xi", "0.54", "--eta", "1.99", "--p-xi", "0.49", "--p-eta", "0.56"}) args.emplace_back(extra);
    }
    all += run_cli(args);
  }
  all += run_cli({"tables", "--no-timestamp", "--seed", "12648430", "--threads", t});
  return all;
}

Outcome determinism() {
  const std::string a = full_suite(1);
  const std::string b = full_suite(1);
  const std::string c = full_suite(4);
  const bool ok = a == b && a == c && a.find("\"timestamp\"") == std::string::npos;
  return {ok, fmt("%zu bytes; repeat %s, 1 vs 4 threads %s", a.size(), a == b ? "identical" : "DIFFERENT",
                  a == c ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"commutation of H with A, B, C", commutation},
      {"quadratic algebra rows", quadratic_algebra},
      {"Casimir equals K(H)", casimir},
      {"characteristic equations", characteristic},
      {"structural PDEs", structural},
      {"zero-curvature table", table3},
      {"constant-curvature table", table4},
      {"surfaces of revolution table", table2},
      {"linear integral table", table5},
      {"C^2 polynomial membership", membership},
      {"jet derivatives vs finite differences", jets},
      {"conservation along trajectories", dynamics},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s\n", index++, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
