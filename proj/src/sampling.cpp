// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/sampling.hpp"

#include <cmath>

namespace superint {

bool SampleDomain::admits_shape(double xi_v, double eta_v) const {
  if (min_abs_diff > 0.0 && std::abs(xi_v - eta_v) < min_abs_diff) return false;
  if (min_abs_sum > 0.0 && std::abs(xi_v + eta_v) < min_abs_sum) return false;
  if (min_sum != 0.0 && xi_v + eta_v < min_sum) return false;
  return true;
}

bool SampleDomain::admits(const SystemFns& fns, double xi_v, double eta_v) const {
  if (!xi.contains(xi_v) || !eta.contains(eta_v)) return false;
  if (!admits_shape(xi_v, eta_v)) return false;
  try {
    const double g = fns.metric(xi_v, eta_v);
    return std::isfinite(g) && std::abs(g) >= min_abs_g;
  } catch (const DomainError&) {
    return false;
  }
}

SampleDomain default_domain(SystemClass c) {
  SampleDomain d;
  switch (c) {
    case SystemClass::I1:
      d.xi = d.eta = {0.2, 2.0};
      d.min_abs_diff = 0.15;
      break;
    case SystemClass::I2:
      d.xi = d.eta = {0.3, 2.0};
      d.min_abs_diff = 0.15;
      d.min_sum = 0.4;
      break;
    case SystemClass::I3:
      d.xi = d.eta = {-1.0, 1.0};
      d.min_abs_diff = 0.2;
      d.min_abs_sum = 0.2;
      break;
    case SystemClass::II1:
      d.xi = d.eta = {0.5, 2.0};
      break;
    case SystemClass::II2:
      d.xi = {0.2, 2.0};
      d.eta = {0.3, 2.0};
      break;
    case SystemClass::II3:
      d.xi = d.eta = {0.3, 2.0};
      break;
  }
  return d;
}

namespace {

void check_metric(const SystemSpec& spec) {
  if (spec.metric_all_zero()) {
    throw SamplingError("degenerate system: all metric parameters are zero");
  }
}

[[noreturn]] void too_many_rejections(const SystemSpec& spec, int accepted, int attempts) {
  throw SamplingError("sampling domain of class " + std::string(to_string(spec.cls)) +
                      " rejected too many draws (" + std::to_string(attempts - accepted) + " of " +
                      std::to_string(attempts) + ")");
}

}  // namespace

std::vector<PhasePoint> sample_points(const SystemSpec& spec, const SampleDomain& domain, int n,
                                      Rng& rng) {
  check_metric(spec);
  const SystemFns fns(spec);
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  const int max_attempts = 10 * std::max(n, 1);
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (attempts >= max_attempts) too_many_rejections(spec, static_cast<int>(out.size()), attempts);
    ++attempts;
    PhasePoint p;
    p.xi = rng.uniform(domain.xi);
    p.eta = rng.uniform(domain.eta);
    p.p_xi = rng.uniform(domain.momentum);
    p.p_eta = rng.uniform(domain.momentum);
    if (!domain.admits(fns, p.xi, p.eta)) continue;
    try {
      const double vals[] = {fns.hamiltonian(p.xi, p.eta, p.p_xi, p.p_eta),
                             fns.integral_a(p.xi, p.eta, p.p_xi, p.p_eta),
                             fns.integral_b(p.xi, p.eta, p.p_xi, p.p_eta)};
      bool ok = true;
      for (double v : vals) ok = ok && std::isfinite(v);
      if (!ok) continue;
    } catch (const DomainError&) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<PhasePoint> sample_points(const SystemSpec& spec, int n, Rng& rng) {
  return sample_points(spec, default_domain(spec.cls), n, rng);
}

std::vector<std::pair<double, double>> sample_coordinates(const SystemSpec& spec,
                                                          const SampleDomain& domain, int n,
                                                          Rng& rng) {
  check_metric(spec);
  const SystemFns fns(spec);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(n));
  const int max_attempts = 10 * std::max(n, 1);
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (attempts >= max_attempts) too_many_rejections(spec, static_cast<int>(out.size()), attempts);
    ++attempts;
    const double x = rng.uniform(domain.xi);
    const double y = rng.uniform(domain.eta);
    if (domain.admits(fns, x, y)) out.emplace_back(x, y);
  }
  return out;
}

SystemSpec random_spec(SystemClass c, Rng& rng, double lo, double hi) {
  SystemSpec s;
  s.cls = c;
  for (int i = 0; i < 8; ++i) set_param(s, i, rng.uniform(lo, hi));
  return s;
}

}  // namespace superint
