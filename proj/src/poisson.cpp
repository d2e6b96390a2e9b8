// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/poisson.hpp"

#include <algorithm>
#include <cmath>

#include "superint/membership.hpp"
#include "superint/parallel.hpp"

namespace superint {

namespace {

constexpr int kQ[2] = {kXi, kEta};
constexpr int kP[2] = {kPXi, kPEta};

}  // namespace

Jet1 truncate(const Jet2& j) {
  Jet1 out;
  out.val = j.val;
  out.grad = j.grad;
  return out;
}

Jet1 bracket(const Jet2& f, const Jet2& g) {
  Jet1 out;
  for (int pair = 0; pair < 2; ++pair) {
    const int q = kQ[pair];
    const int p = kP[pair];
    out.val += f.grad[q] * g.grad[p] - f.grad[p] * g.grad[q];
    for (int k = 0; k < kPhaseDim; ++k) {
      out.grad[k] += f.h(q, k) * g.grad[p] + f.grad[q] * g.h(p, k) - f.h(p, k) * g.grad[q] -
                     f.grad[p] * g.h(q, k);
    }
  }
  return out;
}

double bracket(const Jet1& f, const Jet1& g) {
  double out = 0.0;
  for (int pair = 0; pair < 2; ++pair) {
    out += f.grad[kQ[pair]] * g.grad[kP[pair]] - f.grad[kP[pair]] * g.grad[kQ[pair]];
  }
  return out;
}

Jet1 bracket(const Observable& f, const Observable& g, const PhasePoint& point) {
  return bracket(f(point), g(point));
}

double bracket_scale(const Jet1& f, const Jet1& g) {
  double out = 0.0;
  for (int pair = 0; pair < 2; ++pair) {
    out += std::abs(f.grad[kQ[pair]] * g.grad[kP[pair]]) + std::abs(f.grad[kP[pair]] * g.grad[kQ[pair]]);
  }
  return out;
}

Jet1 bracket_magnitude(const Jet2& f, const Jet2& g) {
  Jet1 out;
  for (int pair = 0; pair < 2; ++pair) {
    const int q = kQ[pair];
    const int p = kP[pair];
    out.val += std::abs(f.grad[q] * g.grad[p]) + std::abs(f.grad[p] * g.grad[q]);
    for (int k = 0; k < kPhaseDim; ++k) {
      out.grad[k] += std::abs(f.h(q, k) * g.grad[p]) + std::abs(f.grad[q] * g.h(p, k)) +
                     std::abs(f.h(p, k) * g.grad[q]) + std::abs(f.grad[p] * g.h(q, k));
    }
  }
  return out;
}

double nested_scale(const Jet1& f, const Jet1& c_mag) {
  double out = 0.0;
  for (int pair = 0; pair < 2; ++pair) {
    out += std::abs(f.grad[kQ[pair]]) * c_mag.grad[kP[pair]] + std::abs(f.grad[kP[pair]]) * c_mag.grad[kQ[pair]];
  }
  return out;
}

double scaled_residual(const Scaled& lhs, const Scaled& rhs) {
  const double scale = std::max({lhs.scale, rhs.scale, std::abs(lhs.value), std::abs(rhs.value)});
  return std::abs(lhs.value - rhs.value) / (1.0 + scale);
}

FirstOrderObservable c_observable(const SystemSpec& spec) {
  return FirstOrderObservable("C", [fns = SystemFns(spec)](const PhasePoint& p) {
    const auto [x, e, px, pe] = jet_seed(p);
    return bracket(fns.integral_a(x, e, px, pe), fns.integral_b(x, e, px, pe));
  });
}

PointBrackets point_brackets(const SystemSpec& spec, const PhasePoint& point) {
  const SystemFns fns(spec);
  const auto [x, e, px, pe] = jet_seed(point);
  const Jet2 h2 = fns.hamiltonian(x, e, px, pe);
  const Jet2 a2 = fns.integral_a(x, e, px, pe);
  const Jet2 b2 = fns.integral_b(x, e, px, pe);
  const Jet1 h = truncate(h2);
  const Jet1 a = truncate(a2);
  const Jet1 b = truncate(b2);
  const Jet1 c = bracket(a2, b2);
  // The derivatives of C come out of cancelling Hessian products; their
  // magnitude, not |C|, sets the resolution of every bracket involving C.
  Jet1 c_mag = bracket_magnitude(a2, b2);
  for (int k = 0; k < kPhaseDim; ++k) c_mag.grad[k] += std::abs(c.grad[k]);

  PointBrackets out;
  out.h = h.val;
  out.a = a.val;
  out.b = b.val;
  out.c = {c.val, c_mag.val};
  out.ha = {bracket(h, a), bracket_scale(h, a)};
  out.hb = {bracket(h, b), bracket_scale(h, b)};
  out.hc = {bracket(h, c), nested_scale(h, c_mag)};
  out.ac = {bracket(a, c), nested_scale(a, c_mag)};
  out.bc = {bracket(b, c), nested_scale(b, c_mag)};
  return out;
}

namespace {

// Sums terms while accumulating their magnitudes.
class TermSum {
 public:
  TermSum& operator+=(double t) {
    value_ += t;
    scale_ += std::abs(t);
    return *this;
  }
  Scaled result() const { return {value_, scale_}; }

 private:
  double value_ = 0.0;
  double scale_ = 0.0;
};

}  // namespace

Scaled ac_row(const AlgebraConstants& k, double a, double b) {
  TermSum s;
  s += k.alpha * a * a;
  s += 2.0 * k.gamma * a * b;
  s += k.delta * a;
  s += k.epsilon * b;
  s += k.zeta;
  return s.result();
}

Scaled bc_row(const AlgebraConstants& k, double a, double b) {
  TermSum s;
  s += k.a * a * a;
  s += -k.gamma * b * b;
  s += -2.0 * k.alpha * a * b;
  s += k.d * a;
  s += -k.delta * b;
  s += k.z;
  return s.result();
}

Scaled casimir_combination(const AlgebraConstants& k, double a, double b, const Scaled& c) {
  TermSum s;
  s += c.value * c.value;
  s += -2.0 * k.alpha * a * a * b;
  s += -2.0 * k.gamma * a * b * b;
  s += -2.0 * k.delta * a * b;
  s += -k.epsilon * b * b;
  s += -2.0 * k.zeta * b;
  s += (2.0 / 3.0) * k.a * a * a * a;
  s += k.d * a * a;
  s += 2.0 * k.z * a;
  Scaled out = s.result();
  out.scale += c.scale * c.scale;
  return out;
}

namespace {

double vanishing_residual(const Scaled& s) { return scaled_residual(s, Scaled{}); }

std::vector<PointBrackets> evaluate_all(const SystemSpec& spec, const std::vector<PhasePoint>& points,
                                        int threads) {
  std::vector<PointBrackets> out(points.size());
  parallel_for(static_cast<int>(points.size()), threads,
               [&](int i) { out[static_cast<std::size_t>(i)] = point_brackets(spec, points[static_cast<std::size_t>(i)]); });
  return out;
}

VerificationReport new_report(const char* kind, const SystemSpec& spec, const VerifyOptions& opts) {
  VerificationReport r;
  r.kind = kind;
  r.spec = spec;
  r.seed = opts.seed;
  r.n_points = opts.n_points;
  return r;
}

// Fits each target as a free cubic polynomial in (H, A, B) and returns the
// worst held-out residual. Used only after the printed constants failed, to
// tell convention drift (small fit residual) from a genuine failure.
std::optional<double> drift_fit(const std::vector<PointBrackets>& data,
                                const std::vector<std::function<double(const PointBrackets&)>>& targets) {
  const int needed = 2 * static_cast<int>(monomial_basis(3).size());
  if (static_cast<int>(data.size()) < needed) return std::nullopt;
  std::vector<std::array<double, 3>> rows;
  for (const auto& d : data) rows.push_back({d.h, d.a, d.b});
  double worst = 0.0;
  try {
    for (const auto& target : targets) {
      std::vector<double> t;
      for (const auto& d : data) t.push_back(target(d));
      worst = std::max(worst, polynomial_membership(rows, t).rms_residual);
    }
  } catch (const IllConditioned&) {
    return std::nullopt;
  }
  return worst;
}

}  // namespace

VerificationReport verify_algebra(const SystemSpec& spec, const VerifyOptions& opts,
                                  const ConstantsFn& constants) {
  Rng rng(opts.seed);
  const auto points = sample_points(spec, opts.n_points, rng);
  const auto data = evaluate_all(spec, points, opts.threads);

  double ha = 0.0, hb = 0.0, hc = 0.0, ac = 0.0, bc = 0.0;
  for (const auto& d : data) {
    const AlgebraConstants k = constants(spec, d.h);
    ha = std::max(ha, vanishing_residual(d.ha));
    hb = std::max(hb, vanishing_residual(d.hb));
    hc = std::max(hc, vanishing_residual(d.hc));
    ac = std::max(ac, scaled_residual(d.ac, ac_row(k, d.a, d.b)));
    bc = std::max(bc, scaled_residual(d.bc, bc_row(k, d.a, d.b)));
  }

  VerificationReport r = new_report("algebra", spec, opts);
  r.add("HA", ha, opts.tol.first_bracket);
  r.add("HB", hb, opts.tol.first_bracket);
  r.add("HC", hc, opts.tol.nested_bracket);
  r.add("AC-row", ac, opts.tol.nested_bracket);
  r.add("BC-row", bc, opts.tol.nested_bracket);
  if (!r.identities[3].pass || !r.identities[4].pass) {
    r.correction_applied = true;
    r.corrected_residual = drift_fit(data, {[](const PointBrackets& d) { return d.ac.value; },
                                            [](const PointBrackets& d) { return d.bc.value; }});
  }
  return r;
}

VerificationReport verify_casimir(const SystemSpec& spec, const VerifyOptions& opts,
                                  const ConstantsFn& constants) {
  Rng rng(opts.seed);
  const auto points = sample_points(spec, opts.n_points, rng);
  const auto data = evaluate_all(spec, points, opts.threads);

  double worst = 0.0;
  for (const auto& d : data) {
    const AlgebraConstants k = constants(spec, d.h);
    const Scaled rhs{k.k_casimir, std::abs(k.k_casimir)};
    worst = std::max(worst, scaled_residual(casimir_combination(k, d.a, d.b, d.c), rhs));
  }
  VerificationReport r = new_report("casimir", spec, opts);
  r.add("casimir", worst, opts.tol.casimir);
  if (!r.identities[0].pass) {
    r.correction_applied = true;
    r.corrected_residual = drift_fit(data, {[](const PointBrackets& d) { return d.c.value * d.c.value; }});
  }
  return r;
}

}  // namespace superint
