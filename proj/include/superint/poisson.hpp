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

// Poisson brackets over the canonical pairs (xi, p_xi), (eta, p_eta):
//   {F, G} = F_xi G_pxi - F_pxi G_xi + F_eta G_peta - F_peta G_eta.

#include <cstdint>
#include <functional>
#include <string>

#include "superint/jets.hpp"
#include "superint/report.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint {

// Value and gradient of {f, g}; the gradient uses both Hessians.
Jet1 bracket(const Jet2& f, const Jet2& g);
// Value of {f, g} for first-order data.
double bracket(const Jet1& f, const Jet1& g);
Jet1 bracket(const Observable& f, const Observable& g, const PhasePoint& point);

Jet1 truncate(const Jet2& j);

// Sum of the magnitudes of the four products making up {f, g}.
double bracket_scale(const Jet1& f, const Jet1& g);
// Same formula as bracket(Jet2, Jet2) with every product replaced by its
// magnitude: val and grad bound the size of what cancels in {f, g}.
Jet1 bracket_magnitude(const Jet2& f, const Jet2& g);
// Magnitude of the products in {f, c} where c carries cancellation of size
// c_mag in its derivatives.
double nested_scale(const Jet1& f, const Jet1& c_mag);

// A computed quantity together with the sum of the magnitudes of the terms
// it was assembled from. Identities are compared with
//   |lhs - rhs| / (1 + max(lhs.scale, rhs.scale, |lhs|, |rhs|)),
// which measures disagreement relative to what floating point can resolve.
struct Scaled {
  double value = 0.0;
  double scale = 0.0;
};
double scaled_residual(const Scaled& lhs, const Scaled& rhs);

class FirstOrderObservable {
 public:
  using Fn = std::function<Jet1(const PhasePoint&)>;

  FirstOrderObservable(std::string label, Fn fn) : label_(std::move(label)), fn_(std::move(fn)) {}

  Jet1 operator()(const PhasePoint& point) const { return fn_(point); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  Fn fn_;
};

// C = {A, B}, with first derivatives.
FirstOrderObservable c_observable(const SystemSpec& spec);

// Every quantity the verifiers need at one phase point.
struct PointBrackets {
  double h = 0.0, a = 0.0, b = 0.0;
  Scaled c;  // scale bounds the cancellation in C itself
  Scaled ha, hb, hc, ac, bc;
};
PointBrackets point_brackets(const SystemSpec& spec, const PhasePoint& point);

struct VerifyOptions {
  int n_points = 100;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  Tolerances tol;
};

// Right-hand sides of the two algebra rows and the Casimir combination.
Scaled ac_row(const AlgebraConstants& k, double a, double b);
Scaled bc_row(const AlgebraConstants& k, double a, double b);
Scaled casimir_combination(const AlgebraConstants& k, double a, double b, const Scaled& c);

// Commutation of H with A, B, C and both algebra rows, against the constants
// returned by `constants` (algebra_constants by default).
using ConstantsFn = std::function<AlgebraConstants(const SystemSpec&, double)>;
VerificationReport verify_algebra(const SystemSpec& spec, const VerifyOptions& opts = {},
                                  const ConstantsFn& constants = algebra_constants);
VerificationReport verify_casimir(const SystemSpec& spec, const VerifyOptions& opts = {},
                                  const ConstantsFn& constants = algebra_constants);

}  // namespace superint
