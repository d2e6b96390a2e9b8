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

// Shared fixtures for the unit tests and the acceptance runner.

#include <array>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "superint/jets.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint::testing {

// Values derived by tests/oracles/derive_pins.py.
inline const nlohmann::json& pins() {
  static const nlohmann::json doc = [] {
    std::ifstream in(SUPERINT_PINS_PATH);
    if (!in) throw std::runtime_error("cannot open " SUPERINT_PINS_PATH);
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline SystemSpec make_spec(SystemClass c, std::array<double, 8> params) {
  SystemSpec s;
  s.cls = c;
  for (int i = 0; i < 8; ++i) set_param(s, i, params[i]);
  return s;
}

// (kappa, lambda, mu, nu, k, ell, m, n) used throughout the examples.
inline constexpr std::array<double, 8> kGenericParams = {1.0, 0.5, -0.3, 2.0, 0.4, -0.1, 0.2, 1.0};

// A random composition of jet primitives in the four phase variables. Every
// node keeps its argument inside the primitive's domain (log(2 + cos u),
// sqrt(1 + u^2), ...), so compositions are defined on all of R^4.
class RandomComposition {
 public:
  using Fn = std::function<Jet2(const std::array<Jet2, kPhaseDim>&)>;

  RandomComposition(Rng& rng, int depth) : fn_(build(rng, depth, text_)) {}

  Jet2 operator()(const PhasePoint& p) const { return fn_(jet_seed(p)); }
  const std::string& text() const { return text_; }

 private:
  static Fn build(Rng& rng, int depth, std::string& text) {
    if (depth == 0 || rng.uniform01() < 0.2) {
      std::array<double, kPhaseDim> c{};
      for (auto& x : c) x = rng.uniform(-1.0, 1.0);
      const double c0 = rng.uniform(-1.0, 1.0);
      text = "lin";
      return [c, c0](const std::array<Jet2, kPhaseDim>& v) {
        Jet2 out(c0);
        for (int i = 0; i < kPhaseDim; ++i) out += c[i] * v[i];
        return out;
      };
    }
    if (rng.uniform01() < 0.4) {
      std::string ta, tb;
      Fn a = build(rng, depth - 1, ta);
      Fn b = build(rng, depth - 1, tb);
      switch (static_cast<int>(rng.uniform01() * 3)) {
        case 0:
          text = "(" + ta + " + " + tb + ")";
          return [a, b](const auto& v) { return a(v) + b(v); };
        case 1:
          text = "(" + ta + " * " + tb + ")";
          return [a, b](const auto& v) { return a(v) * b(v); };
        default:
          text = "(" + ta + " / (2 + sin " + tb + "))";
          return [a, b](const auto& v) { return a(v) / (2.0 + sin(b(v))); };
      }
    }
    std::string ta;
    Fn a = build(rng, depth - 1, ta);
    switch (static_cast<int>(rng.uniform01() * 13)) {
      case 0: text = "sin " + ta; return [a](const auto& v) { return sin(a(v)); };
      case 1: text = "cos " + ta; return [a](const auto& v) { return cos(a(v)); };
      case 2: text = "atan " + ta; return [a](const auto& v) { return atan(a(v)); };
      case 3: text = "exp sin " + ta; return [a](const auto& v) { return exp(sin(a(v))); };
      case 4: text = "log(2 + cos " + ta + ")"; return [a](const auto& v) { return log(2.0 + cos(a(v))); };
      case 5: text = "sqrt(1 + sq " + ta + ")"; return [a](const auto& v) { const Jet2 u = a(v); return sqrt(1.0 + u * u); };
      case 6: text = "inv(2 + sin " + ta + ")"; return [a](const auto& v) { return inv(2.0 + sin(a(v))); };
      case 7: text = "tan(sin " + ta + ")"; return [a](const auto& v) { return tan(sin(a(v))); };
      case 8: text = "sinh sin " + ta; return [a](const auto& v) { return sinh(sin(a(v))); };
      case 9: text = "cosh sin " + ta; return [a](const auto& v) { return cosh(sin(a(v))); };
      case 10: text = "pow(" + ta + ", 3)"; return [a](const auto& v) { return pow(a(v), 3); };
      case 11: text = "pow(1 + sq " + ta + ", 0.7)"; return [a](const auto& v) { const Jet2 u = a(v); return pow(1.0 + u * u, 0.7); };
      default: text = "pow(2 + sin " + ta + ", -2)"; return [a](const auto& v) { return pow(2.0 + sin(a(v)), -2); };
    }
  }

  std::string text_;
  Fn fn_;
};

struct JetCheck {
  double grad = 0.0;  // worst normalised gradient difference
  double hess = 0.0;  // worst normalised Hessian difference
};

// Jet derivatives of `obs` at `point` against the finite-difference oracle.
inline JetCheck compare_with_fd(const Observable& obs, const PhasePoint& point) {
  const Jet2 j = obs(point);
  const FdDerivatives fd = fd_derivatives(obs, point);
  JetCheck out;
  for (int i = 0; i < kPhaseDim; ++i) out.grad = std::max(out.grad, normalized_diff(j.grad[i], fd.grad[i]));
  for (int i = 0; i < kHessSize; ++i) out.hess = std::max(out.hess, normalized_diff(j.hess[i], fd.hess[i]));
  return out;
}

struct DynamicsCase {
  SystemSpec spec;
  PhasePoint initial;
};

// Fixed (spec, initial point) pairs whose flows stay in the domain to t = 10.
inline std::vector<DynamicsCase> dynamics_cases() {
  return {
      {make_spec(SystemClass::I1, {-0.4, -2.0, 0.1, 0.7, 0.5, 1.3, 1.8, 1.0}), {1.71, 0.47, 0.59, 0.52}},
      {make_spec(SystemClass::I2, {-1.5, 1.2, -1.1, -1.6, 1.6, -0.1, -1.5, 0.8}), {0.54, 1.99, 0.49, 0.56}},
      {make_spec(SystemClass::I3, {0.0, -1.7, -1.8, 0.3, 1.9, 0.1, -1.3, 1.0}), {0.53, -0.85, 0.17, -0.12}},
      {make_spec(SystemClass::II1, {1.7, 0.1, -1.1, 0.4, -0.1, 1.3, -1.3, 1.8}), {0.83, 1.48, -0.34, -0.59}},
      {make_spec(SystemClass::II3, {1.5, 0.0, 1.6, 0.9, -1.0, -0.1, -0.7, 0.3}), {1.83, 1.88, 0.03, 0.16}},
  };
}

}  // namespace superint::testing
