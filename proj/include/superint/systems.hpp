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

// The six fundamental classes of two-dimensional superintegrable systems with
// quadratic integrals. Each class is fixed by a metric pair (F, G) and a
// potential pair (f, g) of the same functional shape: the metric pair uses
// (kappa, lambda, mu, nu), the potential pair (k, ell, m, n).
//
//   Class I  (Liouville):  g(xi, eta) = F(xi + eta) + G(xi - eta)
//   Class II (Lie):        g(xi, eta) = F(eta) xi + G(eta)
//
//   H = (p_xi p_eta + w) / g,  w built from (f, g) like g from (F, G).

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "superint/jets.hpp"

namespace superint {

enum class SystemClass { I1, I2, I3, II1, II2, II3 };

inline constexpr std::array<SystemClass, 6> kAllClasses = {
    SystemClass::I1, SystemClass::I2, SystemClass::I3,
    SystemClass::II1, SystemClass::II2, SystemClass::II3};

std::string_view to_string(SystemClass c);
std::optional<SystemClass> parse_system_class(std::string_view s);
bool is_liouville(SystemClass c);  // Class I

struct SystemSpec {
  SystemClass cls = SystemClass::I1;
  double kappa = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double k = 0.0;
  double ell = 0.0;
  double m = 0.0;
  double n = 0.0;

  bool metric_all_zero() const { return kappa == 0.0 && lambda == 0.0 && mu == 0.0 && nu == 0.0; }
  bool operator==(const SystemSpec&) const = default;
};

// Parameter names in storage order: kappa lambda mu nu k ell m n.
inline constexpr std::array<std::string_view, 8> kParamNames = {
    "kappa", "lambda", "mu", "nu", "k", "ell", "m", "n"};

double param(const SystemSpec& s, int index);
void set_param(SystemSpec& s, int index, double v);
std::optional<int> param_index(std::string_view name);

// JSON spec-file schema: {"class": "I1", "kappa": ..., ..., "n": ...}.
// Missing parameters default to 0; unknown keys are rejected.
nlohmann::json to_json(const SystemSpec& s);
SystemSpec spec_from_json(const nlohmann::json& j);

enum class Pair { Metric, Potential };

// Structure constants (alpha, gamma, a) of the characteristic equation
//   6 A'(s)^2 = 3 gamma A^2 + 3 alpha A - a.
struct ClassConstants {
  double alpha;
  double gamma;
  double a;
};
ClassConstants class_constants(SystemClass c);

// Closed forms of one system. Each member template is instantiated for double
// and Jet2; all evaluation goes through the same code path for both.
class SystemFns {
 public:
  explicit SystemFns(const SystemSpec& spec);

  const SystemSpec& spec() const { return spec_; }
  SystemClass cls() const { return spec_.cls; }

  // F / f (first) and G / g (second) of the chosen pair.
  template <typename T> T first(Pair p, const T& s) const;
  template <typename T> T second(Pair p, const T& s) const;
  // Tilde counterparts, used by the second integral in (X, Y) coordinates.
  template <typename T> T first_tilde(Pair p, const T& u) const;
  template <typename T> T second_tilde(Pair p, const T& v) const;
  // Class II only: antiderivative of `first` with integration constant 0.
  template <typename T> T antiderivative(Pair p, const T& eta) const;

  // g (Metric) or w (Potential) at (xi, eta).
  template <typename T> T combined(Pair p, const T& xi, const T& eta) const;
  template <typename T> T metric(const T& xi, const T& eta) const {
    return combined(Pair::Metric, xi, eta);
  }

  // Solution A(s) of the characteristic equation (B(eta) = A(eta)).
  template <typename T> T char_solution(const T& s) const;
  // X(s) and the momentum factor p_X = factor(s) * p_s, with factor = 1/X'(s).
  template <typename T> T coord_map(const T& s) const;
  template <typename T> T momentum_factor(const T& s) const;

  template <typename T> T hamiltonian(const T& xi, const T& eta, const T& pxi, const T& peta) const;
  template <typename T> T integral_a(const T& xi, const T& eta, const T& pxi, const T& peta) const;
  template <typename T> T integral_b(const T& xi, const T& eta, const T& pxi, const T& peta) const;

 private:
  std::array<double, 4> coeffs(Pair p) const;

  SystemSpec spec_;
};

SystemFns build_fns(const SystemSpec& spec);

Observable hamiltonian(const SystemSpec& spec);
Observable integral_a(const SystemSpec& spec);
Observable integral_b(const SystemSpec& spec);

// Normalised residual of 6 A'^2 - 3 gamma A^2 - 3 alpha A + a at s, divided
// by 1 + sum of the magnitudes of the four terms.
double characteristic_residual(const SystemSpec& spec, double s);
// Unnormalised value of the same expression.
double characteristic_raw(const SystemSpec& spec, double s);

// Normalised residual of the structural operator
//   (A''(xi) - B''(eta)) u + 3 A' u_xi - 3 B' u_eta + 2 A u_xixi - 2 B u_etaeta
// applied to u = g (Metric) or u = w (Potential).
double structural_pde_residual(const SystemSpec& spec, Pair which, double xi, double eta);

// Polynomial in the energy, degree <= 3.
struct EnergyPoly {
  std::array<double, 4> c{};

  static EnergyPoly constant(double v) { return EnergyPoly{{v, 0.0, 0.0, 0.0}}; }
  // slope * E - offset, the ubiquitous (kappa H - k) shape.
  static EnergyPoly linear(double slope, double offset) { return EnergyPoly{{-offset, slope, 0.0, 0.0}}; }

  double operator()(double e) const { return c[0] + e * (c[1] + e * (c[2] + e * c[3])); }
};

EnergyPoly operator+(const EnergyPoly& a, const EnergyPoly& b);
EnergyPoly operator-(const EnergyPoly& a, const EnergyPoly& b);
EnergyPoly operator*(const EnergyPoly& a, const EnergyPoly& b);  // throws if degree > 3
EnergyPoly operator*(double s, const EnergyPoly& a);

// Structure constants of the quadratic algebra at a fixed energy.
//   {A, C} = alpha A^2 + 2 gamma A B + delta A + epsilon B + zeta
//   {B, C} = a A^2 - gamma B^2 - 2 alpha A B + d A - delta B + z
//   C^2 - 2 alpha A^2 B - 2 gamma A B^2 - 2 delta A B - epsilon B^2 - 2 zeta B
//       + 2/3 a A^3 + d A^2 + 2 z A = K
// beta is always 0 in this presentation.
struct AlgebraConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double zeta = 0.0;
  double d = 0.0;
  double z = 0.0;
  double k_casimir = 0.0;
};

struct AlgebraPolynomials {
  double alpha = 0.0;
  double gamma = 0.0;
  double a = 0.0;
  EnergyPoly delta, epsilon, zeta, d, z, k_casimir;

  AlgebraConstants at(double energy) const;
};

AlgebraPolynomials algebra_polynomials(const SystemSpec& spec);
AlgebraConstants algebra_constants(const SystemSpec& spec, double energy);

}  // namespace superint
