// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace superint {

namespace {

template <typename T>
T sq(const T& x) {
  return x * x;
}

// The quadratic integral of a Liouville system written in its own
// coordinates (P, Q momenta; first/second evaluated at U = X+Y, V = X-Y):
//   P^2 + Q^2 - 2 P Q (F - G)/(F + G) + 4 (f G - g F)/(F + G)
template <typename T>
T liouville_integral(const T& P, const T& Q, const T& F, const T& G, const T& f, const T& g) {
  const T denom_inv = 1.0 / (F + G);
  return P * P + Q * Q - 2.0 * P * Q * (F - G) * denom_inv + 4.0 * (f * G - g * F) * denom_inv;
}

}  // namespace

std::string_view to_string(SystemClass c) {
  switch (c) {
    case SystemClass::I1: return "I1";
    case SystemClass::I2: return "I2";
    case SystemClass::I3: return "I3";
    case SystemClass::II1: return "II1";
    case SystemClass::II2: return "II2";
    case SystemClass::II3: return "II3";
  }
  return "?";
}

std::optional<SystemClass> parse_system_class(std::string_view s) {
  for (SystemClass c : kAllClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

bool is_liouville(SystemClass c) {
  return c == SystemClass::I1 || c == SystemClass::I2 || c == SystemClass::I3;
}

double param(const SystemSpec& s, int index) {
  switch (index) {
    case 0: return s.kappa;
    case 1: return s.lambda;
    case 2: return s.mu;
    case 3: return s.nu;
    case 4: return s.k;
    case 5: return s.ell;
    case 6: return s.m;
    case 7: return s.n;
  }
  throw std::out_of_range("parameter index");
}

void set_param(SystemSpec& s, int index, double v) {
  switch (index) {
    case 0: s.kappa = v; return;
    case 1: s.lambda = v; return;
    case 2: s.mu = v; return;
    case 3: s.nu = v; return;
    case 4: s.k = v; return;
    case 5: s.ell = v; return;
    case 6: s.m = v; return;
    case 7: s.n = v; return;
  }
  throw std::out_of_range("parameter index");
}

std::optional<int> param_index(std::string_view name) {
  for (int i = 0; i < static_cast<int>(kParamNames.size()); ++i) {
    if (kParamNames[i] == name) return i;
  }
  return std::nullopt;
}

nlohmann::json to_json(const SystemSpec& s) {
  nlohmann::json j;
  j["class"] = std::string(to_string(s.cls));
  for (int i = 0; i < 8; ++i) j[std::string(kParamNames[i])] = param(s, i);
  return j;
}

SystemSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("system spec must be a JSON object");
  if (!j.contains("class") || !j["class"].is_string()) {
    throw std::invalid_argument("system spec requires a string \"class\"");
  }
  SystemSpec s;
  const auto cls = parse_system_class(j["class"].get<std::string>());
  if (!cls) throw std::invalid_argument("unknown system class: " + j["class"].get<std::string>());
  s.cls = *cls;
  for (const auto& [key, value] : j.items()) {
    if (key == "class") continue;
    const auto idx = param_index(key);
    if (!idx) throw std::invalid_argument("unknown system spec key: " + key);
    if (!value.is_number()) throw std::invalid_argument("parameter " + key + " must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw std::invalid_argument("parameter " + key + " must be finite");
    set_param(s, *idx, v);
  }
  return s;
}

ClassConstants class_constants(SystemClass c) {
  switch (c) {
    case SystemClass::I1: return {0.0, 0.0, -6.0};
    case SystemClass::I2: return {8.0, 0.0, 0.0};
    // a = 0 follows from 6 A'^2 = 24 A^2 - 96 A for A = (e^s + e^-s)^2.
    case SystemClass::I3: return {-32.0, 8.0, 0.0};
    case SystemClass::II1: return {0.0, 0.0, 0.0};
    case SystemClass::II2: return {0.0, 0.0, -6.0};
    case SystemClass::II3: return {8.0, 0.0, 0.0};
  }
  throw std::logic_error("unknown class");
}

SystemFns::SystemFns(const SystemSpec& spec) : spec_(spec) {}

SystemFns build_fns(const SystemSpec& spec) { return SystemFns(spec); }

std::array<double, 4> SystemFns::coeffs(Pair p) const {
  if (p == Pair::Metric) return {spec_.kappa, spec_.lambda, spec_.mu, spec_.nu};
  return {spec_.k, spec_.ell, spec_.m, spec_.n};
}

// Coefficient order is (kappa, lambda, mu, nu) for the metric pair and
// (k, ell, m, n) for the potential pair.
template <typename T>
T SystemFns::first(Pair p, const T& s) const {
  using std::exp;
  using std::sqrt;
  const auto [c1, c2, c3, c4] = coeffs(p);
  (void)c3;
  switch (spec_.cls) {
    case SystemClass::I1: return 4.0 * c2 * s * s + c1 * s + c4 / 2.0;
    case SystemClass::I2: return c2 * s * s + c1 / (s * s) + c4 / 2.0;
    case SystemClass::I3: {
      const T e1 = exp(s);
      const T e2 = e1 * e1;
      return (c1 * e2 + c2 * e1 * (1.0 + e2)) / sq(e2 - 1.0);
    }
    case SystemClass::II1: return c1 * s + c2;
    case SystemClass::II2: return c1 / sqrt(s) + c2;
    case SystemClass::II3: return c2 * s + c1 / (s * s * s);
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::second(Pair p, const T& s) const {
  using std::exp;
  using std::sqrt;
  const auto [c1, c2, c3, c4] = coeffs(p);
  switch (spec_.cls) {
    case SystemClass::I1: return -c2 * s * s + c3 / (s * s) + c4 / 2.0;
    case SystemClass::I2: return -c2 * s * s + c3 / (s * s) + c4 / 2.0;
    case SystemClass::I3: {
      const T e1 = exp(s);
      const T e2 = e1 * e1;
      return (c3 * e2 + c4 * e1 * (1.0 + e2)) / sq(e2 - 1.0);
    }
    case SystemClass::II1: return c3 * s + c4;
    case SystemClass::II2: {
      const T r = sqrt(s);
      return 3.0 * c1 * r + c2 * s + c3 / r + c4;
    }
    case SystemClass::II3: return c4 + c3 / (s * s);
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::first_tilde(Pair p, const T& u) const {
  using std::exp;
  using std::tan;
  const auto [c1, c2, c3, c4] = coeffs(p);
  switch (spec_.cls) {
    case SystemClass::I1: {
      const T u2 = u * u;
      return c2 * u2 * u2 * u2 / 256.0 + c1 * u2 * u2 / 128.0 + c4 * u2 / 16.0 - c3 / u2;
    }
    case SystemClass::I2: {
      const T e1 = exp(u);
      return 4.0 * c2 * e1 * e1 + c4 * e1;
    }
    case SystemClass::I3: {
      const T t2 = sq(tan(u));
      return (c1 + 2.0 * c2) / 4.0 * t2 + (2.0 * c4 - c3) / 4.0 / t2 + (c2 + c4) / 2.0;
    }
    case SystemClass::II1: return c1 * u * u / 4.0 + (c2 + c3) * u / 2.0 + c4 / 2.0;
    case SystemClass::II2: {
      const T u2 = u * u;
      return c2 * u2 * u2 / 128.0 + c1 * u2 * u / 16.0 + c4 * u2 / 16.0 + c3 * u / 4.0;
    }
    case SystemClass::II3: {
      const T e1 = exp(u);
      return c2 * e1 * e1 + c4 * e1;
    }
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::second_tilde(Pair p, const T& v) const {
  using std::exp;
  using std::tan;
  const auto [c1, c2, c3, c4] = coeffs(p);
  switch (spec_.cls) {
    case SystemClass::I1: {
      const T v2 = v * v;
      return -c2 * v2 * v2 * v2 / 256.0 - c1 * v2 * v2 / 128.0 - c4 * v2 / 16.0 + c3 / v2;
    }
    case SystemClass::I2: {
      const T e1 = exp(v);
      return c1 * e1 / sq(1.0 + e1) + c3 * e1 / sq(e1 - 1.0);
    }
    case SystemClass::I3: {
      const T t2 = sq(tan(v));
      return (2.0 * c2 - c1) / 4.0 * t2 + (c3 + 2.0 * c4) / 4.0 / t2 + (c2 + c4) / 2.0;
    }
    case SystemClass::II1: return -c1 * v * v / 4.0 + (c2 - c3) * v / 2.0 + c4 / 2.0;
    case SystemClass::II2: {
      const T v2 = v * v;
      return -c2 * v2 * v2 / 128.0 + c1 * v2 * v / 16.0 + c3 * v / 4.0 - c4 * v2 / 16.0;
    }
    case SystemClass::II3: {
      const T e1 = exp(v);
      return c1 * e1 * e1 + c3 * e1;
    }
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::antiderivative(Pair p, const T& eta) const {
  using std::sqrt;
  const auto [c1, c2, c3, c4] = coeffs(p);
  (void)c3;
  (void)c4;
  switch (spec_.cls) {
    case SystemClass::II1: return c1 * eta * eta / 2.0 + c2 * eta;
    case SystemClass::II2: return 2.0 * c1 * sqrt(eta) + c2 * eta;
    case SystemClass::II3: return c2 * eta * eta / 2.0 - c1 / (2.0 * eta * eta);
    default: break;
  }
  throw std::logic_error("antiderivative is defined for Class II only");
}

template <typename T>
T SystemFns::combined(Pair p, const T& xi, const T& eta) const {
  if (is_liouville(spec_.cls)) return first(p, T(xi + eta)) + second(p, T(xi - eta));
  return first(p, eta) * xi + second(p, eta);
}

template <typename T>
T SystemFns::char_solution(const T& s) const {
  using std::exp;
  switch (spec_.cls) {
    case SystemClass::I1:
    case SystemClass::II2: return s;
    case SystemClass::I2:
    case SystemClass::II3: return s * s;
    case SystemClass::I3: return sq(exp(s) + exp(-s));
    case SystemClass::II1: return T(1.0);
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::coord_map(const T& s) const {
  using std::atan;
  using std::exp;
  using std::log;
  using std::sqrt;
  switch (spec_.cls) {
    case SystemClass::I1:
    case SystemClass::II2: return 2.0 * sqrt(s);
    case SystemClass::I2:
    case SystemClass::II3: return log(s);
    case SystemClass::I3: return atan(exp(s));
    case SystemClass::II1: return s;
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::momentum_factor(const T& s) const {
  using std::exp;
  using std::sqrt;
  switch (spec_.cls) {
    case SystemClass::I1:
    case SystemClass::II2: return sqrt(s);
    case SystemClass::I2:
    case SystemClass::II3: return s;
    case SystemClass::I3: return exp(s) + exp(-s);
    case SystemClass::II1: return T(1.0);
  }
  throw std::logic_error("unknown class");
}

template <typename T>
T SystemFns::hamiltonian(const T& xi, const T& eta, const T& pxi, const T& peta) const {
  const T g = combined(Pair::Metric, xi, eta);
  const T w = combined(Pair::Potential, xi, eta);
  return (pxi * peta + w) / g;
}

template <typename T>
T SystemFns::integral_a(const T& xi, const T& eta, const T& pxi, const T& peta) const {
  if (is_liouville(spec_.cls)) {
    const T u = xi + eta;
    const T v = xi - eta;
    return liouville_integral(pxi, peta, first(Pair::Metric, u), second(Pair::Metric, v),
                              first(Pair::Potential, u), second(Pair::Potential, v));
  }
  const T g = combined(Pair::Metric, xi, eta);
  const T w = combined(Pair::Potential, xi, eta);
  const T int_f_metric = antiderivative(Pair::Metric, eta);
  const T int_f_potential = antiderivative(Pair::Potential, eta);
  return pxi * pxi - 2.0 * (pxi * peta + w) * int_f_metric / g + 2.0 * int_f_potential;
}

template <typename T>
T SystemFns::integral_b(const T& xi, const T& eta, const T& pxi, const T& peta) const {
  const T x = coord_map(xi);
  const T y = coord_map(eta);
  const T px = momentum_factor(xi) * pxi;
  const T py = momentum_factor(eta) * peta;
  const T u = x + y;
  const T v = x - y;
  return liouville_integral(px, py, first_tilde(Pair::Metric, u), second_tilde(Pair::Metric, v),
                            first_tilde(Pair::Potential, u), second_tilde(Pair::Potential, v));
}

#define SUPERINT_INSTANTIATE(T)                                                           \
  template T SystemFns::first<T>(Pair, const T&) const;                                  \
  template T SystemFns::second<T>(Pair, const T&) const;                                 \
  template T SystemFns::first_tilde<T>(Pair, const T&) const;                            \
  template T SystemFns::second_tilde<T>(Pair, const T&) const;                           \
  template T SystemFns::antiderivative<T>(Pair, const T&) const;                         \
  template T SystemFns::combined<T>(Pair, const T&, const T&) const;                     \
  template T SystemFns::char_solution<T>(const T&) const;                                \
  template T SystemFns::coord_map<T>(const T&) const;                                    \
  template T SystemFns::momentum_factor<T>(const T&) const;                              \
  template T SystemFns::hamiltonian<T>(const T&, const T&, const T&, const T&) const;    \
  template T SystemFns::integral_a<T>(const T&, const T&, const T&, const T&) const;     \
  template T SystemFns::integral_b<T>(const T&, const T&, const T&, const T&) const;

SUPERINT_INSTANTIATE(double)
SUPERINT_INSTANTIATE(Jet2)

#undef SUPERINT_INSTANTIATE

namespace {

using Member = Jet2 (SystemFns::*)(const Jet2&, const Jet2&, const Jet2&, const Jet2&) const;

Observable make_observable(const SystemSpec& spec, std::string label, Member member) {
  return Observable(std::move(label), [fns = SystemFns(spec), member](const PhasePoint& p) {
    const auto [xi, eta, pxi, peta] = jet_seed(p);
    return (fns.*member)(xi, eta, pxi, peta);
  });
}

}  // namespace

Observable hamiltonian(const SystemSpec& spec) {
  return make_observable(spec, "H", &SystemFns::hamiltonian<Jet2>);
}

Observable integral_a(const SystemSpec& spec) {
  return make_observable(spec, "A", &SystemFns::integral_a<Jet2>);
}

Observable integral_b(const SystemSpec& spec) {
  return make_observable(spec, "B", &SystemFns::integral_b<Jet2>);
}

namespace {

struct CharTerms {
  std::array<double, 4> terms;
};

CharTerms characteristic_terms(const SystemSpec& spec, double s) {
  const SystemFns fns(spec);
  const Jet2 a = fns.char_solution(Jet2::variable(0, s));
  const double da = a.grad[0];
  const auto [alpha, gamma, c] = class_constants(spec.cls);
  return {{6.0 * da * da, -3.0 * gamma * a.val * a.val, -3.0 * alpha * a.val, c}};
}

}  // namespace

double characteristic_raw(const SystemSpec& spec, double s) {
  const auto t = characteristic_terms(spec, s).terms;
  return t[0] + t[1] + t[2] + t[3];
}

double characteristic_residual(const SystemSpec& spec, double s) {
  const auto t = characteristic_terms(spec, s).terms;
  double scale = 1.0;
  for (double x : t) scale += std::abs(x);
  return std::abs(t[0] + t[1] + t[2] + t[3]) / scale;
}

double structural_pde_residual(const SystemSpec& spec, Pair which, double xi, double eta) {
  const SystemFns fns(spec);
  const Jet2 u = fns.combined(which, Jet2::variable(kXi, xi), Jet2::variable(kEta, eta));
  const Jet2 a = fns.char_solution(Jet2::variable(0, xi));
  const Jet2 b = fns.char_solution(Jet2::variable(0, eta));
  const double terms[] = {
      (a.h(0, 0) - b.h(0, 0)) * u.val,
      3.0 * a.grad[0] * u.grad[kXi],
      -3.0 * b.grad[0] * u.grad[kEta],
      2.0 * a.val * u.h(kXi, kXi),
      -2.0 * b.val * u.h(kEta, kEta),
  };
  double sum = 0.0;
  double scale = 1.0;
  for (double t : terms) {
    sum += t;
    scale += std::abs(t);
  }
  return std::abs(sum) / scale;
}

EnergyPoly operator+(const EnergyPoly& a, const EnergyPoly& b) {
  EnergyPoly out;
  for (int i = 0; i < 4; ++i) out.c[i] = a.c[i] + b.c[i];
  return out;
}

EnergyPoly operator-(const EnergyPoly& a, const EnergyPoly& b) {
  EnergyPoly out;
  for (int i = 0; i < 4; ++i) out.c[i] = a.c[i] - b.c[i];
  return out;
}

EnergyPoly operator*(double s, const EnergyPoly& a) {
  EnergyPoly out;
  for (int i = 0; i < 4; ++i) out.c[i] = s * a.c[i];
  return out;
}

EnergyPoly operator*(const EnergyPoly& a, const EnergyPoly& b) {
  EnergyPoly out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double p = a.c[i] * b.c[j];
      if (p == 0.0) continue;
      if (i + j > 3) throw std::logic_error("energy polynomial degree exceeds 3");
      out.c[i + j] += p;
    }
  }
  return out;
}

AlgebraConstants AlgebraPolynomials::at(double energy) const {
  AlgebraConstants out;
  out.alpha = alpha;
  out.gamma = gamma;
  out.a = a;
  out.delta = delta(energy);
  out.epsilon = epsilon(energy);
  out.zeta = zeta(energy);
  out.d = d(energy);
  out.z = z(energy);
  out.k_casimir = k_casimir(energy);
  return out;
}

AlgebraPolynomials algebra_polynomials(const SystemSpec& s) {
  // The recurring factors (kappa H - k), (lambda H - ell), ...
  const EnergyPoly K = EnergyPoly::linear(s.kappa, s.k);
  const EnergyPoly L = EnergyPoly::linear(s.lambda, s.ell);
  const EnergyPoly M = EnergyPoly::linear(s.mu, s.m);
  const EnergyPoly N = EnergyPoly::linear(s.nu, s.n);
  const EnergyPoly zero;

  AlgebraPolynomials p;
  const auto cc = class_constants(s.cls);
  p.alpha = cc.alpha;
  p.gamma = cc.gamma;
  p.a = cc.a;

  switch (s.cls) {
    case SystemClass::I1:
      p.delta = 16.0 * K;
      p.epsilon = 256.0 * L;
      p.zeta = -32.0 * (K * N);
      p.d = 8.0 * N;
      p.z = 8.0 * (N * N) - 128.0 * (L * M);
      p.k_casimir = 32.0 * (N * N * N) + 512.0 * (L * M * N) - 64.0 * (K * K * M);
      break;
    case SystemClass::I2: {
      const EnergyPoly sum = K + M;  // (kappa + mu) H - (k + m)
      const EnergyPoly diff = K - M;
      p.delta = zero;
      p.epsilon = 256.0 * L;
      p.zeta = -32.0 * (N * N) + 256.0 * (L * (M - K));
      p.d = zero;
      p.z = 32.0 * (sum * N);
      p.k_casimir = 256.0 * (L * sum * sum) + 128.0 * (diff * N * N);
      break;
    }
    case SystemClass::I3: {
      const EnergyPoly lmn = L - N;
      p.delta = zero;
      p.epsilon = zero;
      p.zeta = -32.0 * (L * N);
      p.d = -64.0 * (K - M);
      p.z = 32.0 * (lmn * lmn) - 32.0 * (K * M);
      p.k_casimir = 64.0 * (K * N * N) - 64.0 * (L * L * M);
      break;
    }
    case SystemClass::II1:
      p.delta = -8.0 * K;
      p.epsilon = zero;
      p.zeta = 8.0 * (L * L);
      p.d = -16.0 * K;
      // The second term carries the factor 8; without it neither the {B, C}
      // row nor the Casimir closes.
      p.z = 8.0 * (L * L) - 8.0 * (M * M);
      p.k_casimir = 16.0 * (N * N * K) - 32.0 * (L * M * N);
      break;
    case SystemClass::II2:
      p.delta = -4.0 * L;
      p.epsilon = zero;
      p.zeta = 8.0 * (K * K);
      p.d = 8.0 * N;
      p.z = -8.0 * (K * M) - 2.0 * (N * N);
      p.k_casimir = 8.0 * (L * M * M) - 16.0 * (K * M * N);
      break;
    case SystemClass::II3:
      p.delta = zero;
      p.epsilon = zero;
      p.zeta = 32.0 * (K * L);
      p.d = zero;
      p.z = 32.0 * (M * N);
      p.k_casimir = 64.0 * (L * M * M) - 64.0 * (K * N * N);
      break;
  }
  return p;
}

AlgebraConstants algebra_constants(const SystemSpec& spec, double energy) {
  return algebra_polynomials(spec).at(energy);
}

}  // namespace superint
