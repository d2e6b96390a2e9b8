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

// Order-2 truncated Taylor arithmetic over the four phase variables
// (xi, eta, p_xi, p_eta). A Jet2 carries a value, its gradient and the upper
// triangle of its Hessian; every operation propagates all three exactly.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace superint {

inline constexpr int kPhaseDim = 4;
inline constexpr int kHessSize = kPhaseDim * (kPhaseDim + 1) / 2;

enum PhaseIndex : int { kXi = 0, kEta = 1, kPXi = 2, kPEta = 3 };

// Thrown when a primitive leaves its domain (pole, branch cut, ...).
class DomainError : public std::domain_error {
 public:
  DomainError(std::string primitive, double value);
  DomainError(std::string primitive, double value, const std::string& detail);

  const std::string& primitive() const { return primitive_; }
  double value() const { return value_; }

 private:
  std::string primitive_;
  double value_;
};

struct PhasePoint {
  double xi = 0.0;
  double eta = 0.0;
  double p_xi = 0.0;
  double p_eta = 0.0;

  double operator[](int i) const;
  bool finite() const;
  // Returns a copy with component i replaced by v.
  PhasePoint with(int i, double v) const;
};

// Index of (i, j) in the packed upper triangle; symmetric in its arguments.
constexpr int hess_index(int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * (2 * kPhaseDim - 1 - i) / 2 + j;
}

struct Jet2 {
  double val = 0.0;
  std::array<double, kPhaseDim> grad{};
  std::array<double, kHessSize> hess{};

  Jet2() = default;
  // A constant: zero gradient and Hessian.
  Jet2(double v) : val(v) {}  // NOLINT(google-explicit-constructor)

  // The jet of phase variable `index` at value v.
  static Jet2 variable(int index, double v);

  double h(int i, int j) const { return hess[hess_index(i, j)]; }
  double& h(int i, int j) { return hess[hess_index(i, j)]; }

  Jet2& operator+=(const Jet2& b);
  Jet2& operator-=(const Jet2& b);
  Jet2& operator*=(const Jet2& b);
  Jet2& operator/=(const Jet2& b);
};

// Value plus gradient. Result type of a Poisson bracket of two Jet2.
struct Jet1 {
  double val = 0.0;
  std::array<double, kPhaseDim> grad{};
};

// The four coordinate jets at `point`, in PhaseIndex order.
std::array<Jet2, kPhaseDim> jet_seed(const PhasePoint& point);

Jet2 operator-(const Jet2& a);
Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator+(const Jet2& a, double b);
Jet2 operator+(double a, const Jet2& b);
Jet2 operator-(const Jet2& a, double b);
Jet2 operator-(double a, const Jet2& b);
Jet2 operator*(const Jet2& a, double b);
Jet2 operator*(double a, const Jet2& b);
Jet2 operator/(const Jet2& a, double b);
Jet2 operator/(double a, const Jet2& b);

Jet2 inv(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 pow(const Jet2& a, int n);
Jet2 pow(const Jet2& a, double r);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 atan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);

// Applies a scalar function with known first and second derivatives.
Jet2 chain(const Jet2& a, double f, double df, double d2f);

class Observable {
 public:
  using Fn = std::function<Jet2(const PhasePoint&)>;

  Observable(std::string label, Fn fn) : label_(std::move(label)), fn_(std::move(fn)) {}

  Jet2 operator()(const PhasePoint& point) const { return fn_(point); }
  const std::string& label() const { return label_; }

 private:
  std::string label_;
  Fn fn_;
};

Observable operator*(const Observable& a, const Observable& b);

struct FdSteps {
  double grad = 1e-5;
  double hess = 1e-4;
};

struct FdDerivatives {
  std::array<double, kPhaseDim> grad{};
  std::array<double, kHessSize> hess{};

  double h(int i, int j) const { return hess[hess_index(i, j)]; }
};

// Central second-order finite differences of obs(point).val. Uses only the
// value channel, so it is independent of the jet propagation it checks.
FdDerivatives fd_derivatives(const Observable& obs, const PhasePoint& point, FdSteps steps = {});
FdDerivatives fd_derivatives(const Observable& obs, const PhasePoint& point, double h);

// |a - b| / (1 + max(|a|, |b|)).
double normalized_diff(double a, double b);

}  // namespace superint
