// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/jets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace superint {

namespace {

std::string describe(const std::string& primitive, double value, const std::string& detail) {
  std::ostringstream os;
  os.precision(17);
  os << "domain error in " << primitive << " at " << value;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

}  // namespace

DomainError::DomainError(std::string primitive, double value)
    : DomainError(std::move(primitive), value, "") {}

DomainError::DomainError(std::string primitive, double value, const std::string& detail)
    : std::domain_error(describe(primitive, value, detail)),
      primitive_(std::move(primitive)),
      value_(value) {}

double PhasePoint::operator[](int i) const {
  switch (i) {
    case kXi: return xi;
    case kEta: return eta;
    case kPXi: return p_xi;
    case kPEta: return p_eta;
  }
  throw std::out_of_range("PhasePoint index");
}

bool PhasePoint::finite() const {
  return std::isfinite(xi) && std::isfinite(eta) && std::isfinite(p_xi) && std::isfinite(p_eta);
}

PhasePoint PhasePoint::with(int i, double v) const {
  PhasePoint out = *this;
  switch (i) {
    case kXi: out.xi = v; break;
    case kEta: out.eta = v; break;
    case kPXi: out.p_xi = v; break;
    case kPEta: out.p_eta = v; break;
    default: throw std::out_of_range("PhasePoint index");
  }
  return out;
}

Jet2 Jet2::variable(int index, double v) {
  Jet2 out(v);
  out.grad[index] = 1.0;
  return out;
}

std::array<Jet2, kPhaseDim> jet_seed(const PhasePoint& point) {
  return {Jet2::variable(kXi, point.xi), Jet2::variable(kEta, point.eta),
          Jet2::variable(kPXi, point.p_xi), Jet2::variable(kPEta, point.p_eta)};
}

Jet2& Jet2::operator+=(const Jet2& b) {
  val += b.val;
  for (int i = 0; i < kPhaseDim; ++i) grad[i] += b.grad[i];
  for (int i = 0; i < kHessSize; ++i) hess[i] += b.hess[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& b) {
  val -= b.val;
  for (int i = 0; i < kPhaseDim; ++i) grad[i] -= b.grad[i];
  for (int i = 0; i < kHessSize; ++i) hess[i] -= b.hess[i];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& b) {
  *this = *this * b;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& b) {
  *this = *this / b;
  return *this;
}

Jet2 operator-(const Jet2& a) {
  Jet2 out;
  out.val = -a.val;
  for (int i = 0; i < kPhaseDim; ++i) out.grad[i] = -a.grad[i];
  for (int i = 0; i < kHessSize; ++i) out.hess[i] = -a.hess[i];
  return out;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 out = a;
  out += b;
  return out;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 out = a;
  out -= b;
  return out;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 out;
  out.val = a.val * b.val;
  for (int i = 0; i < kPhaseDim; ++i) out.grad[i] = a.val * b.grad[i] + b.val * a.grad[i];
  for (int i = 0; i < kPhaseDim; ++i) {
    for (int j = i; j < kPhaseDim; ++j) {
      const int k = hess_index(i, j);
      out.hess[k] = a.val * b.hess[k] + b.val * a.hess[k] + a.grad[i] * b.grad[j] +
                    a.grad[j] * b.grad[i];
    }
  }
  return out;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inv(b); }

Jet2 operator+(const Jet2& a, double b) {
  Jet2 out = a;
  out.val += b;
  return out;
}

Jet2 operator+(double a, const Jet2& b) { return b + a; }

Jet2 operator-(const Jet2& a, double b) { return a + (-b); }

Jet2 operator-(double a, const Jet2& b) { return (-b) + a; }

Jet2 operator*(const Jet2& a, double b) {
  Jet2 out;
  out.val = a.val * b;
  for (int i = 0; i < kPhaseDim; ++i) out.grad[i] = a.grad[i] * b;
  for (int i = 0; i < kHessSize; ++i) out.hess[i] = a.hess[i] * b;
  return out;
}

Jet2 operator*(double a, const Jet2& b) { return b * a; }

Jet2 operator/(const Jet2& a, double b) {
  if (b == 0.0) throw DomainError("div", b);
  return a * (1.0 / b);
}

Jet2 operator/(double a, const Jet2& b) { return a * inv(b); }

Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  Jet2 out;
  out.val = f;
  for (int i = 0; i < kPhaseDim; ++i) out.grad[i] = df * a.grad[i];
  for (int i = 0; i < kPhaseDim; ++i) {
    for (int j = i; j < kPhaseDim; ++j) {
      const int k = hess_index(i, j);
      out.hess[k] = df * a.hess[k] + d2f * a.grad[i] * a.grad[j];
    }
  }
  return out;
}

Jet2 inv(const Jet2& a) {
  if (a.val == 0.0 || !std::isfinite(a.val)) throw DomainError("inv", a.val);
  const double r = 1.0 / a.val;
  return chain(a, r, -r * r, 2.0 * r * r * r);
}

Jet2 sqrt(const Jet2& a) {
  if (!(a.val > 0.0)) throw DomainError("sqrt", a.val);
  const double s = std::sqrt(a.val);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.val));
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.val);
  if (!std::isfinite(e)) throw DomainError("exp", a.val, "overflow");
  return chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  if (!(a.val > 0.0)) throw DomainError("log", a.val);
  const double r = 1.0 / a.val;
  return chain(a, std::log(a.val), r, -r * r);
}

Jet2 pow(const Jet2& a, int n) {
  if (n == 0) return Jet2(1.0);
  if (n < 0) {
    if (a.val == 0.0) throw DomainError("pow_int", a.val, "negative power of zero");
    return pow(inv(a), -n);
  }
  const double f = std::pow(a.val, n);
  const double df = n * std::pow(a.val, n - 1);
  const double d2f = n >= 2 ? n * (n - 1) * std::pow(a.val, n - 2) : 0.0;
  return chain(a, f, df, d2f);
}

Jet2 pow(const Jet2& a, double r) {
  if (!(a.val > 0.0)) throw DomainError("pow_real", a.val);
  const double f = std::pow(a.val, r);
  return chain(a, f, r * f / a.val, r * (r - 1.0) * f / (a.val * a.val));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.val);
  return chain(a, s, std::cos(a.val), -s);
}

Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.val);
  return chain(a, c, -std::sin(a.val), -c);
}

Jet2 tan(const Jet2& a) {
  const double c = std::cos(a.val);
  if (std::abs(c) < 1e-300) throw DomainError("tan", a.val, "pole");
  const double t = std::tan(a.val);
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}

Jet2 atan(const Jet2& a) {
  const double q = 1.0 / (1.0 + a.val * a.val);
  return chain(a, std::atan(a.val), q, -2.0 * a.val * q * q);
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.val);
  return chain(a, s, std::cosh(a.val), s);
}

Jet2 cosh(const Jet2& a) {
  const double c = std::cosh(a.val);
  return chain(a, c, std::sinh(a.val), c);
}

Observable operator*(const Observable& a, const Observable& b) {
  return Observable("(" + a.label() + "*" + b.label() + ")",
                    [a, b](const PhasePoint& p) { return a(p) * b(p); });
}

FdDerivatives fd_derivatives(const Observable& obs, const PhasePoint& point, FdSteps steps) {
  if (!(steps.grad > 0.0) || !(steps.hess > 0.0)) {
    throw std::invalid_argument("finite-difference steps must be positive");
  }
  const auto f = [&](const PhasePoint& p) { return obs(p).val; };
  FdDerivatives out;
  const double hg = steps.grad;
  for (int i = 0; i < kPhaseDim; ++i) {
    const double x = point[i];
    out.grad[i] = (f(point.with(i, x + hg)) - f(point.with(i, x - hg))) / (2.0 * hg);
  }
  const double hh = steps.hess;
  const double f0 = f(point);
  for (int i = 0; i < kPhaseDim; ++i) {
    const double xi = point[i];
    out.hess[hess_index(i, i)] =
        (f(point.with(i, xi + hh)) - 2.0 * f0 + f(point.with(i, xi - hh))) / (hh * hh);
    for (int j = i + 1; j < kPhaseDim; ++j) {
      const double xj = point[j];
      const auto at = [&](double di, double dj) {
        return f(point.with(i, xi + di).with(j, xj + dj));
      };
      out.hess[hess_index(i, j)] =
          (at(hh, hh) - at(hh, -hh) - at(-hh, hh) + at(-hh, -hh)) / (4.0 * hh * hh);
    }
  }
  return out;
}

FdDerivatives fd_derivatives(const Observable& obs, const PhasePoint& point, double h) {
  return fd_derivatives(obs, point, FdSteps{h, h});
}

double normalized_diff(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace superint
