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

// Numerical test of whether a phase-space function is a polynomial in given
// generators: least squares over the monomials g0^i g1^j g2^k, i+j+k <= degree.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "superint/jets.hpp"

namespace superint {

class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

struct Monomial {
  std::array<int, 3> powers{};

  int degree() const { return powers[0] + powers[1] + powers[2]; }
  // e.g. "H^2*A" for names {"H", "A", "B"}.
  std::string label(const std::array<std::string, 3>& names) const;
  double eval(const std::array<double, 3>& g) const;
  bool operator==(const Monomial&) const = default;
};

// Graded order: degree 0, then 1, ...; within a degree, lexicographically
// decreasing in the powers of g0, g1, g2.
std::vector<Monomial> monomial_basis(int degree);

struct MembershipOptions {
  int degree = 3;
  // Tikhonov parameter relative to the largest singular value of the
  // column-scaled design matrix.
  double ridge = 1e-12;
  double holdout_fraction = 0.2;
  // Limit on (s_max / s_min)^2, the condition of the scaled normal system.
  double max_condition = 1e12;
};

struct MembershipResult {
  std::vector<Monomial> basis;
  std::vector<double> coefficients;
  // Held-out rms residual divided by (1 + rms of the held-out target).
  double rms_residual = 0.0;
  double train_rms_residual = 0.0;
  double condition = 0.0;
  int n_train = 0;
  int n_test = 0;

  double coefficient(int i, int j, int k) const;
};

// rows: generator values per point; target: function value per point. The
// last holdout_fraction of the rows is held out.
MembershipResult polynomial_membership(const std::vector<std::array<double, 3>>& rows,
                                       const std::vector<double>& target,
                                       const MembershipOptions& opts = {});

using ScalarFn = std::function<double(const PhasePoint&)>;
MembershipResult polynomial_membership(const ScalarFn& target, const std::array<ScalarFn, 3>& generators,
                                       const std::vector<PhasePoint>& points,
                                       const MembershipOptions& opts = {});

}  // namespace superint
