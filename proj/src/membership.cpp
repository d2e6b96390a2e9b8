// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/membership.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace superint {

std::string Monomial::label(const std::array<std::string, 3>& names) const {
  std::string out;
  for (int v = 0; v < 3; ++v) {
    if (powers[v] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[v];
    if (powers[v] > 1) out += "^" + std::to_string(powers[v]);
  }
  return out.empty() ? "1" : out;
}

double Monomial::eval(const std::array<double, 3>& g) const {
  double out = 1.0;
  for (int v = 0; v < 3; ++v) {
    for (int p = 0; p < powers[v]; ++p) out *= g[v];
  }
  return out;
}

std::vector<Monomial> monomial_basis(int degree) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      for (int j = d - i; j >= 0; --j) out.push_back({{i, j, d - i - j}});
    }
  }
  return out;
}

double MembershipResult::coefficient(int i, int j, int k) const {
  const Monomial want{{i, j, k}};
  for (std::size_t c = 0; c < basis.size(); ++c) {
    if (basis[c] == want) return coefficients[c];
  }
  throw std::out_of_range("monomial not in basis");
}

MembershipResult polynomial_membership(const std::vector<std::array<double, 3>>& rows,
                                       const std::vector<double>& target,
                                       const MembershipOptions& opts) {
  if (rows.size() != target.size()) throw std::invalid_argument("rows and target differ in length");
  MembershipResult res;
  res.basis = monomial_basis(opts.degree);
  const int n_cols = static_cast<int>(res.basis.size());
  const int n = static_cast<int>(rows.size());
  if (n < 2 * n_cols) {
    throw std::invalid_argument("polynomial_membership needs at least " + std::to_string(2 * n_cols) +
                                " points, got " + std::to_string(n));
  }
  res.n_test = static_cast<int>(std::ceil(opts.holdout_fraction * n));
  res.n_train = n - res.n_test;
  if (res.n_train < n_cols || res.n_test < 1) throw std::invalid_argument("holdout split leaves too few points");

  Eigen::MatrixXd design(n, n_cols);
  Eigen::VectorXd t(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n_cols; ++c) design(r, c) = res.basis[c].eval(rows[r]);
    t(r) = target[r];
  }
  if (!design.allFinite() || !t.allFinite()) throw std::invalid_argument("non-finite membership data");

  // Each row is divided by its largest monomial magnitude, so points where
  // the generators are large do not dominate the fit. An exact polynomial
  // identity is unaffected by row weights.
  for (int r = 0; r < n; ++r) {
    const double w = 1.0 / std::max(1.0, design.row(r).cwiseAbs().maxCoeff());
    design.row(r) *= w;
    t(r) *= w;
  }

  const Eigen::MatrixXd train = design.topRows(res.n_train);
  Eigen::VectorXd scale = train.colwise().norm().transpose();
  for (int c = 0; c < n_cols; ++c) {
    if (scale(c) == 0.0) scale(c) = 1.0;
  }
  const Eigen::MatrixXd scaled = train * scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double s_max = s(0);
  const double s_min = s(s.size() - 1);
  res.condition = s_min > 0.0 ? (s_max / s_min) * (s_max / s_min) : INFINITY;
  if (!(res.condition <= opts.max_condition)) {
    std::ostringstream os;
    os << "membership design is ill conditioned (condition " << res.condition << " > " << opts.max_condition
       << "); the sampled generators are nearly dependent";
    throw IllConditioned(os.str(), res.condition);
  }

  const double lambda = opts.ridge * s_max;
  Eigen::VectorXd filter(s.size());
  for (int i = 0; i < s.size(); ++i) filter(i) = s(i) / (s(i) * s(i) + lambda * lambda);
  const Eigen::VectorXd y =
      svd.matrixV() * (filter.asDiagonal() * (svd.matrixU().transpose() * t.head(res.n_train)));
  const Eigen::VectorXd coeffs = y.cwiseQuotient(scale);
  res.coefficients.assign(coeffs.data(), coeffs.data() + n_cols);

  const auto rms = [](const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm() / v.size()); };
  const Eigen::VectorXd fit = design * coeffs;
  const Eigen::VectorXd resid = fit - t;
  res.train_rms_residual = rms(resid.head(res.n_train)) / (1.0 + rms(t.head(res.n_train)));
  res.rms_residual = rms(resid.tail(res.n_test)) / (1.0 + rms(t.tail(res.n_test)));
  return res;
}

MembershipResult polynomial_membership(const ScalarFn& target, const std::array<ScalarFn, 3>& generators,
                                       const std::vector<PhasePoint>& points,
                                       const MembershipOptions& opts) {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> values;
  rows.reserve(points.size());
  values.reserve(points.size());
  for (const auto& p : points) {
    rows.push_back({generators[0](p), generators[1](p), generators[2](p)});
    values.push_back(target(p));
  }
  return polynomial_membership(rows, values, opts);
}

}  // namespace superint
