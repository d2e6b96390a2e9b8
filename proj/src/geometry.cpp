// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "superint/poisson.hpp"

namespace superint {

namespace {

Jet2 metric_jet(const SystemFns& fns, double xi, double eta) {
  return fns.metric(Jet2::variable(kXi, xi), Jet2::variable(kEta, eta));
}

}  // namespace

double curvature(const SystemSpec& spec, double xi, double eta) {
  const Jet2 g = metric_jet(SystemFns(spec), xi, eta);
  if (g.val == 0.0) throw DomainError("curvature", g.val, "metric vanishes");
  return -(g.val * g.h(kXi, kEta) - g.grad[kXi] * g.grad[kEta]) / (2.0 * g.val * g.val * g.val);
}

double curvature_log_form(const SystemSpec& spec, double xi, double eta) {
  const Jet2 g = metric_jet(SystemFns(spec), xi, eta);
  const Jet2 lg = log(g);
  return -lg.h(kXi, kEta) / (2.0 * g.val);
}

std::string_view to_string(CurvatureTag t) {
  switch (t) {
    case CurvatureTag::Zero: return "Zero";
    case CurvatureTag::Constant: return "Constant";
    case CurvatureTag::NonConstant: return "NonConstant";
  }
  return "?";
}

CurvatureClass classify_curvature(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                  const CurvatureTolerances& tol) {
  Rng rng(seed);
  const auto pts = sample_coordinates(spec, default_domain(spec.cls), n_points, rng);
  CurvatureClass out;
  out.n_points = n_points;
  double sum = 0.0;
  std::vector<double> ks;
  ks.reserve(pts.size());
  for (const auto& [x, y] : pts) {
    const double k = curvature(spec, x, y);
    ks.push_back(k);
    sum += k;
    out.max_abs = std::max(out.max_abs, std::abs(k));
  }
  out.mean = sum / static_cast<double>(ks.size());
  double var = 0.0;
  for (double k : ks) var += (k - out.mean) * (k - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(ks.size()));
  if (out.max_abs <= tol.zero) {
    out.tag = CurvatureTag::Zero;
  } else if (out.stddev <= tol.constant_stddev) {
    out.tag = CurvatureTag::Constant;
    out.value = out.mean;
  }
  return out;
}

std::string_view to_string(Revolution r) {
  switch (r) {
    case Revolution::SumOnly: return "SumOnly";
    case Revolution::DiffOnly: return "DiffOnly";
    case Revolution::Both: return "Both";
    case Revolution::Neither: return "Neither";
  }
  return "?";
}

std::string_view to_string(Frame f) {
  switch (f) {
    case Frame::Native: return "native";
    case Frame::Mapped: return "mapped";
    case Frame::Killing: return "killing";
  }
  return "?";
}

std::string_view to_string(LinearSign s) { return s == LinearSign::Plus ? "plus" : "minus"; }

namespace {

// Derivatives of the conformal factor along the two coordinate directions of
// the frame. In (X, Y) the factor is g / (X'(xi) Y'(eta)) and d/dX = m(xi) d/dxi
// with m the class momentum factor.
std::pair<double, double> frame_derivatives(const SystemFns& fns, Frame frame, double xi, double eta) {
  const Jet2 x = Jet2::variable(kXi, xi);
  const Jet2 y = Jet2::variable(kEta, eta);
  if (frame == Frame::Native) {
    const Jet2 g = fns.metric(x, y);
    return {g.grad[kXi], g.grad[kEta]};
  }
  const Jet2 mx = fns.momentum_factor(x);
  const Jet2 my = fns.momentum_factor(y);
  const Jet2 g = fns.metric(x, y) * mx * my;
  return {mx.val * g.grad[kXi], my.val * g.grad[kEta]};
}

}  // namespace

RevolutionResult revolution_check(const SystemSpec& spec, int n_points, std::uint64_t seed, Frame frame,
                                  double tol) {
  if (frame == Frame::Killing) throw std::invalid_argument("use killing_search for the Killing frame");
  Rng rng(seed);
  const SystemFns fns(spec);
  const auto pts = sample_coordinates(spec, default_domain(spec.cls), n_points, rng);
  RevolutionResult out;
  out.frame = frame;
  for (const auto& [x, y] : pts) {
    const auto [d1, d2] = frame_derivatives(fns, frame, x, y);
    const double scale = 1.0 + std::abs(d1) + std::abs(d2);
    out.sum_residual = std::max(out.sum_residual, std::abs(d1 - d2) / scale);
    out.diff_residual = std::max(out.diff_residual, std::abs(d1 + d2) / scale);
  }
  const bool sum = out.sum_residual <= tol;
  const bool diff = out.diff_residual <= tol;
  out.kind = sum && diff ? Revolution::Both : sum ? Revolution::SumOnly : diff ? Revolution::DiffOnly : Revolution::Neither;
  return out;
}

namespace {

struct KillingBasis {
  std::vector<std::string> names;
  std::vector<Jet2> values;  // functions of a single jet variable
};

// 1, s, s^2, 1/s (translations in s^2, on positive domains), plus the
// generators of translations m(s) and dilations m(s) X(s) of the class
// coordinate X where these are not already in the list.
KillingBasis killing_basis(const SystemFns& fns, const Jet2& s) {
  KillingBasis b;
  b.names = {"1", "s", "s^2"};
  b.values = {Jet2(1.0), s, s * s};
  if (fns.cls() != SystemClass::I3) {
    b.names.emplace_back("1/s");
    b.values.push_back(1.0 / s);
  }
  switch (fns.cls()) {
    case SystemClass::I1:
    case SystemClass::II2:
      b.names.emplace_back("sqrt(s)");
      b.values.push_back(sqrt(s));
      break;
    case SystemClass::I2:
      b.names.emplace_back("s*ln(s)");
      b.values.push_back(s * log(s));
      break;
    case SystemClass::II3:
      b.names.emplace_back("s*ln(s)");
      b.values.push_back(s * log(s));
      b.names.emplace_back("s/(1-s^2)");
      b.values.push_back(s / (1.0 - s * s));
      break;
    case SystemClass::I3:
      b.names.emplace_back("tanh(s)");
      b.values.push_back(sinh(s) / cosh(s));
      b.names.emplace_back("m(s)");
      b.values.push_back(fns.momentum_factor(s));
      b.names.emplace_back("m(s)*X(s)");
      b.values.push_back(fns.momentum_factor(s) * fns.coord_map(s));
      break;
    case SystemClass::II1:
      break;
  }
  return b;
}

// Value of a(xi) or b(eta) for the given coefficients, as a jet in `var`.
Jet2 basis_combination(const SystemFns& fns, const std::vector<double>& coeffs, int var, double s) {
  const KillingBasis b = killing_basis(fns, Jet2::variable(var, s));
  Jet2 out(0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) out += coeffs[i] * b.values[i];
  return out;
}

// |a u_xi + b u_eta + (a' + b') u| over the magnitude of its terms.
double killing_equation_residual(const Jet2& a, const Jet2& b, const Jet2& u) {
  const double t1 = a.val * u.grad[kXi];
  const double t2 = b.val * u.grad[kEta];
  const double t3 = (a.grad[kXi] + b.grad[kEta]) * u.val;
  return std::abs(t1 + t2 + t3) / (1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3));
}

// Unit-max right singular vector of m restricted to `cols` (zero elsewhere)
// for the smallest singular value, with smallest/largest singular ratio.
std::pair<Eigen::VectorXd, double> smallest_singular_vector(const Eigen::MatrixXd& m,
                                                            const std::vector<int>& cols) {
  const int k = static_cast<int>(cols.size());
  Eigen::MatrixXd sub(m.rows(), k);
  Eigen::VectorXd scale(k);
  for (int j = 0; j < k; ++j) {
    sub.col(j) = m.col(cols[j]);
    scale(j) = sub.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    sub.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double ratio = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
  const Eigen::VectorXd w = svd.matrixV().col(k - 1).cwiseQuotient(scale);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m.cols());
  for (int j = 0; j < k; ++j) v(cols[j]) = w(j);
  v /= v.cwiseAbs().maxCoeff();
  for (int c = 0; c < v.size(); ++c) {
    if (std::abs(v(c)) < 1e-12) v(c) = 0.0;
  }
  return {v, ratio};
}

}  // namespace

std::optional<KillingField> killing_search(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                           bool include_potential, double tol) {
  Rng rng(seed);
  const SystemFns fns(spec);
  const SampleDomain domain = default_domain(spec.cls);
  const auto pts = sample_coordinates(spec, domain, n_points, rng);
  const int na = static_cast<int>(killing_basis(fns, Jet2::variable(kXi, 0.5)).names.size());
  const int n_cols = 2 * na;
  const int per_point = include_potential ? 2 : 1;

  Eigen::MatrixXd m(per_point * static_cast<int>(pts.size()), n_cols);
  int row = 0;
  for (const auto& [x, y] : pts) {
    const KillingBasis ba = killing_basis(fns, Jet2::variable(kXi, x));
    const KillingBasis bb = killing_basis(fns, Jet2::variable(kEta, y));
    const Jet2 xj = Jet2::variable(kXi, x);
    const Jet2 yj = Jet2::variable(kEta, y);
    const Jet2 us[2] = {fns.combined(Pair::Metric, xj, yj), fns.combined(Pair::Potential, xj, yj)};
    for (int k = 0; k < per_point; ++k) {
      const Jet2& u = us[k];
      for (int i = 0; i < na; ++i) {
        m(row, i) = ba.values[i].val * u.grad[kXi] + ba.values[i].grad[kXi] * u.val;
        m(row, na + i) = bb.values[i].val * u.grad[kEta] + bb.values[i].grad[kEta] * u.val;
      }
      const double w = m.row(row).cwiseAbs().maxCoeff();
      if (w > 0.0) m.row(row) /= w;
      ++row;
    }
  }
  std::vector<int> all(n_cols);
  for (int c = 0; c < n_cols; ++c) all[c] = c;
  auto [v, ratio] = smallest_singular_vector(m, all);
  // Second pass on the columns the field actually uses; near-collinear
  // basis functions otherwise cost several digits in the coefficients.
  std::vector<int> support;
  for (int c = 0; c < n_cols; ++c) {
    if (std::abs(v(c)) > 1e-8) support.push_back(c);
  }
  if (static_cast<int>(support.size()) < n_cols && !support.empty()) {
    auto [v2, ratio2] = smallest_singular_vector(m, support);
    v = v2;
    ratio = ratio2;
  }

  KillingField field;
  field.singular_ratio = ratio;
  field.a_basis = field.b_basis = killing_basis(fns, Jet2::variable(kXi, 0.5)).names;
  field.a_coeffs.assign(v.data(), v.data() + na);
  field.b_coeffs.assign(v.data() + na, v.data() + n_cols);

  // Certify on fresh points: the Killing equation for g, and the bracket with
  // H when the potential must be invariant too.
  Rng check_rng(rng.next());
  const auto check_pts = sample_points(spec, domain, n_points, check_rng);
  double worst = 0.0;
  for (const auto& p : check_pts) {
    const Jet2 a = basis_combination(fns, field.a_coeffs, kXi, p.xi);
    const Jet2 b = basis_combination(fns, field.b_coeffs, kEta, p.eta);
    const Jet2 g = fns.metric(Jet2::variable(kXi, p.xi), Jet2::variable(kEta, p.eta));
    worst = std::max(worst, killing_equation_residual(a, b, g));
    if (include_potential) {
      const auto [x, e, px, pe] = jet_seed(p);
      const Jet1 h = truncate(fns.hamiltonian(x, e, px, pe));
      const Jet1 lin = truncate(a * px + b * pe);
      worst = std::max(worst, scaled_residual({bracket(h, lin), bracket_scale(h, lin)}, {}));
    }
  }
  field.residual = worst;
  if (!(worst <= tol)) return std::nullopt;
  return field;
}

double linear_integral_check(const SystemSpec& spec, LinearSign sign, int n_points, std::uint64_t seed,
                             Frame frame) {
  if (frame == Frame::Killing) throw std::invalid_argument("use killing_search for the Killing frame");
  Rng rng(seed);
  const SystemFns fns(spec);
  const auto pts = sample_points(spec, n_points, rng);
  const double sgn = sign == LinearSign::Plus ? 1.0 : -1.0;
  double worst = 0.0;
  for (const auto& p : pts) {
    const auto [x, e, px, pe] = jet_seed(p);
    const Jet1 h = truncate(fns.hamiltonian(x, e, px, pe));
    Jet2 lin;
    if (frame == Frame::Native) {
      lin = px + sgn * pe;
    } else {
      lin = fns.momentum_factor(x) * px + sgn * (fns.momentum_factor(e) * pe);
    }
    const Jet1 l = truncate(lin);
    worst = std::max(worst, scaled_residual({bracket(h, l), bracket_scale(h, l)}, {}));
  }
  return worst;
}

namespace {

VerificationReport geometry_report(const char* kind, const SystemSpec& spec, int n_points, std::uint64_t seed) {
  VerificationReport r;
  r.kind = kind;
  r.spec = spec;
  r.seed = seed;
  r.n_points = n_points;
  return r;
}

nlohmann::json killing_json(const KillingField& f) {
  return {{"a", f.a_coeffs}, {"b", f.b_coeffs}, {"basis", f.a_basis}, {"residual", f.residual},
          {"singular_ratio", f.singular_ratio}};
}

}  // namespace

VerificationReport curvature_report(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                    const CurvatureTolerances& tol) {
  VerificationReport r = geometry_report("curvature", spec, n_points, seed);
  const CurvatureClass c = classify_curvature(spec, n_points, seed, tol);
  r.details = {{"class", std::string(to_string(c.tag))}, {"value", c.value}, {"max_abs", c.max_abs},
               {"mean", c.mean}, {"stddev", c.stddev}};
  // The two curvature formulas must agree wherever the log form applies.
  Rng rng(seed);
  double worst = 0.0;
  for (const auto& [x, y] : sample_coordinates(spec, default_domain(spec.cls), n_points, rng)) {
    if (SystemFns(spec).metric(x, y) <= 0.0) continue;
    worst = std::max(worst, normalized_diff(curvature(spec, x, y), curvature_log_form(spec, x, y)));
  }
  r.add("log-form-consistency", worst, 1e-10);
  return r;
}

VerificationReport revolution_report(const SystemSpec& spec, int n_points, std::uint64_t seed, double tol) {
  VerificationReport r = geometry_report("revolution", spec, n_points, seed);
  double best = INFINITY;
  for (Frame f : {Frame::Native, Frame::Mapped}) {
    const RevolutionResult res = revolution_check(spec, n_points, seed, f, tol);
    r.details[std::string(to_string(f))] = {{"kind", std::string(to_string(res.kind))},
                                            {"sum_residual", res.sum_residual},
                                            {"diff_residual", res.diff_residual}};
    const double here = std::min(res.sum_residual, res.diff_residual);
    if (here < best) best = here;
    if (res.kind != Revolution::Neither && !r.details.contains("frame")) {
      r.details["frame"] = std::string(to_string(f));
      r.details["kind"] = std::string(to_string(res.kind));
    }
  }
  if (!r.details.contains("frame")) {
    const auto field = killing_search(spec, n_points, seed, false, tol);
    if (field) {
      best = field->residual;
      r.details["frame"] = std::string(to_string(Frame::Killing));
      r.details["kind"] = "KillingField";
      r.details["killing"] = killing_json(*field);
    } else {
      r.details["kind"] = std::string(to_string(Revolution::Neither));
    }
  }
  r.add("revolution", best, tol);
  return r;
}

VerificationReport linear_report(const SystemSpec& spec, int n_points, std::uint64_t seed, double tol) {
  VerificationReport r = geometry_report("linear", spec, n_points, seed);
  double best = INFINITY;
  nlohmann::json attempts = nlohmann::json::array();
  for (Frame f : {Frame::Native, Frame::Mapped}) {
    for (LinearSign s : {LinearSign::Plus, LinearSign::Minus}) {
      const double res = linear_integral_check(spec, s, n_points, seed, f);
      attempts.push_back({{"frame", std::string(to_string(f))}, {"sign", std::string(to_string(s))},
                          {"residual", res}});
      if (res <= tol && !r.details.contains("frame")) {
        r.details["frame"] = std::string(to_string(f));
        r.details["sign"] = std::string(to_string(s));
      }
      best = std::min(best, res);
    }
  }
  r.details["attempts"] = std::move(attempts);
  if (!r.details.contains("frame")) {
    const auto field = killing_search(spec, n_points, seed, true, tol);
    if (field) {
      best = field->residual;
      r.details["frame"] = std::string(to_string(Frame::Killing));
      r.details["killing"] = killing_json(*field);
    }
  }
  r.add("linear-integral", best, tol);
  return r;
}

}  // namespace superint
