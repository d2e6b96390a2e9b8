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

// Intrinsic geometry of the metric ds^2 = g(xi, eta) dxi deta: curvature,
// surface-of-revolution tests and linear integrals of motion.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "superint/report.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint {

// K = -(g g_xieta - g_xi g_eta) / (2 g^3); needs only g != 0.
double curvature(const SystemSpec& spec, double xi, double eta);
// K = -(1 / 2g) d^2(ln g)/dxi deta; needs g > 0.
double curvature_log_form(const SystemSpec& spec, double xi, double eta);

enum class CurvatureTag { Zero, Constant, NonConstant };
std::string_view to_string(CurvatureTag t);

struct CurvatureClass {
  CurvatureTag tag = CurvatureTag::NonConstant;
  double value = 0.0;  // mean K when Constant, 0 when Zero
  double max_abs = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  int n_points = 0;
};

struct CurvatureTolerances {
  double zero = 1e-8;
  double constant_stddev = 1e-8;
};

CurvatureClass classify_curvature(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                  const CurvatureTolerances& tol = {});

enum class Revolution { SumOnly, DiffOnly, Both, Neither };
std::string_view to_string(Revolution r);

// Coordinates in which a test is carried out: the Liouville/Lie coordinates
// themselves, the class coordinates (X, Y), or a general Killing-field search.
enum class Frame { Native, Mapped, Killing };
std::string_view to_string(Frame f);

struct RevolutionResult {
  Revolution kind = Revolution::Neither;
  Frame frame = Frame::Native;
  // max over samples of |(d_1 - d_2) g| and |(d_1 + d_2) g|, each divided by
  // 1 + |d_1 g| + |d_2 g|, in the frame's coordinates.
  double sum_residual = 0.0;
  double diff_residual = 0.0;
};

// Directional-derivative null test in one frame (Native or Mapped).
RevolutionResult revolution_check(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                  Frame frame = Frame::Native, double tol = 1e-9);

// A vector field a(xi) d_xi + b(eta) d_eta with a, b drawn from a class
// specific function basis (1, s, s^2, 1/s where s > 0, and the generators of
// translations and dilations of the class coordinates). Every Killing field
// of g dxi deta has this shape; only the basis limits the search.
struct KillingField {
  std::vector<double> a_coeffs;
  std::vector<double> b_coeffs;
  std::vector<std::string> a_basis;
  std::vector<std::string> b_basis;
  // Certified residual of the Killing equation (and of {H, I} when the
  // potential was included) on fresh samples.
  double residual = 0.0;
  double singular_ratio = 0.0;
};

// Searches for a Killing field of g dxi deta; with include_potential the
// linear momentum a p_xi + b p_eta must also commute with H.
std::optional<KillingField> killing_search(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                           bool include_potential, double tol = 1e-9);

enum class LinearSign { Plus, Minus };
std::string_view to_string(LinearSign s);

// max normalised |{H, p_1 +- p_2}| with (p_1, p_2) = (p_xi, p_eta) in the
// native frame or (p_X, p_Y) in the mapped frame.
double linear_integral_check(const SystemSpec& spec, LinearSign sign, int n_points, std::uint64_t seed,
                             Frame frame = Frame::Native);

// Reports built on the checks above, for the CLI and the catalog.
VerificationReport curvature_report(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                    const CurvatureTolerances& tol = {});
// Passes when g is a function of one of xi +- eta in the native or mapped
// frame, or admits a Killing field.
VerificationReport revolution_report(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                     double tol = 1e-9);
// Passes when p_xi +- p_eta, p_X +- p_Y or a Killing momentum commutes with H.
VerificationReport linear_report(const SystemSpec& spec, int n_points, std::uint64_t seed,
                                 double tol = 1e-9);

}  // namespace superint
