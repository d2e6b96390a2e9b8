// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "superint/jets.hpp"
#include "superint/systems.hpp"
#include "support.hpp"

using namespace superint;

TEST(HessIndex, SymmetricAndDense) {
  std::array<int, kHessSize> hits{};
  for (int i = 0; i < kPhaseDim; ++i) {
    for (int j = 0; j < kPhaseDim; ++j) {
      EXPECT_EQ(hess_index(i, j), hess_index(j, i));
      if (i <= j) ++hits[hess_index(i, j)];
    }
  }
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Jet2, ProductOfVariables) {
  const auto [x, y, px, py] = jet_seed({2.0, 3.0, 5.0, 7.0});
  const Jet2 f = x * x * y + px * py;
  EXPECT_DOUBLE_EQ(f.val, 12.0 + 35.0);
  EXPECT_DOUBLE_EQ(f.grad[kXi], 12.0);
  EXPECT_DOUBLE_EQ(f.grad[kEta], 4.0);
  EXPECT_DOUBLE_EQ(f.grad[kPXi], 7.0);
  EXPECT_DOUBLE_EQ(f.h(kXi, kXi), 6.0);
  EXPECT_DOUBLE_EQ(f.h(kXi, kEta), 4.0);
  EXPECT_DOUBLE_EQ(f.h(kEta, kEta), 0.0);
  EXPECT_DOUBLE_EQ(f.h(kPXi, kPEta), 1.0);
}

TEST(Jet2, QuotientMatchesClosedForm) {
  const auto [x, y, px, py] = jet_seed({1.5, 0.5, 0.0, 0.0});
  const Jet2 f = x / y;  // d2/dy2 (x/y) = 2x/y^3
  EXPECT_DOUBLE_EQ(f.val, 3.0);
  EXPECT_DOUBLE_EQ(f.grad[kEta], -6.0);
  EXPECT_DOUBLE_EQ(f.h(kEta, kEta), 24.0);
  EXPECT_DOUBLE_EQ(f.h(kXi, kEta), -4.0);
}

TEST(Jet2, PrimitivesMatchAnalyticDerivatives) {
  const double v = 0.7;
  const Jet2 x = Jet2::variable(kXi, v);
  struct Case {
    Jet2 j;
    double f, d1, d2;
  };
  const Case cases[] = {
      {exp(x), std::exp(v), std::exp(v), std::exp(v)},
      {log(x), std::log(v), 1 / v, -1 / (v * v)},
      {sqrt(x), std::sqrt(v), 0.5 / std::sqrt(v), -0.25 / std::pow(v, 1.5)},
      {sin(x), std::sin(v), std::cos(v), -std::sin(v)},
      {cos(x), std::cos(v), -std::sin(v), -std::cos(v)},
      {atan(x), std::atan(v), 1 / (1 + v * v), -2 * v / std::pow(1 + v * v, 2)},
      {sinh(x), std::sinh(v), std::cosh(v), std::sinh(v)},
      {cosh(x), std::cosh(v), std::sinh(v), std::cosh(v)},
      {tan(x), std::tan(v), 1 / std::pow(std::cos(v), 2), 2 * std::tan(v) / std::pow(std::cos(v), 2)},
      {pow(x, 3), v * v * v, 3 * v * v, 6 * v},
      {pow(x, -2), 1 / (v * v), -2 / (v * v * v), 6 / std::pow(v, 4)},
      {pow(x, 0.5), std::sqrt(v), 0.5 / std::sqrt(v), -0.25 / std::pow(v, 1.5)},
      {inv(x), 1 / v, -1 / (v * v), 2 / (v * v * v)},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(c.j.val, c.f, 1e-14);
    EXPECT_NEAR(c.j.grad[kXi], c.d1, 1e-13);
    EXPECT_NEAR(c.j.h(kXi, kXi), c.d2, 1e-12);
  }
}

TEST(Jet2, DomainErrors) {
  const Jet2 zero = Jet2::variable(kXi, 0.0);
  const Jet2 neg = Jet2::variable(kXi, -1.0);
  EXPECT_THROW(inv(zero), DomainError);
  EXPECT_THROW(log(neg), DomainError);
  EXPECT_THROW(sqrt(zero), DomainError);
  EXPECT_THROW(pow(neg, 0.5), DomainError);
  EXPECT_THROW(pow(zero, -1), DomainError);
  EXPECT_THROW(zero / 0.0, DomainError);
  EXPECT_THROW(exp(Jet2(1000.0)), DomainError);
  try {
    log(neg);
  } catch (const DomainError& e) {
    EXPECT_EQ(e.primitive(), "log");
    EXPECT_EQ(e.value(), -1.0);
  }
}

TEST(FiniteDifference, HamiltonianMatchesOracle) {
  const auto& pin = superint::testing::pins()["jet_h_i1"];
  const auto spec = superint::testing::make_spec(SystemClass::I1, {0, 0, 1, 2, 0, 0, 0, 0});
  const Observable h = hamiltonian(spec);
  const auto pv = pin["point"];
  const PhasePoint p{pv[0], pv[1], pv[2], pv[3]};
  const Jet2 j = h(p);
  EXPECT_NEAR(j.val, pin["value"].get<double>(), 1e-15);
  for (int i = 0; i < kPhaseDim; ++i) {
    EXPECT_LE(normalized_diff(j.grad[i], pin["grad"][i].get<double>()), 1e-14);
    for (int k = 0; k < kPhaseDim; ++k) EXPECT_LE(normalized_diff(j.h(i, k), pin["hess"][i][k].get<double>()), 1e-14);
  }
  const auto fd = superint::testing::compare_with_fd(h, p);
  EXPECT_LE(fd.grad, 1e-6);
  EXPECT_LE(fd.hess, 1e-4);
}

TEST(FiniteDifference, RandomCompositions) {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const superint::testing::RandomComposition comp(rng, 3);
    const Observable obs(comp.text(), [comp](const PhasePoint& p) { return comp(p); });
    const PhasePoint p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto r = superint::testing::compare_with_fd(obs, p);
    EXPECT_LE(r.grad, 1e-6) << comp.text();
    EXPECT_LE(r.hess, 1e-4) << comp.text();
  }
}

TEST(FiniteDifference, RejectsBadSteps) {
  const Observable obs("x", [](const PhasePoint& p) { return Jet2::variable(kXi, p.xi); });
  EXPECT_THROW(fd_derivatives(obs, {}, FdSteps{0.0, 1e-4}), std::invalid_argument);
}

TEST(PhasePoint, IndexingAndWith) {
  const PhasePoint p{1, 2, 3, 4};
  EXPECT_EQ(p[kPEta], 4);
  EXPECT_EQ(p.with(kEta, 9.0).eta, 9.0);
  EXPECT_THROW(p[7], std::out_of_range);
  EXPECT_FALSE(PhasePoint({NAN, 0, 0, 0}).finite());
}

TEST(NormalizedDiff, Scale) {
  EXPECT_DOUBLE_EQ(normalized_diff(0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(normalized_diff(1e6, 1e6 + 1), 1.0 / (1e6 + 2));
}
