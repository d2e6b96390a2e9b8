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

// Adaptive integration of Hamilton's equations
//   xi' = dH/dp_xi, eta' = dH/dp_eta, p_xi' = -dH/dxi, p_eta' = -dH/deta
// and conservation checks along the resulting trajectories.

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "superint/jets.hpp"
#include "superint/report.hpp"
#include "superint/sampling.hpp"
#include "superint/systems.hpp"

namespace superint {

// Step size fell below the floor before the error test passed.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(double t, double dt);

  double time() const { return t_; }
  double step() const { return dt_; }

 private:
  double t_;
  double dt_;
};

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_dt = 0.0;  // 0 picks a starting step from the vector field
  double min_dt = 1e-14;
  double max_dt = 0.5;
  long max_steps = 5'000'000;
  // Exit times are located to this absolute resolution.
  double exit_resolution = 1e-9;
};

// Region the flow is allowed to visit: the sampling exclusions (|g| floor,
// |xi - eta| and friends) without the sampling box, restricted to where the
// class closed forms are real.
SampleDomain flow_domain(SystemClass c);

// Vector field at `point`. Throws DomainError where H cannot be evaluated.
PhasePoint hamilton_field(const SystemFns& fns, const PhasePoint& point);

enum class TrajectoryStatus { Completed, DomainExit };
std::string_view to_string(TrajectoryStatus s);

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  double min_dt = 0.0;
  double max_dt = 0.0;
};

struct Trajectory {
  SystemSpec spec;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  StepStats stats;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  std::optional<double> exit_time;

  const PhasePoint& final_state() const { return states.back(); }
};

// Dormand-Prince 4(5) with PI step control, recording every accepted step.
// Stops with status DomainExit when the state leaves flow_domain; the exit
// time is bracketed to opts.exit_resolution.
Trajectory integrate(const SystemSpec& spec, const PhasePoint& initial, double t_end,
                     const IntegratorOptions& opts = {});
Trajectory integrate(const SystemSpec& spec, const PhasePoint& initial, double t_end, double rel_tol,
                     double abs_tol);

// Scales the momenta of `point` toward zero until |H| <= h_max. Throws
// std::invalid_argument when the potential alone exceeds the bound.
PhasePoint clamp_energy(const SystemSpec& spec, const PhasePoint& point, double h_max = 10.0);

struct QuantityDrift {
  std::string name;
  double initial = 0.0;
  double max_abs = 0.0;     // max |Q(t) - Q(0)|
  double normalized = 0.0;  // max_abs / (1 + |Q(0)|)
};

struct DriftReport {
  std::vector<QuantityDrift> quantities;  // H, A, B, casimir

  double worst_normalized() const;
};

// Conserved quantities at one state: H, A, B and the Casimir combination.
std::array<double, 4> conserved_quantities(const SystemSpec& spec, const PhasePoint& point);

DriftReport drift_report(const SystemSpec& spec, const Trajectory& traj);

// Integrates to t_end, flips the momenta, integrates t_end again and returns
// the normalised distance to the momentum-flipped initial point.
double time_reversal_error(const SystemSpec& spec, const PhasePoint& initial, double t_end,
                           const IntegratorOptions& opts = {});

struct TrajectoryCheckOptions {
  double t_end = 10.0;
  IntegratorOptions integrator;
  double drift_tol = 1e-6;
  double reversal_tol = 1e-5;
  bool check_reversal = true;
};

// Drift identities for H, A, B and the Casimir, plus time reversal.
VerificationReport verify_trajectory(const SystemSpec& spec, const PhasePoint& initial,
                                     const TrajectoryCheckOptions& opts = {});

// CSV with header t,xi,eta,p_xi,p_eta,H,A,B,K and 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

}  // namespace superint
