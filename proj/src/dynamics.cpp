// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain a
// copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superint/dynamics.hpp"

#include <algorithm>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "superint/poisson.hpp"

namespace superint {

namespace {

using State = std::array<double, kPhaseDim>;

State to_state(const PhasePoint& p) { return {p.xi, p.eta, p.p_xi, p.p_eta}; }
PhasePoint to_point(const State& s) { return {s[0], s[1], s[2], s[3]}; }

std::string step_failure_message(double t, double dt) {
  std::ostringstream os;
  os.precision(17);
  os << "step size underflow at t = " << t << " (dt = " << dt << ")";
  return os.str();
}

// Weighted RMS norm used by the error test.
double error_norm(const State& err, const State& x0, const State& x1, double rtol, double atol) {
  double sum = 0.0;
  for (int i = 0; i < kPhaseDim; ++i) {
    const double sk = atol + rtol * std::max(std::abs(x0[i]), std::abs(x1[i]));
    const double r = err[i] / sk;
    sum += r * r;
  }
  return std::sqrt(sum / kPhaseDim);
}

class FlowDomain {
 public:
  explicit FlowDomain(const SystemSpec& spec) : fns_(spec), domain_(flow_domain(spec.cls)) {}

  // Inside the domain with H, A and B all finite.
  bool contains(const PhasePoint& p) const {
    if (!p.finite() || !domain_.admits(fns_, p.xi, p.eta)) return false;
    try {
      return std::isfinite(fns_.hamiltonian(p.xi, p.eta, p.p_xi, p.p_eta)) &&
             std::isfinite(fns_.integral_a(p.xi, p.eta, p.p_xi, p.p_eta)) &&
             std::isfinite(fns_.integral_b(p.xi, p.eta, p.p_xi, p.p_eta));
    } catch (const DomainError&) {
      return false;
    }
  }

 private:
  SystemFns fns_;
  SampleDomain domain_;
};

double initial_step(const State& x, const State& f, const IntegratorOptions& opts) {
  if (opts.initial_dt > 0.0) return opts.initial_dt;
  double d0 = 0.0;
  double d1 = 0.0;
  for (int i = 0; i < kPhaseDim; ++i) {
    const double sk = opts.abs_tol + opts.rel_tol * std::abs(x[i]);
    d0 = std::max(d0, std::abs(x[i]) / sk);
    d1 = std::max(d1, std::abs(f[i]) / sk);
  }
  const double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  return std::min(h, opts.max_dt);
}

}  // namespace

StepFailure::StepFailure(double t, double dt)
    : std::runtime_error(step_failure_message(t, dt)), t_(t), dt_(dt) {}

SampleDomain flow_domain(SystemClass c) {
  SampleDomain d = default_domain(c);
  if (c == SystemClass::I3) {
    d.xi = d.eta = {-4.0, 4.0};
  } else if (c == SystemClass::II1) {
    d.xi = d.eta = {-20.0, 20.0};
  } else {
    // sqrt and log of the coordinates appear in A and B.
    d.xi = d.eta = {0.05, 20.0};
  }
  return d;
}

PhasePoint hamilton_field(const SystemFns& fns, const PhasePoint& point) {
  const auto [x, e, px, pe] = jet_seed(point);
  const Jet2 h = fns.hamiltonian(x, e, px, pe);
  return {h.grad[kPXi], h.grad[kPEta], -h.grad[kXi], -h.grad[kEta]};
}

std::string_view to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::DomainExit: return "domain-exit";
  }
  return "unknown";
}

Trajectory integrate(const SystemSpec& spec, const PhasePoint& initial, double t_end,
                     const IntegratorOptions& opts) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol >= 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  const SystemFns fns(spec);
  const FlowDomain domain(spec);
  if (!domain.contains(initial)) {
    throw DomainError("integrate", initial.xi, "initial point outside the flow domain");
  }

  const auto system = [&fns](const State& x, State& dxdt, double /*t*/) {
    dxdt = to_state(hamilton_field(fns, to_point(x)));
  };

  boost::numeric::odeint::runge_kutta_dopri5<State> stepper;
  Trajectory traj;
  traj.spec = spec;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  // PI controller constants (Hairer, Norsett and Wanner, DOPRI5).
  constexpr double kBeta = 0.04;
  constexpr double kExpo = 0.2 - 0.75 * kBeta;
  constexpr double kSafe = 0.9;
  constexpr double kMinFac = 0.2;
  constexpr double kMaxFac = 10.0;

  State x = to_state(initial);
  State dxdt;
  system(x, dxdt, 0.0);
  double t = 0.0;
  double dt = initial_step(x, dxdt, opts);
  double err_old = 1e-4;
  // Earliest time known to be outside the domain.
  double t_bad = std::numeric_limits<double>::infinity();
  long steps = 0;

  State xn;
  State dxdtn;
  State xerr;
  while (t < t_end) {
    if (++steps > opts.max_steps) throw StepFailure(t, dt);
    if (t_bad - t <= opts.exit_resolution) {
      traj.status = TrajectoryStatus::DomainExit;
      traj.exit_time = t_bad;
      break;
    }
    dt = std::min({dt, t_end - t, opts.max_dt});
    if (std::isfinite(t_bad)) dt = std::min(dt, 0.5 * (t_bad - t));

    bool inside = true;
    try {
      stepper.do_step(system, x, dxdt, t, xn, dxdtn, dt, xerr);
      inside = domain.contains(to_point(xn));
    } catch (const DomainError&) {
      inside = false;
    }
    if (!inside) {
      t_bad = std::min(t_bad, t + dt);
      dt *= 0.5;
      ++traj.stats.rejected;
      continue;
    }

    const double err = error_norm(xerr, x, xn, opts.rel_tol, opts.abs_tol);
    const double fac11 = std::pow(err, kExpo);
    if (err <= 1.0) {
      t = (t_end - t - dt <= 1e-15 * t_end) ? t_end : t + dt;
      x = xn;
      dxdt = dxdtn;
      traj.times.push_back(t);
      traj.states.push_back(to_point(x));
      auto& st = traj.stats;
      st.min_dt = st.accepted == 0 ? dt : std::min(st.min_dt, dt);
      st.max_dt = std::max(st.max_dt, dt);
      ++st.accepted;
      double fac = fac11 / std::pow(err_old, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kMaxFac, 1.0 / kMinFac);
      dt /= fac;
      err_old = std::max(err, 1e-4);
    } else {
      ++traj.stats.rejected;
      dt /= std::min(1.0 / kMinFac, fac11 / kSafe);
      if (dt < opts.min_dt) throw StepFailure(t, dt);
    }
  }
  return traj;
}

Trajectory integrate(const SystemSpec& spec, const PhasePoint& initial, double t_end, double rel_tol,
                     double abs_tol) {
  IntegratorOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = abs_tol;
  return integrate(spec, initial, t_end, opts);
}

PhasePoint clamp_energy(const SystemSpec& spec, const PhasePoint& point, double h_max) {
  const SystemFns fns(spec);
  const auto h_at = [&](double s) {
    return fns.hamiltonian(point.xi, point.eta, s * point.p_xi, s * point.p_eta);
  };
  if (std::abs(h_at(1.0)) <= h_max) return point;
  if (std::abs(h_at(0.0)) > h_max) {
    throw std::invalid_argument("potential alone exceeds the energy bound at the initial point");
  }
  // |H| is monotone in s^2 on [0, 1]; bisect for the largest admissible s.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(h_at(mid)) <= h_max ? lo : hi) = mid;
  }
  PhasePoint out = point;
  out.p_xi *= lo;
  out.p_eta *= lo;
  return out;
}

double DriftReport::worst_normalized() const {
  double w = 0.0;
  for (const auto& q : quantities) w = std::max(w, q.normalized);
  return w;
}

std::array<double, 4> conserved_quantities(const SystemSpec& spec, const PhasePoint& point) {
  const PointBrackets pb = point_brackets(spec, point);
  const AlgebraConstants k = algebra_constants(spec, pb.h);
  return {pb.h, pb.a, pb.b, casimir_combination(k, pb.a, pb.b, pb.c).value};
}

DriftReport drift_report(const SystemSpec& spec, const Trajectory& traj) {
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");
  static constexpr std::array<const char*, 4> kNames = {"H", "A", "B", "casimir"};
  const auto q0 = conserved_quantities(spec, traj.states.front());
  std::array<double, 4> worst{};
  for (const auto& s : traj.states) {
    const auto q = conserved_quantities(spec, s);
    for (int i = 0; i < 4; ++i) worst[i] = std::max(worst[i], std::abs(q[i] - q0[i]));
  }
  DriftReport out;
  for (int i = 0; i < 4; ++i) {
    out.quantities.push_back({kNames[i], q0[i], worst[i], worst[i] / (1.0 + std::abs(q0[i]))});
  }
  return out;
}

double time_reversal_error(const SystemSpec& spec, const PhasePoint& initial, double t_end,
                           const IntegratorOptions& opts) {
  const Trajectory fwd = integrate(spec, initial, t_end, opts);
  if (fwd.status != TrajectoryStatus::Completed) return std::numeric_limits<double>::infinity();
  PhasePoint back = fwd.final_state();
  back.p_xi = -back.p_xi;
  back.p_eta = -back.p_eta;
  const Trajectory rev = integrate(spec, back, t_end, opts);
  if (rev.status != TrajectoryStatus::Completed) return std::numeric_limits<double>::infinity();
  PhasePoint target = initial;
  target.p_xi = -target.p_xi;
  target.p_eta = -target.p_eta;
  double worst = 0.0;
  for (int i = 0; i < kPhaseDim; ++i) {
    worst = std::max(worst, normalized_diff(rev.final_state()[i], target[i]));
  }
  return worst;
}

VerificationReport verify_trajectory(const SystemSpec& spec, const PhasePoint& initial,
                                     const TrajectoryCheckOptions& opts) {
  const Trajectory traj = integrate(spec, initial, opts.t_end, opts.integrator);
  if (traj.status == TrajectoryStatus::DomainExit) {
    throw DomainError("trajectory", *traj.exit_time, "flow left the domain before t_end");
  }
  VerificationReport r;
  r.kind = "trajectory";
  r.spec = spec;
  r.n_points = static_cast<int>(traj.states.size());
  const DriftReport drift = drift_report(spec, traj);
  for (const auto& q : drift.quantities) r.add("drift:" + q.name, q.normalized, opts.drift_tol);
  if (opts.check_reversal) {
    r.add("time-reversal", time_reversal_error(spec, initial, opts.t_end, opts.integrator),
          opts.reversal_tol);
  }
  auto& d = r.details;
  d["initial"] = {initial.xi, initial.eta, initial.p_xi, initial.p_eta};
  d["t_end"] = opts.t_end;
  d["rel_tol"] = opts.integrator.rel_tol;
  d["abs_tol"] = opts.integrator.abs_tol;
  d["accepted_steps"] = traj.stats.accepted;
  d["rejected_steps"] = traj.stats.rejected;
  d["min_dt"] = traj.stats.min_dt;
  d["max_dt"] = traj.stats.max_dt;
  for (const auto& q : drift.quantities) {
    d["drift"][q.name] = {{"initial", q.initial}, {"max_abs", q.max_abs}, {"normalized", q.normalized}};
  }
  return r;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,xi,eta,p_xi,p_eta,H,A,B,K\n";
  char buf[32];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << sep;
  };
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const PhasePoint& s = traj.states[i];
    const auto q = conserved_quantities(traj.spec, s);
    put(traj.times[i], ',');
    put(s.xi, ',');
    put(s.eta, ',');
    put(s.p_xi, ',');
    put(s.p_eta, ',');
    put(q[0], ',');
    put(q[1], ',');
    put(q[2], ',');
    put(q[3], '\n');
  }
}

}  // namespace superint
