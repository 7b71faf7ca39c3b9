// Copyright 2026 The ALIP-DRS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alipdrs/sim.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

#include "alipdrs/errors.h"
#include "alipdrs/trajgen.h"

namespace alipdrs {
namespace {

long TicksPerStep(const Scenario& s) {
  return std::lround(s.params.step_duration() / s.control_tick);
}

bool Diverged(const PlanarState& s) {
  return !s.IsFinite() || std::abs(s.pos) > kDivergencePosition ||
         std::abs(s.mom) > kDivergenceMomentum;
}

struct PlantState {
  PlanarState sagittal;
  PlanarState frontal;
};

// Advances the true plant over [ta, tb], applying pushes with ta <= t < tb and
// any load bias overlapping the interval.
class PlantIntegrator {
 public:
  PlantIntegrator(const Scenario& scenario, SimTrace& trace)
      : scenario_(scenario), trace_(trace) {}

  // Returns true if a push was applied.
  bool Advance(PlantState& x, double ta, double tb) {
    std::vector<double> cuts = {ta, tb};
    for (const auto& d : scenario_.disturbances) {
      if (d.kind == Disturbance::Kind::kPush && d.t_start >= ta && d.t_start < tb) {
        cuts.push_back(d.t_start);
      } else if (d.kind == Disturbance::Kind::kLoadBias) {
        if (d.t_start > ta && d.t_start < tb) cuts.push_back(d.t_start);
        if (d.t_end > ta && d.t_end < tb) cuts.push_back(d.t_end);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    bool pushed = false;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c];
      const double b = cuts[c + 1];
      for (std::size_t k = 0; k < scenario_.disturbances.size(); ++k) {
        const auto& d = scenario_.disturbances[k];
        if (d.kind == Disturbance::Kind::kPush && d.t_start == a) {
          Select(x, d.plane).mom += d.magnitude;
          trace_.disturbance_log.push_back({a, d});
          pushed = true;
        }
      }
      x.sagittal = Step(x.sagittal, a, b);
      x.frontal = Step(x.frontal, a, b);
    }
    return pushed;
  }

  bool BiasActive(double t) const {
    return std::any_of(scenario_.disturbances.begin(), scenario_.disturbances.end(),
                       [t](const Disturbance& d) {
                         return d.kind == Disturbance::Kind::kLoadBias &&
                                d.t_start <= t && t < d.t_end;
                       });
  }

 private:
  static PlanarState& Select(PlantState& x, Plane plane) {
    return plane == Plane::kSagittal ? x.sagittal : x.frontal;
  }

  PlanarState Step(const PlanarState& s, double a, double b) {
    PlanarState next = Flow(s, a, b, scenario_.params, scenario_.drs_true);
    for (std::size_t k = 0; k < scenario_.disturbances.size(); ++k) {
      const auto& d = scenario_.disturbances[k];
      if (d.kind != Disturbance::Kind::kLoadBias || d.plane != s.plane) continue;
      if (d.t_start <= a && b <= d.t_end) {
        if (!bias_logged_[k]) {
          trace_.disturbance_log.push_back({a, d});
          bias_logged_[k] = true;
        }
        const Eigen::Vector2d r =
            MomentumRateResponse(scenario_.params, s.plane, d.magnitude, b - a);
        next.pos += r[0];
        next.mom += r[1];
      }
    }
    return next;
  }

  const Scenario& scenario_;
  SimTrace& trace_;
  std::vector<bool> bias_logged_ = std::vector<bool>(scenario_.disturbances.size(), false);
};

}  // namespace

std::string_view ToString(SimStatus status) {
  return status == SimStatus::kOk ? "ok" : "diverged";
}

void Scenario::Validate() const {
  if (!(control_tick > 0.0) || !std::isfinite(control_tick)) {
    throw std::invalid_argument("control tick must be positive");
  }
  const double tstep = params.step_duration();
  const double ticks = std::round(tstep / control_tick);
  if (ticks < 1.0 || std::abs(ticks * control_tick - tstep) > 1e-9) {
    throw std::invalid_argument("control tick must divide T_step");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be positive");
  }
  if (initial_sagittal.plane != Plane::kSagittal || initial_frontal.plane != Plane::kFrontal ||
      !initial_sagittal.IsFinite() || !initial_frontal.IsFinite()) {
    throw std::invalid_argument("initial states must be finite and correctly tagged");
  }
  if (!(random_initial_radius >= 0.0)) {
    throw std::invalid_argument("random initial radius must be >= 0");
  }
  if (orbit_x.n1 < 1 || orbit_x.n2 < 1 || orbit_y.n1 < 1 || orbit_y.n2 < 1) {
    throw std::invalid_argument("orbit N1, N2 must be positive");
  }
  for (const auto& d : disturbances) {
    if (!std::isfinite(d.t_start) || !std::isfinite(d.t_end) || !std::isfinite(d.magnitude)) {
      throw std::invalid_argument("disturbance values must be finite");
    }
    if (d.kind == Disturbance::Kind::kLoadBias && d.t_end < d.t_start) {
      throw std::invalid_argument("load bias window is reversed");
    }
  }
}

std::vector<PlanarState> SimTrace::PostImpactStates(Plane plane) const {
  std::vector<PlanarState> out;
  out.reserve(events.size() + 1);
  if (!samples.empty()) {
    out.push_back(plane == Plane::kSagittal ? samples.front().sagittal
                                            : samples.front().frontal);
  }
  for (const auto& e : events) {
    out.push_back(plane == Plane::kSagittal ? e.post_sagittal : e.post_frontal);
  }
  return out;
}

SimTrace Run(const Scenario& scenario) {
  scenario.Validate();
  const AlipParams& params = scenario.params;
  const double tstep = params.step_duration();
  const long per_step = TicksPerStep(scenario);
  const double tick = tstep / static_cast<double>(per_step);
  const long total = static_cast<long>(std::floor(scenario.duration / tick + 1e-9));
  auto time_of = [&](long i) {
    return static_cast<double>(i / per_step) * tstep +
           static_cast<double>(i % per_step) * tick;
  };

  SimTrace trace;
  trace.step_duration = tstep;
  trace.samples.reserve(static_cast<std::size_t>(total) + 1);

  PlantState x{scenario.initial_sagittal, scenario.initial_frontal};
  if (scenario.random_initial_radius > 0.0) {
    std::mt19937_64 rng(scenario.seed);
    std::uniform_real_distribution<double> dist(-scenario.random_initial_radius,
                                                scenario.random_initial_radius);
    x.sagittal.pos = dist(rng);
    x.sagittal.mom = dist(rng);
    x.frontal.pos = dist(rng);
    x.frontal.mom = dist(rng);
  }

  FootstepPlanner planner(params, scenario.drs_believed, scenario.targets,
                          scenario.initial_support);
  PlantIntegrator plant(scenario, trace);
  SwingTrajectory swing;
  swing.BeginStep({0.0, tstep});

  // Surface-frame foot positions; y points left.
  Eigen::Vector2d stance = Eigen::Vector2d::Zero();
  const double side = scenario.initial_support == SupportSide::kRight ? 1.0 : -1.0;
  Eigen::Vector2d swing_foot(0.0, side * params.step_width());
  std::optional<MomentumTarget> pending;
  bool pushed = false;

  for (long i = 0;; ++i) {
    const double t = time_of(i);
    unsigned flags = 0;
    if (i > 0 && i % per_step == 0) {
      const Eigen::Vector2d com(x.sagittal.pos, x.frontal.pos);
      const FootstepCommand last =
          planner.Plan(x.sagittal, x.frontal, t, t, t + tstep, stance + com);
      ImpactEvent ev;
      ev.index = static_cast<int>(i / per_step);
      ev.time = t;
      ev.command = last;
      ev.pre_sagittal = x.sagittal;
      ev.pre_frontal = x.frontal;
      x.sagittal = Reset(x.sagittal, last.u_x);
      x.frontal = Reset(x.frontal, last.u_y);
      ev.post_sagittal = x.sagittal;
      ev.post_frontal = x.frontal;
      ev.planned_target = pending;
      pending = last.target;
      swing_foot = stance;
      stance += Eigen::Vector2d(last.u_x, last.u_y);
      ev.landing = stance;
      planner.AdvanceStep();
      ev.new_support = planner.support();
      trace.events.push_back(ev);
      swing.BeginStep({t, tstep});
      flags |= kFlagImpact;
    }

    const Eigen::Vector2d com_rel(x.sagittal.pos, x.frontal.pos);
    const Eigen::Vector2d com_surface = stance + com_rel;
    FootstepCommand cmd = trace.samples.empty() ? FootstepCommand{} : trace.samples.back().command;
    const bool last_tick = i >= total;
    if (!last_tick) {
      const double step_end = static_cast<double>(i / per_step + 1) * tstep;
      cmd = planner.Plan(x.sagittal, x.frontal, t, step_end, step_end + tstep, com_surface);
      swing.Update(t, swing_foot - com_surface, cmd);
    }

    TraceSample sample;
    sample.t = t;
    sample.sagittal = x.sagittal;
    sample.frontal = x.frontal;
    sample.phase = Phase(t, swing.clock());
    sample.support = planner.support();
    if (pushed) flags |= kFlagPush;
    if (plant.BiasActive(t)) flags |= kFlagBias;
    sample.flags = flags;
    sample.command = cmd;
    sample.com_surface = com_surface;
    sample.com_world = com_surface + Eigen::Vector2d(scenario.drs_true.Position(Axis::kX, t),
                                                     scenario.drs_true.Position(Axis::kY, t));
    sample.swing_reference = swing.Reference(t);
    trace.samples.push_back(sample);

    if (last_tick) break;
    if (Diverged(x.sagittal) || Diverged(x.frontal)) {
      trace.status = SimStatus::kDiverged;
      trace.diverged_at = t;
      break;
    }
    pushed = plant.Advance(x, t, time_of(i + 1));
  }
  return trace;
}

std::vector<double> OrbitTargets(const Scenario& scenario, Plane plane) {
  const auto& spec = scenario.targets;
  const int n1 = scenario.orbit(plane).n1;
  if (spec.source == TargetSource::kPathTracking) {
    throw std::invalid_argument("path-tracking targets have no fixed periodic orbit");
  }
  if (plane == Plane::kSagittal) return std::vector<double>(static_cast<std::size_t>(n1), spec.sagittal);
  if (spec.source == TargetSource::kConstantVelocity) {
    return std::vector<double>(static_cast<std::size_t>(n1), spec.frontal);
  }
  if (n1 % 2 != 0) {
    throw std::invalid_argument("step-width targets alternate, frontal N1 must be even");
  }
  // The target at the end of step j is chosen during step j - 1.
  std::vector<double> targets(static_cast<std::size_t>(n1));
  for (int j = 0; j < n1; ++j) {
    const bool same_as_initial = ((j - 1) % 2 + 2) % 2 == 0;
    const SupportSide previous =
        same_as_initial ? scenario.initial_support : Opposite(scenario.initial_support);
    targets[static_cast<std::size_t>(j)] = DesiredFrontalMomentum(scenario.params, previous);
  }
  return targets;
}

PeriodicOrbit ScenarioOrbit(const Scenario& scenario, Plane plane) {
  const auto targets = OrbitTargets(scenario, plane);
  const OrbitSpec& spec = scenario.orbit(plane);
  return ComputePeriodicOrbit(scenario.params, scenario.drs_true, plane, spec.n1, spec.n2,
                              targets, 0.0);
}

ConvergenceReport VerifyConvergence(const SimTrace& trace, const PeriodicOrbit& orbit,
                                    double tol) {
  const auto states = trace.PostImpactStates(orbit.plane());
  return VerifyConvergence(std::span<const PlanarState>(states), orbit, tol);
}

Metrics ComputeMetrics(const SimTrace& trace, const AlipParams& params,
                       double target_velocity, double window,
                       std::span<const PeriodicOrbit> orbits) {
  (void)params;
  if (!(window > 0.0)) throw InsufficientDataError("velocity window must be positive");
  if (trace.samples.size() < 2) throw InsufficientDataError("trace has fewer than 2 samples");
  const TraceSample& last = trace.samples.back();
  const double t_begin = last.t - window;
  if (t_begin < trace.samples.front().t - 1e-9) {
    throw InsufficientDataError("trace is shorter than the velocity window");
  }
  auto it = std::lower_bound(
      trace.samples.begin(), trace.samples.end(), t_begin - 1e-9,
      [](const TraceSample& s, double t) { return s.t < t; });
  double begin_x = it->com_world[0];
  if (std::abs(it->t - t_begin) > 1e-9 && it != trace.samples.begin()) {
    const auto prev = std::prev(it);
    const double w = (t_begin - prev->t) / (it->t - prev->t);
    begin_x = (1.0 - w) * prev->com_world[0] + w * it->com_world[0];
  }

  Metrics m;
  m.window = window;
  m.avg_forward_velocity = (last.com_world[0] - begin_x) / window;
  m.target_velocity = target_velocity;
  m.velocity_error = std::abs(m.avg_forward_velocity - target_velocity);
  for (const auto& e : trace.events) m.landing_positions.push_back(e.landing);
  for (const auto& s : trace.samples) {
    const double norm = std::sqrt(s.sagittal.pos * s.sagittal.pos +
                                  s.sagittal.mom * s.sagittal.mom +
                                  s.frontal.pos * s.frontal.pos + s.frontal.mom * s.frontal.mom);
    m.max_state_norm = std::max(m.max_state_norm, norm);
  }
  m.bounded = trace.status == SimStatus::kOk;
  if (!orbits.empty()) {
    m.converged = true;
    m.steps_to_converge = 0;
    for (const auto& orbit : orbits) {
      ConvergenceReport r;
      try {
        r = VerifyConvergence(trace, orbit, kConvergenceTolerance);
      } catch (const InsufficientDataError&) {
        r = {};
      }
      m.converged = m.converged && r.converged;
      m.steps_to_converge = (r.steps_to_converge < 0 || m.steps_to_converge < 0)
                                ? -1
                                : std::max(m.steps_to_converge, r.steps_to_converge);
    }
  }
  return m;
}

Metrics ScenarioMetrics(const Scenario& scenario, const SimTrace& trace) {
  const double window = scenario.orbit_x.n1 * scenario.params.step_duration();
  const double target_velocity =
      scenario.targets.source == TargetSource::kPathTracking
          ? scenario.targets.path_velocity[0]
          : scenario.targets.sagittal / scenario.params.mass_height();
  std::vector<PeriodicOrbit> orbits;
  if (scenario.targets.source != TargetSource::kPathTracking) {
    orbits.push_back(ScenarioOrbit(scenario, Plane::kSagittal));
    orbits.push_back(ScenarioOrbit(scenario, Plane::kFrontal));
  }
  return ComputeMetrics(trace, scenario.params, target_velocity, window, orbits);
}

DrsMotion PerturbBelievedMotion(const Scenario& base, double delta_amplitude,
                                double delta_time) {
  std::vector<SinusoidTerm> terms = base.drs_believed.terms();
  const auto count = std::count_if(terms.begin(), terms.end(),
                                   [](const SinusoidTerm& t) { return t.axis == Axis::kX; });
  if (count != 1) {
    throw std::invalid_argument("uncertainty sweep needs exactly one sagittal sinusoid");
  }
  for (auto& term : terms) {
    if (term.axis != Axis::kX) continue;
    term.amplitude += delta_amplitude;
    term.phase += 2.0 * std::numbers::pi * delta_time / term.period;
  }
  return DrsMotion(std::move(terms), base.drs_believed.profiles());
}

std::vector<SweepCell> UncertaintySweep(const Scenario& base,
                                        std::span<const double> delta_amplitude,
                                        std::span<const double> delta_time) {
  // Validate the precondition up front rather than per cell.
  PerturbBelievedMotion(base, 0.0, 0.0);
  std::vector<std::future<SweepCell>> jobs;
  for (double da : delta_amplitude) {
    for (double dt : delta_time) {
      jobs.push_back(std::async(std::launch::async, [&base, da, dt] {
        SweepCell cell;
        cell.delta_amplitude = da;
        cell.delta_time = dt;
        try {
          Scenario s = base;
          s.drs_believed = PerturbBelievedMotion(base, da, dt);
          const SimTrace trace = Run(s);
          cell.status = trace.status;
          cell.metrics = ScenarioMetrics(s, trace);
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        return cell;
      }));
    }
  }
  std::vector<SweepCell> cells;
  cells.reserve(jobs.size());
  for (auto& job : jobs) cells.push_back(job.get());
  return cells;
}

}  // namespace alipdrs
