// temporal.hpp
// Continuous-evolution engine: time-parameterized universal wave functions,
// detection CDFs from squared coefficients, densities by differentiation,
// conditional renormalization given no detection, active and passive Zeno
// survival, and the time-ordering invariance of non-interacting systems.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qeraser/catalog.hpp"
#include "qeraser/hilbert.hpp"

namespace qeraser {

// A normalized amplitude family over a closed time interval. `detected`
// names the observer levels whose squared coefficients count as "detection
// happened" for the tracked color; `absorbing` additionally contains every
// level that ends the waiting (both photon colors for the cat), and is what
// conditional renormalization divides by.
struct EvolvingState {
  SystemLayout layout;
  std::function<std::vector<cplx>(double)> amplitude_fn;
  std::string observer_label;
  std::vector<std::string> detected;
  std::vector<std::string> absorbing;
  double t_start = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  std::function<Operator(double)> evolution;  // catalog matrix when a closed form exists

  bool in_domain(double t) const { return t >= t_start && t <= t_end; }
};

namespace detail {

inline double level_mass(const EvolvingState& s, double t,
                         const std::vector<std::string>& levels) {
  if (!s.in_domain(t))
    throw contract_error("time " + std::to_string(t) + " outside the state's domain");
  const std::vector<cplx> amps = s.amplitude_fn(t);
  const std::size_t pos = s.layout.position_of(s.observer_label);
  double mass = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t lvl = s.layout.decompose(i)[pos];
    const std::string& name = s.layout.at(pos).levels[lvl];
    for (const std::string& want : levels)
      if (name == want) {
        mass += std::norm(amps[i]);
        break;
      }
  }
  return mass;
}

}  // namespace detail

// P(detection happened by t) for the tracked color.
inline double detection_cdf(const EvolvingState& s, double t) {
  return detail::level_mass(s, t, s.detected);
}

// P(any absorbing event happened by t).
inline double absorbed_cdf(const EvolvingState& s, double t) {
  return detail::level_mass(s, t, s.absorbing.empty() ? s.detected : s.absorbing);
}

// d/dt detection_cdf by central difference, with a second-order one-sided
// fallback at the domain boundaries.
inline double detection_density(const EvolvingState& s, double t, double h = 1e-4) {
  if (!(h > 0.0)) throw contract_error("detection_density: step must be positive");
  if (!s.in_domain(t)) throw contract_error("detection_density: t outside domain");
  const auto f = [&](double tt) { return detection_cdf(s, tt); };
  if (t - h >= s.t_start && t + h <= s.t_end)
    return (f(t + h) - f(t - h)) / (2.0 * h);
  if (t + 2.0 * h <= s.t_end)
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
  if (t - 2.0 * h >= s.t_start)
    return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2.0 * h)) / (2.0 * h);
  throw contract_error("detection_density: t too close to both boundaries for step h");
}

// Density at t conditioned on nothing having been absorbed up to t0:
// density(t) / (1 - absorbed_cdf(t0)).
inline double conditional_density(const EvolvingState& s, double t, double t0, double h = 1e-4) {
  if (!(t0 < t)) throw contract_error("conditional_density: require t0 < t");
  if (!s.in_domain(t0) || !s.in_domain(t))
    throw contract_error("conditional_density: times outside domain");
  const double remaining = 1.0 - absorbed_cdf(s, t0);
  if (remaining <= 1e-12)
    throw contract_error("conditional_density: nothing left to condition on at t0");
  return detection_density(s, t, h) / remaining;
}

// State renormalized on the non-absorbed levels at time t.
inline StateVector undetected_state(const EvolvingState& s, double t) {
  if (!s.in_domain(t)) throw contract_error("undetected_state: t outside domain");
  const std::vector<cplx> amps = s.amplitude_fn(t);
  const std::size_t pos = s.layout.position_of(s.observer_label);
  const std::vector<std::string>& abs_levels = s.absorbing.empty() ? s.detected : s.absorbing;
  std::vector<cplx> kept(amps.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t lvl = s.layout.decompose(i)[pos];
    const std::string& name = s.layout.at(pos).levels[lvl];
    bool absorbed = false;
    for (const std::string& want : abs_levels)
      if (name == want) absorbed = true;
    if (!absorbed) kept[i] = amps[i];
  }
  StateVector raw(s.layout, std::move(kept), false);
  return raw.normalized_copy();
}

struct NextIntervalProbability {
  double first_order = 0.0;      // conditional density at t0 times dt
  double exact = 0.0;            // (CDF(t0+dt)-CDF(t0)) / remaining mass
  double end_asymptotic = 0.0;   // dt^2 / (2 (t_end - t0)^2); 0 for open domains
};

// Probability of a detection in (t0, t0+dt) given nothing absorbed by t0.
inline NextIntervalProbability next_interval_probability(const EvolvingState& s, double t0,
                                                         double dt, double h = 1e-4) {
  if (!(dt > 0.0)) throw contract_error("next_interval_probability: dt must be positive");
  if (!s.in_domain(t0) || !s.in_domain(t0 + dt))
    throw contract_error("next_interval_probability: interval outside domain");
  const double remaining = 1.0 - absorbed_cdf(s, t0);
  if (remaining <= 1e-12)
    throw contract_error("next_interval_probability: nothing left to condition on at t0");
  NextIntervalProbability r;
  r.first_order = detection_density(s, t0, h) / remaining * dt;
  r.exact = (detection_cdf(s, t0 + dt) - detection_cdf(s, t0)) / remaining;
  if (std::isfinite(s.t_end) && s.t_end > t0)
    r.end_asymptotic = dt * dt / (2.0 * (s.t_end - t0) * (s.t_end - t0));
  return r;
}

// Conditional detection-time distribution for all absorbing events after t0;
// its mass over (t0, t_end) is (absorbed(t_end) - absorbed(t0)) / remaining,
// which is 1 exactly when detection is eventually certain (the decay case).
struct ConditionalDensity {
  double t0 = 0.0;
  std::function<double(double)> density_fn;
  std::string closed_form;  // optional tag

  double integrate(double upto, int panels = 4000) const {
    // composite Simpson over (t0, upto)
    if (!(upto > t0)) throw contract_error("ConditionalDensity: empty integration range");
    if (panels % 2 == 1) ++panels;
    const double h = (upto - t0) / panels;
    double acc = density_fn(t0 + 1e-12 * (upto - t0)) + density_fn(upto);
    for (int k = 1; k < panels; ++k) acc += density_fn(t0 + k * h) * (k % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  }
};

inline ConditionalDensity conditional_distribution(const EvolvingState& s, double t0,
                                                   std::string closed_form = {},
                                                   double h = 1e-4) {
  const double remaining = 1.0 - absorbed_cdf(s, t0);
  if (remaining <= 1e-12)
    throw contract_error("conditional_distribution: nothing left to condition on at t0");
  EvolvingState total = s;
  total.detected = s.absorbing.empty() ? s.detected : s.absorbing;
  return ConditionalDensity{
      t0,
      [total, remaining, h](double t) { return detection_density(total, t, h) / remaining; },
      std::move(closed_form)};
}

// ---- the three built-in evolutions ------------------------------------------

// sqrt(e^{-lt}) |U>|sad> + sqrt(1-e^{-lt}) |Th>|happy>
inline EvolvingState decay_state(double lambda) {
  if (!(lambda > 0.0)) throw contract_error("decay_state: lambda must be positive");
  SystemLayout lay({Subsystem("atom", {"U", "Th"}), Subsystem("bob", {"sad", "happy"})});
  EvolvingState s;
  s.layout = lay;
  s.amplitude_fn = [lambda](double t) {
    std::vector<cplx> a(4, cplx(0.0, 0.0));
    a[0] = std::sqrt(std::exp(-lambda * t));        // U, sad
    a[3] = std::sqrt(1.0 - std::exp(-lambda * t));  // Th, happy
    return a;
  };
  s.observer_label = "bob";
  s.detected = {"happy"};
  s.absorbing = {"happy"};
  s.t_start = 0.0;
  s.t_end = std::numeric_limits<double>::infinity();
  s.evolution = [lambda](double t) { return catalog::decay_evolution(lambda, t); };
  return s;
}

// e^{-it}/sqrt2 (cos t (|alive>+|dead>)|neutral>
//               + i sin t (|dead>|happy> + |alive>|sad>)), t in [0, pi/2].
// Detection tracks the blue photon (happy); both colors absorb.
inline EvolvingState cat_state() {
  SystemLayout lay(
      {Subsystem("cat", {"alive", "dead"}), Subsystem("alice", {"neutral", "happy", "sad"})});
  EvolvingState s;
  s.layout = lay;
  s.amplitude_fn = [](double t) {
    const cplx phase(std::cos(t), -std::sin(t));
    const double inv = 1.0 / std::sqrt(2.0);
    std::vector<cplx> a(6, cplx(0.0, 0.0));
    a[0] = phase * cplx(std::cos(t) * inv, 0.0);  // alive, neutral
    a[3] = phase * cplx(std::cos(t) * inv, 0.0);  // dead, neutral
    a[4] = phase * cplx(0.0, std::sin(t) * inv);  // dead, happy
    a[2] = phase * cplx(0.0, std::sin(t) * inv);  // alive, sad
    return a;
  };
  s.observer_label = "alice";
  s.detected = {"happy"};
  s.absorbing = {"happy", "sad"};
  s.t_start = 0.0;
  s.t_end = kPi / 2.0;
  s.evolution = [](double t) { return catalog::cat_evolution(t); };
  return s;
}

// sqrt(1/2 (1 - t/T)) |u>|0> + sqrt(1/2 t/T) |u>|1> + sqrt(1/2) |d>|0>
inline EvolvingState passive_zeno_state(double duration) {
  if (!(duration > 0.0)) throw contract_error("passive_zeno_state: duration must be positive");
  SystemLayout lay({Subsystem("particle", {"u", "d"}), Subsystem("eye", {"0", "1"})});
  EvolvingState s;
  s.layout = lay;
  s.amplitude_fn = [duration](double t) {
    std::vector<cplx> a(4, cplx(0.0, 0.0));
    a[0] = std::sqrt(0.5 * (1.0 - t / duration));  // u, 0
    a[1] = std::sqrt(0.5 * t / duration);          // u, 1
    a[2] = std::sqrt(0.5);                         // d, 0
    return a;
  };
  s.observer_label = "eye";
  s.detected = {"1"};
  s.absorbing = {"1"};
  s.t_start = 0.0;
  s.t_end = duration;
  return s;
}

// Survival of the alive branch under n evenly spaced projective resets over
// total_time: evolve by total_time/n, project the observer back onto
// "neutral", repeat; equals (cos^2(total_time/n))^n.
inline double zeno_survival(int n, double total_time) {
  if (n < 1) throw contract_error("zeno_survival: need at least one measurement");
  const double dt = total_time / n;
  const Operator step = catalog::cat_evolution(dt);
  const SystemLayout& lay = step.layout();
  StateVector psi = StateVector::basis(lay, {"alive", "neutral"});
  const Operator neutral = projector_onto(
      StateVector::basis(single("alice", {"neutral", "happy", "sad"}), {"neutral"}));
  double survival = 1.0;
  for (int k = 0; k < n; ++k) {
    psi = apply(step, psi, {"cat", "alice"});
    ProjectionResult res = project(psi, neutral, {"alice"});
    survival *= res.survival;
    if (!res.state) return survival;  // null projection: nothing survives further
    psi = *res.state;
  }
  return survival;
}

// ---- time-ordering invariance (non-interacting, single-energy parts) -------

struct LocalProjector {
  Operator op;                       // on the listed target subsystems
  std::vector<std::string> targets;  // disjoint from the other projector's
};

// |P(A at t1 | B at t2) - P(A at t3 | B at t4)| where the joint probability
// is evaluated through the explicit phase-evolution sandwich for the
// Hamiltonian H = sum_j E_j * identity-on-subsystem-j.
inline double time_ordering_invariance(const StateVector& initial,
                                       const std::vector<double>& energies,
                                       const LocalProjector& proj_a,
                                       const LocalProjector& proj_b,
                                       std::pair<double, double> times_first,
                                       std::pair<double, double> times_second) {
  if (energies.size() != initial.layout().size())
    throw contract_error("time_ordering_invariance: one energy per subsystem required");
  for (const std::string& ta : proj_a.targets)
    for (const std::string& tb : proj_b.targets)
      if (ta == tb)
        throw contract_error("time_ordering_invariance: projector supports overlap on '" + ta +
                             "'");
  if (!proj_a.op.is_projector() || !proj_b.op.is_projector())
    throw contract_error("time_ordering_invariance: both operators must be projectors");

  double e_total = 0.0;
  for (double e : energies) e_total += e;
  const StateVector psi0 = initial.normalized() ? initial : initial.normalized_copy();

  const auto phase = [&](const StateVector& v, double t) {
    // e^{-iHt} with H = (sum_j E_j) * identity
    return v.scaled(cplx(std::cos(e_total * t), -std::sin(e_total * t)));
  };
  const auto joint_probability = [&](double t_a, double t_b) {
    StateVector v = phase(psi0, t_b);
    v = apply(proj_b.op, v, proj_b.targets);
    v = phase(v, t_a - t_b);
    v = apply(proj_a.op, v, proj_a.targets);
    v = phase(v, -(t_a - t_b));
    v = apply(proj_b.op, v, proj_b.targets);
    v = phase(v, -t_b);
    return inner(psi0, v).real();
  };
  return std::abs(joint_probability(times_first.first, times_first.second) -
                  joint_probability(times_second.first, times_second.second));
}

}  // namespace qeraser
