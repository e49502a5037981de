// experiments.hpp
// Executable reconstructions of the delayed-choice, eraser, free-will,
// entanglement-swapping, trade-off and brainwash experiments. Each run is a
// pure function of its settings (and seed, where sampling is involved) and
// returns a structured report the acceptance suite checks against closed
// forms.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeraser/catalog.hpp"
#include "qeraser/hilbert.hpp"
#include "qeraser/optics.hpp"
#include "qeraser/random.hpp"

namespace qeraser {

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<std::pair<std::string, ScreenPattern>> patterns;
  std::vector<std::pair<std::string, double>> scalars;
  std::string notes;

  void add_setting(const std::string& key, const std::string& value) {
    settings.emplace_back(key, value);
  }
  void add_pattern(const std::string& name, ScreenPattern p) {
    for (const auto& kv : patterns)
      if (kv.first == name) throw invariant_error("duplicate pattern name '" + name + "'");
    patterns.emplace_back(name, std::move(p));
  }
  void add_scalar(const std::string& name, double v) {
    if (!std::isfinite(v)) throw invariant_error("scalar '" + name + "' is not finite");
    for (const auto& kv : scalars)
      if (kv.first == name) throw invariant_error("duplicate scalar name '" + name + "'");
    scalars.emplace_back(name, v);
  }
  double scalar(const std::string& name) const {
    for (const auto& kv : scalars)
      if (kv.first == name) return kv.second;
    throw contract_error("no scalar named '" + name + "'");
  }
  const ScreenPattern& pattern(const std::string& name) const {
    for (const auto& kv : patterns)
      if (kv.first == name) return kv.second;
    throw contract_error("no pattern named '" + name + "'");
  }
};

inline ScreenPattern pattern_sum(const ScreenPattern& a, const ScreenPattern& b) {
  if (a.xs != b.xs) throw contract_error("pattern_sum: grids differ");
  ScreenPattern r = a;
  for (std::size_t i = 0; i < r.intensity.size(); ++i) r.intensity[i] += b.intensity[i];
  if (r.baseline.size() == b.baseline.size())
    for (std::size_t i = 0; i < r.baseline.size(); ++i) r.baseline[i] += b.baseline[i];
  r.survival = a.survival + b.survival;
  r.visibility = visibility(r);
  return r;
}

// mean-subtracted cross-correlation; negative for anti-phase fringes
inline double pattern_crosscorr(const ScreenPattern& a, const ScreenPattern& b) {
  if (a.xs != b.xs) throw contract_error("pattern_crosscorr: grids differ");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.intensity.size(); ++i) {
    ma += a.intensity[i];
    mb += b.intensity[i];
  }
  ma /= a.intensity.size();
  mb /= b.intensity.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.intensity.size(); ++i)
    acc += (a.intensity[i] - ma) * (b.intensity[i] - mb);
  return acc;
}

namespace detail {

// block-diagonal action on path (x) pol: op_u on the upper branch's
// polarization, op_d on the lower branch's
inline Operator per_path_polarization(const Operator& op_u, const Operator& op_d) {
  SystemLayout lay({Subsystem("path", {"u", "d"}), Subsystem("pol", {"up", "right"})});
  CMatrix m(4);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      m.at(r, c) = op_u.matrix().at(r, c);
      m.at(2 + r, 2 + c) = op_d.matrix().at(r, c);
    }
  return Operator(lay, m);
}

inline double half_split_sum(const ScreenPattern& p, bool below_zero) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    if (p.xs[i] == 0.0)
      acc += 0.5 * p.intensity[i];
    else if ((p.xs[i] < 0.0) == below_zero)
      acc += p.intensity[i];
  }
  return acc;
}

}  // namespace detail

// ---- Wheeler's delayed choice ----------------------------------------------

enum class WheelerChoice { interference, which_path };

// interference: Mach-Zehnder phase scan through two beam-splitter passes,
// P(D1 | phi) = (1 + cos phi)/2, visibility exactly 1;
// which_path: the mirror sends each arm to its own detector, modeled as an
// orthogonal direction marker; no fringe structure, P(D1) = P(D2) = 1/2,
// and P(lower path | D1) stays below 1.
inline ExperimentReport run_wheeler(WheelerChoice choice, const ScreenConfig& config = {}) {
  ExperimentReport rep;
  rep.experiment = "wheeler";
  if (choice == WheelerChoice::interference) {
    rep.add_setting("choice", "interference");
    const SystemLayout path = qubit("path", "u", "d");
    const Operator bs = beam_splitter();
    const StateVector in = StateVector::basis(path, {"u"});
    const int points = 401;
    std::vector<double> phis(points), d1(points);
    for (int i = 0; i < points; ++i) {
      const double phi = -kPi + 2.0 * kPi * i / (points - 1);
      phis[i] = phi;
      StateVector v = apply(bs, in, {"path"});
      Operator arm_phase(path, CMatrix(2, {cplx(std::cos(phi), std::sin(phi)), 0.0, 0.0, 1.0}));
      v = apply(arm_phase, v, {"path"});
      v = apply(bs, v, {"path"});
      d1[i] = std::norm(v.amplitude(0));
    }
    ScreenPattern fringe = scan_pattern(std::move(phis), std::move(d1));
    rep.add_scalar("visibility", fringe.visibility);
    rep.add_pattern("fringe", std::move(fringe));
    rep.notes = "phase scan over the recombining beam splitter";
    return rep;
  }

  rep.add_setting("choice", "which_path");
  const Operator mark = catalog::marking_unitary("mirror", "path");
  const SystemLayout lay = mark.layout();
  StateVector psi = StateVector::basis(lay, {"0", "u"}) + StateVector::basis(lay, {"0", "d"});
  psi = apply(mark, psi.normalized_copy(), {"mirror", "path"});
  ScreenPattern total = intensity(psi, config, "path");

  const ProjectionResult lower =
      project(psi, projector_onto(StateVector::basis(qubit("q", "u", "d"), {"d"})), {"path"});
  ScreenPattern lower_part = intensity(*lower.state, config, "path", lower.survival);

  const double p_d1 = detail::half_split_sum(total, true);
  const double p_d2 = detail::half_split_sum(total, false);
  const double p_lower_and_d1 = detail::half_split_sum(lower_part, true);
  rep.add_scalar("visibility", total.visibility);
  rep.add_scalar("p_d1", p_d1);
  rep.add_scalar("p_d2", p_d2);
  rep.add_scalar("p_lower_given_d1", p_lower_and_d1 / p_d1);
  rep.add_pattern("screen", std::move(total));
  rep.notes = "detector D1 collects x<0, D2 collects x>0";
  return rep;
}

// ---- double-slit eraser ------------------------------------------------------

enum class EraserKind { none, polarizer_filter, hwp_upper, hwp_lower, qwp_pair };

inline ExperimentReport run_double_slit_eraser(std::optional<double> marker_angle,
                                               EraserKind eraser,
                                               double polarizer_angle = kPi / 4.0,
                                               const ScreenConfig& config = {}) {
  ExperimentReport rep;
  rep.experiment = "double_slit_eraser";
  SystemLayout lay({Subsystem("path", {"u", "d"}), Subsystem("pol", {"up", "right"})});
  StateVector psi =
      (StateVector::basis(lay, {"u", "up"}) + StateVector::basis(lay, {"d", "up"}))
          .normalized_copy();

  if (marker_angle) {
    rep.add_setting("marker", std::to_string(*marker_angle) + " rad");
    const Operator mark = detail::per_path_polarization(
        Operator::identity(qubit("pol", "up", "right")),
        wave_plate(WavePlateKind::half, *marker_angle));
    psi = apply(mark, psi, {"path", "pol"});
  } else {
    rep.add_setting("marker", "none");
  }

  double survival = 1.0;
  switch (eraser) {
    case EraserKind::none:
      rep.add_setting("eraser", "none");
      break;
    case EraserKind::polarizer_filter: {
      rep.add_setting("eraser", "polarizer(" + std::to_string(polarizer_angle) + " rad)");
      ProjectionResult res = project(psi, polarizer(polarizer_angle), {"pol"});
      survival = res.survival;
      if (!res.state) throw invariant_error("eraser polarizer extinguished the beam");
      psi = *res.state;
      break;
    }
    case EraserKind::hwp_upper: {
      rep.add_setting("eraser", "hwp_upper");
      const Operator e = detail::per_path_polarization(
          wave_plate(WavePlateKind::half, kPi / 2.0),
          Operator::identity(qubit("pol", "up", "right")));
      psi = apply(e, psi, {"path", "pol"});
      break;
    }
    case EraserKind::hwp_lower: {
      rep.add_setting("eraser", "hwp_lower");
      const Operator e = detail::per_path_polarization(
          Operator::identity(qubit("pol", "up", "right")),
          wave_plate(WavePlateKind::half, kPi / 2.0));
      psi = apply(e, psi, {"path", "pol"});
      break;
    }
    case EraserKind::qwp_pair: {
      // glued quarter-wave plates, axes 0 and 45 degrees; each path passes
      // its plate twice
      rep.add_setting("eraser", "qwp_pair");
      const Operator q0 = wave_plate(WavePlateKind::quarter, 0.0);
      const Operator q45 = wave_plate(WavePlateKind::quarter, kPi / 4.0);
      const Operator e = detail::per_path_polarization(q0 * q0, q45 * q45);
      psi = apply(e, psi, {"path", "pol"});
      break;
    }
  }

  ScreenPattern pattern = intensity(psi, config, "path", survival);
  rep.add_scalar("visibility", pattern.visibility);
  rep.add_scalar("survival", survival);
  rep.add_pattern("screen", std::move(pattern));
  return rep;
}

// ---- Herzog-style BBO eraser --------------------------------------------------

// Idler modeled as two orthonormal creation-pass modes with a mirror phase on
// the second pass; coincidences project onto the symmetric detection mode.
inline ExperimentReport run_herzog(bool qwp_on, bool filter_on,
                                   const std::vector<double>& phase_grid) {
  if (phase_grid.empty()) throw contract_error("run_herzog: empty phase grid");
  ExperimentReport rep;
  rep.experiment = "herzog";
  rep.add_setting("qwp", qwp_on ? "true" : "false");
  rep.add_setting("filter", filter_on ? "true" : "false");

  SystemLayout lay({Subsystem("pass", {"i1", "i2"}), Subsystem("ipol", {"up", "right"})});
  const SystemLayout pass_only = qubit("m", "i1", "i2");
  const StateVector sym =
      (StateVector::basis(pass_only, {"i1"}) + StateVector::basis(pass_only, {"i2"}))
          .normalized_copy();
  const Operator coincidence = projector_onto(sym);

  std::vector<double> rate(phase_grid.size());
  double survival = 1.0;
  for (std::size_t i = 0; i < phase_grid.size(); ++i) {
    const double theta = phase_grid[i];
    std::vector<cplx> amps(4, cplx(0.0, 0.0));
    const double inv = 1.0 / std::sqrt(2.0);
    amps[lay.compose({0, 0})] = inv;  // first pass, polarization up
    const std::size_t pol2 = qwp_on ? 1 : 0;
    amps[lay.compose({1, pol2})] = inv * cplx(std::cos(theta), std::sin(theta));
    StateVector psi(lay, std::move(amps), true);

    double weight = 1.0;
    if (filter_on) {
      ProjectionResult res = project(psi, polarizer(kPi / 4.0), {"ipol"});
      weight = res.survival;
      if (!res.state) {
        rate[i] = 0.0;
        continue;
      }
      psi = *res.state;
    }
    survival = weight;
    rate[i] = project(psi, coincidence, {"pass"}).survival * weight;
  }

  ScreenPattern c = scan_pattern(std::vector<double>(phase_grid), std::move(rate), survival);
  rep.add_scalar("visibility", c.visibility);
  rep.add_scalar("survival", survival);
  rep.add_pattern("coincidence", std::move(c));
  rep.notes = "signal photon is the constant coincidence reference and is factored out";
  return rep;
}

// ---- free-will test -----------------------------------------------------------

enum class FreeWillChoice { push, not_push };

inline ExperimentReport run_free_will(FreeWillChoice choice, const ScreenConfig& config = {}) {
  ExperimentReport rep;
  rep.experiment = "free_will";
  SystemLayout lay({Subsystem("p1", {"UP", "DOWN"}), Subsystem("p2", {"UP", "DOWN"})});
  const StateVector bell =
      (StateVector::basis(lay, {"UP", "UP"}) + StateVector::basis(lay, {"DOWN", "DOWN"}))
          .normalized_copy();
  const SystemLayout p2 = qubit("b", "UP", "DOWN");

  StateVector measured = bell;
  std::vector<std::string> labels;
  if (choice == FreeWillChoice::push) {
    rep.add_setting("choice", "push");
    labels = {"D4", "D3"};  // D4 catches UP pairs, D3 the DOWN ones
  } else {
    rep.add_setting("choice", "not_push");
    Operator bs = beam_splitter();
    measured = apply(bs, bell, {"p2"});
    labels = {"D1", "D2"};
  }
  const std::vector<StateVector> zbasis = {StateVector::basis(p2, {"UP"}),
                                           StateVector::basis(p2, {"DOWN"})};
  const std::vector<MeasurementResult> outcomes = measure(measured, {"p2"}, zbasis, labels);

  ScreenPattern total;
  bool first = true;
  for (const MeasurementResult& r : outcomes) {
    ScreenPattern p = intensity(r.post_state, config, "p1", r.probability);
    rep.add_scalar("p_" + r.outcome_label, r.probability);
    rep.add_scalar("visibility_" + r.outcome_label, p.visibility);
    if (first) {
      total = p;
      first = false;
    } else {
      total = pattern_sum(total, p);
    }
    rep.add_pattern(r.outcome_label, std::move(p));
  }
  if (choice == FreeWillChoice::not_push)
    rep.add_scalar("d1_d2_crosscorr",
                   pattern_crosscorr(rep.pattern("D1"), rep.pattern("D2")));
  rep.add_scalar("visibility_sum", total.visibility);
  rep.add_pattern("sum", std::move(total));
  return rep;
}

// ---- delayed-choice entanglement swapping --------------------------------------

enum class VictorChoice { bell, separable };

inline ExperimentReport run_entanglement_swapping(VictorChoice victor_choice, std::uint64_t seed,
                                                  int shots) {
  if (shots < 1) throw contract_error("run_entanglement_swapping: shots must be >= 1");
  ExperimentReport rep;
  rep.experiment = "entanglement_swapping";
  rep.add_setting("victor", victor_choice == VictorChoice::bell ? "bell" : "separable");
  rep.add_setting("shots", std::to_string(shots));
  rep.add_setting("seed", std::to_string(seed));

  const auto pair_layout = [](const std::string& a, const std::string& b) {
    return SystemLayout({Subsystem(a, {"H", "V"}), Subsystem(b, {"H", "V"})});
  };
  const auto phi_plus = [&](const std::string& a, const std::string& b) {
    SystemLayout l = pair_layout(a, b);
    return (StateVector::basis(l, {"H", "H"}) + StateVector::basis(l, {"V", "V"}))
        .normalized_copy();
  };
  const StateVector joint = tensor(phi_plus("p1", "p2"), phi_plus("p3", "p4"));

  // Victor's basis on photons 2 and 3
  const SystemLayout v_lay = pair_layout("v2", "v3");
  const auto vb = [&](const std::string& x, const std::string& y) {
    return StateVector::basis(v_lay, {x, y});
  };
  std::vector<StateVector> victor_basis;
  std::vector<std::string> victor_labels;
  if (victor_choice == VictorChoice::bell) {
    victor_basis = {(vb("H", "H") + vb("V", "V")).normalized_copy(),
                    (vb("H", "H") - vb("V", "V")).normalized_copy(),
                    (vb("H", "V") + vb("V", "H")).normalized_copy(),
                    (vb("H", "V") - vb("V", "H")).normalized_copy()};
    victor_labels = {"phi_plus", "phi_minus", "psi_plus", "psi_minus"};
  } else {
    victor_basis = {vb("H", "H"), vb("H", "V"), vb("V", "H"), vb("V", "V")};
    victor_labels = {"HH", "HV", "VH", "VV"};
  }
  const std::vector<MeasurementResult> victor =
      measure(joint, {"p2", "p3"}, victor_basis, victor_labels);

  // Alice/Bob correlators in the z and x bases, analytically per outcome
  const SystemLayout ab_lay = pair_layout("a", "b");
  const auto ab = [&](const std::string& x, const std::string& y) {
    return StateVector::basis(ab_lay, {x, y});
  };
  const std::vector<StateVector> basis_zz = {ab("H", "H"), ab("H", "V"), ab("V", "H"),
                                             ab("V", "V")};
  const std::vector<StateVector> basis_xx = {
      (ab("H", "H") + ab("H", "V") + ab("V", "H") + ab("V", "V")).normalized_copy(),
      (ab("H", "H") - ab("H", "V") + ab("V", "H") - ab("V", "V")).normalized_copy(),
      (ab("H", "H") + ab("H", "V") - ab("V", "H") - ab("V", "V")).normalized_copy(),
      (ab("H", "H") - ab("H", "V") - ab("V", "H") + ab("V", "V")).normalized_copy()};
  const double sign[4] = {1.0, -1.0, -1.0, 1.0};

  std::vector<std::vector<double>> dist_z, dist_x;
  std::vector<double> victor_probs;
  CMatrix alice_marginal(2);
  for (const MeasurementResult& v : victor) {
    victor_probs.push_back(v.probability);
    std::vector<double> dz, dx;
    double cz = 0.0, cx = 0.0;
    const std::vector<MeasurementResult> mz = measure(v.post_state, {"p1", "p4"}, basis_zz);
    const std::vector<MeasurementResult> mx = measure(v.post_state, {"p1", "p4"}, basis_xx);
    for (int k = 0; k < 4; ++k) {
      dz.push_back(mz[k].probability);
      dx.push_back(mx[k].probability);
      cz += sign[k] * mz[k].probability;
      cx += sign[k] * mx[k].probability;
    }
    dist_z.push_back(std::move(dz));
    dist_x.push_back(std::move(dx));
    rep.add_scalar("p_" + v.outcome_label, v.probability);
    rep.add_scalar("corr_z_" + v.outcome_label, cz);
    rep.add_scalar("corr_x_" + v.outcome_label, cx);
    const DensityOperator rho_a = partial_trace(v.post_state, {"p1"});
    for (std::size_t i = 0; i < 4; ++i)
      alice_marginal.a[i] += v.probability * rho_a.matrix().a[i];
  }
  CMatrix half_identity = CMatrix::identity(2);
  for (cplx& z : half_identity.a) z *= 0.5;
  rep.add_scalar("alice_marginal_dev", max_abs_diff(alice_marginal, half_identity));

  // seeded sampling of the same distributions
  SplitMix64 rng(seed);
  std::vector<int> count(4, 0);
  std::vector<double> sum_z(4, 0.0), sum_x(4, 0.0);
  const auto draw = [&](const std::vector<double>& dist) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      acc += dist[k];
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(dist.size() - 1);
  };
  for (int s = 0; s < shots; ++s) {
    const int o = draw(victor_probs);
    ++count[o];
    sum_z[o] += sign[draw(dist_z[o])];
    sum_x[o] += sign[draw(dist_x[o])];
  }
  for (int o = 0; o < 4; ++o) {
    rep.add_scalar("shots_" + victor_labels[o], count[o]);
    rep.add_scalar("sampled_corr_z_" + victor_labels[o],
                   count[o] > 0 ? sum_z[o] / count[o] : 0.0);
    rep.add_scalar("sampled_corr_x_" + victor_labels[o],
                   count[o] > 0 ? sum_x[o] / count[o] : 0.0);
  }
  return rep;
}

// ---- complementarity trade-off ---------------------------------------------------

struct TradeoffResult {
  double initial_interference_coeff = 0.0;
  double final_interference_coeff = 0.0;
  double correlation_measure = 0.0;   // of the final state
  double correlation_initial = 0.0;
  double map_fidelity = 0.0;          // fidelity(U|i>, |f>)
  Operator constructed_unitary;
};

// Normalized weight of the Re(<a|L><a|R>) cross term in the probability
// expansion of a (marker x L/R-mode) state; scale invariant.
inline double interference_coefficient(const StateVector& state) {
  if (state.layout().size() != 2 || state.layout().at(1).dim != 2)
    throw contract_error("interference_coefficient: expected marker x two-mode layout");
  const std::size_t md = state.layout().at(0).dim;
  double w_mode[2] = {0.0, 0.0};
  double w_int = 0.0;
  for (std::size_t m = 0; m < md; ++m) {
    const cplx cl = state.amplitude(2 * m);
    const cplx cr = state.amplitude(2 * m + 1);
    w_mode[0] += std::norm(cl);
    w_mode[1] += std::norm(cr);
    w_int += 2.0 * (cl * std::conj(cr)).real();
  }
  const double total = w_mode[0] + w_mode[1] + w_int;
  if (total <= 0.0) throw contract_error("interference_coefficient: vanishing expansion");
  return w_int / total;
}

// 2 (1 - max eigenvalue of the state reduced to its first subsystem); a
// mixedness score in [0, 1], zero for products, one at maximal entanglement.
inline double correlation_measure(const StateVector& state) {
  const DensityOperator reduced =
      partial_trace(state, {state.layout().at(0).label});
  double m = 2.0 * (1.0 - max_eigenvalue_psd(reduced.matrix()));
  if (m < 0.0) m = 0.0;
  if (m > 1.0) m = 1.0;
  return m;
}

inline TradeoffResult complementarity_tradeoff() {
  SystemLayout lay({Subsystem("detector", {"0", "1"}), Subsystem("mode", {"L", "R"})});
  // unnormalized integer amplitudes keep the expansion weights exact
  const StateVector initial(lay, {cplx(2.0), cplx(1.0), cplx(2.0), cplx(1.0)}, false);
  const double inv = 1.0 / (5.0 * std::sqrt(2.0));
  const StateVector final_state(
      lay, {cplx(5.0 * inv), cplx(0.0), cplx(3.0 * inv), cplx(4.0 * inv)}, true);

  Operator u = catalog::tradeoff_unitary();
  if (!u.is_unitary(1e-12))
    throw invariant_error("complementarity_tradeoff: constructed matrix fails is_unitary");

  TradeoffResult r{interference_coefficient(initial),
                   interference_coefficient(final_state),
                   correlation_measure(final_state),
                   correlation_measure(initial.normalized_copy()),
                   fidelity(apply(u, initial.normalized_copy(), {"detector", "mode"}),
                            final_state),
                   std::move(u)};
  return r;
}

struct TradeoffFamilyPoint {
  double overlap = 0.0;
  double interference_coeff = 0.0;
  double correlation = 0.0;
};

// One-parameter family with marker-mode overlap <psi1|psi2> = s via the
// symmetric pair psi1 = (cos a, sin a), psi2 = (sin a, cos a), sin 2a = s.
inline TradeoffFamilyPoint complementarity_family(double overlap) {
  if (overlap < 0.0 || overlap > 1.0)
    throw contract_error("complementarity_family: overlap must lie in [0, 1]");
  SystemLayout lay({Subsystem("detector", {"0", "1"}), Subsystem("mode", {"L", "R"})});
  const double a = 0.5 * std::asin(overlap);
  const double inv = 1.0 / std::sqrt(2.0);
  const StateVector f(lay,
                      {cplx(inv * std::cos(a)), cplx(inv * std::sin(a)),
                       cplx(inv * std::sin(a)), cplx(inv * std::cos(a))},
                      true);
  return TradeoffFamilyPoint{overlap, interference_coefficient(f), correlation_measure(f)};
}

// ---- brainwash round trips ---------------------------------------------------------

enum class BrainwashVariant { inverse, alt_unitary, beamsplitter_double_pass, switching_unit };

inline ExperimentReport brainwash_roundtrip(BrainwashVariant variant) {
  ExperimentReport rep;
  rep.experiment = "brainwash";
  const auto require_unitary = [](const Operator& op, const std::string& name) {
    if (!op.is_unitary(1e-12))
      throw invariant_error("brainwash_roundtrip: " + name + " fails is_unitary");
  };

  switch (variant) {
    case BrainwashVariant::inverse: {
      rep.add_setting("variant", "inverse");
      const Operator u = catalog::marking_unitary("alice", "car");
      require_unitary(u, "observation unitary");
      const SystemLayout& lay = u.layout();
      const StateVector initial =
          (StateVector::basis(lay, {"0", "u"}) + StateVector::basis(lay, {"0", "d"}))
              .normalized_copy();
      StateVector observed = apply(u, initial, {"alice", "car"});
      StateVector erased = apply(u.dagger(), observed, {"alice", "car"});
      rep.add_scalar("fidelity", fidelity(erased, initial));
      break;
    }
    case BrainwashVariant::alt_unitary: {
      rep.add_setting("variant", "alt_unitary");
      const Operator v = catalog::alt_observation_unitary();
      require_unitary(v, "alternative observation unitary");
      const SystemLayout& lay = v.layout();
      const StateVector initial =
          (StateVector::basis(lay, {"0", "L"}) + StateVector::basis(lay, {"0", "R"}))
              .normalized_copy();
      const StateVector target =
          (StateVector::basis(lay, {"0", "L"}) + StateVector::basis(lay, {"1", "R"}))
              .normalized_copy();
      StateVector observed = apply(v, initial, {"alice", "car"});
      rep.add_scalar("observation_fidelity", fidelity(observed, target));
      StateVector erased = apply(v.dagger(), observed, {"alice", "car"});
      rep.add_scalar("fidelity", fidelity(erased, initial));
      break;
    }
    case BrainwashVariant::beamsplitter_double_pass: {
      rep.add_setting("variant", "beamsplitter_double_pass");
      const Operator bs = beam_splitter();
      require_unitary(bs, "beam splitter");
      rep.add_scalar("self_inverse_dev",
                     max_abs_diff((bs * bs).matrix(), CMatrix::identity(2)));
      const StateVector initial = StateVector::basis(bs.layout(), {"u"});
      StateVector once = apply(bs, initial, {"path"});
      StateVector twice = apply(bs, once, {"path"});
      rep.add_scalar("fidelity", fidelity(twice, initial));
      break;
    }
    case BrainwashVariant::switching_unit: {
      rep.add_setting("variant", "switching_unit");
      const Operator u1 = catalog::switching_u1();
      const Operator u2 = catalog::switching_u2();
      const Operator u3 = catalog::switching_u3();
      require_unitary(u1, "switching step 1");
      require_unitary(u2, "switching step 2");
      require_unitary(u3, "switching step 3");
      SystemLayout lay({Subsystem("alice", {"0", "1", "2"}), Subsystem("car", {"L", "R"}),
                        Subsystem("switch", {"u", "d"})});
      const auto b = [&](const char* a, const char* c, const char* s) {
        return StateVector::basis(lay, {a, c, s});
      };
      const StateVector initial = (b("0", "L", "u") + b("0", "L", "d") + b("0", "R", "u") +
                                   b("0", "R", "d"))
                                      .normalized_copy();
      StateVector step1 = apply(u1, initial, {"alice", "car"});
      const StateVector want1 =
          (b("1", "L", "u") + b("1", "L", "d") + b("2", "R", "u") + b("2", "R", "d"))
              .normalized_copy();
      rep.add_scalar("step1_fidelity", fidelity(step1, want1));
      StateVector step2 = apply(u2, step1, {"alice", "switch"});
      const StateVector want2 = (b("0", "L", "u") + b("0", "R", "d")).normalized_copy();
      rep.add_scalar("step2_fidelity", fidelity(step2, want2));
      StateVector step3 = apply(u3, step2, {"car", "switch"});
      rep.add_scalar("fidelity", fidelity(step3, initial));
      break;
    }
  }
  return rep;
}

}  // namespace qeraser
