// acceptance.cpp
// End-to-end acceptance suite. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
// Usage: acceptance [scenario-dir]   (the directory is needed for the
// determinism criterion; defaults to ../scenarios relative to the cwd).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qeraser/qeraser.hpp"

using namespace qeraser;

namespace {

int g_failures = 0;

struct Criterion {
  std::string label;
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void expect_close(double actual, double want, double tolerance, const std::string& what) {
    if (!(std::abs(actual - want) <= tolerance)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s (got %.15g, want %.15g +- %.3g)", what.c_str(), actual,
                    want, tolerance);
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string(buf);
    }
  }
  void finish() const {
    if (ok) {
      std::printf("PASS  %s\n", label.c_str());
    } else {
      std::printf("FAIL  %s: %s\n", label.c_str(), detail.c_str());
      ++g_failures;
    }
  }
};

std::vector<double> herzog_grid() {
  std::vector<double> g(201);
  for (int i = 0; i < 201; ++i) g[i] = -kPi + 2.0 * kPi * i / 200;
  return g;
}

void criterion1_tradeoff() {
  Criterion c{"criterion 1: trade-off exactness (4/9, 12/37, U maps |i> to |f>)", true, ""};
  const TradeoffResult r = complementarity_tradeoff();
  c.expect_close(r.initial_interference_coeff, 4.0 / 9.0, 1e-12, "initial coefficient");
  c.expect_close(r.final_interference_coeff, 12.0 / 37.0, 1e-12, "final coefficient");
  c.expect(r.map_fidelity >= 1.0 - 1e-10, "map fidelity below 1 - 1e-10");
  c.finish();
}

void criterion2_eraser_visibilities() {
  Criterion c{"criterion 2: eraser visibilities (double slit and coincidence)", true, ""};
  const ExperimentReport plain = run_double_slit_eraser(std::nullopt, EraserKind::none);
  c.expect_close(plain.scalar("visibility"), 1.0, 0.01, "unmarked visibility");
  const ExperimentReport marked = run_double_slit_eraser(kPi / 2.0, EraserKind::none);
  c.expect(marked.scalar("visibility") <= 0.01, "marked visibility above 0.01");
  const ExperimentReport pol =
      run_double_slit_eraser(kPi / 2.0, EraserKind::polarizer_filter, kPi / 4.0);
  c.expect_close(pol.scalar("visibility"), 1.0, 0.01, "polarizer-erased visibility");
  c.expect_close(pol.scalar("survival"), 0.5, 1e-10, "polarizer survival");
  for (EraserKind kind : {EraserKind::hwp_upper, EraserKind::hwp_lower, EraserKind::qwp_pair}) {
    const ExperimentReport rep = run_double_slit_eraser(kPi / 2.0, kind);
    c.expect_close(rep.scalar("visibility"), 1.0, 0.01, "unitary-eraser visibility");
    c.expect_close(rep.scalar("survival"), 1.0, 1e-10, "unitary-eraser survival");
  }
  const ExperimentReport h1 = run_herzog(false, false, herzog_grid());
  const ExperimentReport h2 = run_herzog(true, false, herzog_grid());
  const ExperimentReport h3 = run_herzog(true, true, herzog_grid());
  c.expect_close(h1.scalar("visibility"), 1.0, 1e-9, "coincidence visibility, no qwp");
  c.expect_close(h2.scalar("visibility"), 0.0, 1e-9, "coincidence visibility, qwp");
  c.expect_close(h3.scalar("visibility"), 1.0, 1e-9, "coincidence visibility, qwp+filter");
  c.expect_close(h3.scalar("survival"), 0.5, 1e-10, "filtered survival");
  c.finish();
}

void criterion3_wave_particle_transition() {
  Criterion c{"criterion 3: visibility(theta) = |cos theta| at the seven angles", true, ""};
  for (int deg : {0, 15, 30, 45, 60, 75, 90}) {
    const double theta = deg * kPi / 180.0;
    const ExperimentReport rep = run_double_slit_eraser(theta, EraserKind::none);
    c.expect_close(rep.scalar("visibility"), std::abs(std::cos(theta)), 0.01,
                   "visibility at " + std::to_string(deg) + " degrees");
  }
  c.finish();
}

void criterion4_no_communication() {
  Criterion c{"criterion 4: no-communication over 1000 seeded B-confined operations", true, ""};
  const NoCommSweepResult sweep = run_nocomm_sweep(42, 1000);
  c.expect(sweep.cases == 1000, "sweep did not run 1000 cases");
  c.expect(sweep.max_deviation <= 1e-10,
           "max deviation " + std::to_string(sweep.max_deviation) + " above 1e-10");

  SystemLayout lay({Subsystem("A", {"0", "1"}), Subsystem("B", {"0", "1"})});
  const StateVector bell =
      (StateVector::basis(lay, {"0", "0"}) + StateVector::basis(lay, {"1", "1"}))
          .normalized_copy();
  CMatrix cnot(4);
  cnot.at(0, 0) = 1.0;
  cnot.at(3, 1) = 1.0;
  cnot.at(2, 2) = 1.0;
  cnot.at(1, 3) = 1.0;
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix hb(4);
  hb.at(0, 0) = h;
  hb.at(0, 1) = h;
  hb.at(1, 0) = h;
  hb.at(1, 1) = -h;
  hb.at(2, 2) = h;
  hb.at(2, 3) = h;
  hb.at(3, 2) = h;
  hb.at(3, 3) = -h;
  const double dev = negative_control(bell, Operator(lay, hb * cnot), {"A"});
  c.expect(dev > 0.1, "negative control deviation " + std::to_string(dev) + " not above 0.1");
  c.finish();
}

void criterion5_free_will_no_signalling() {
  Criterion c{"criterion 5: free-will pattern sums equal, D1/D2 anti-phase", true, ""};
  const ExperimentReport push = run_free_will(FreeWillChoice::push);
  const ExperimentReport erased = run_free_will(FreeWillChoice::not_push);
  const ScreenPattern& a = push.pattern("sum");
  const ScreenPattern& b = erased.pattern("sum");
  double max_dev = 0.0;
  for (std::size_t i = 0; i < a.intensity.size(); ++i)
    max_dev = std::max(max_dev, std::abs(a.intensity[i] - b.intensity[i]));
  c.expect(max_dev <= 1e-10,
           "pointwise sum deviation " + std::to_string(max_dev) + " above 1e-10");
  c.expect(erased.scalar("d1_d2_crosscorr") < 0.0, "D1/D2 cross-correlation not negative");
  c.finish();
}

void criterion6_entanglement_swapping() {
  Criterion c{"criterion 6: swapping correlators, sampling bounds, Alice's marginal", true, ""};
  const int shots = 10000;
  const double bound = 3.0 / std::sqrt(double(shots));
  const ExperimentReport bell = run_entanglement_swapping(VictorChoice::bell, 2, shots);
  for (const std::string o : {"phi_plus", "phi_minus", "psi_plus", "psi_minus"}) {
    c.expect_close(std::abs(bell.scalar("corr_x_" + o)), 1.0, 1e-12, "bell |corr_x| " + o);
    c.expect_close(bell.scalar("sampled_corr_x_" + o), bell.scalar("corr_x_" + o), bound,
                   "bell sampled corr_x " + o);
  }
  const ExperimentReport sep = run_entanglement_swapping(VictorChoice::separable, 2, shots);
  for (const std::string o : {"HH", "HV", "VH", "VV"}) {
    c.expect_close(sep.scalar("corr_x_" + o), 0.0, 1e-12, "separable corr_x " + o);
    c.expect_close(sep.scalar("sampled_corr_x_" + o), 0.0, bound, "separable sampled " + o);
  }
  c.expect(bell.scalar("alice_marginal_dev") <= 1e-12, "bell-branch marginal moved");
  c.expect(sep.scalar("alice_marginal_dev") <= 1e-12, "separable-branch marginal moved");
  // both marginals sit on I/2, so their mutual distance is bounded by the sum
  c.expect(bell.scalar("alice_marginal_dev") + sep.scalar("alice_marginal_dev") <= 1e-12,
           "marginals differ across Victor's choices");
  c.finish();
}

void criterion7_temporal_closed_forms() {
  Criterion c{"criterion 7: temporal densities, conditionals and the cat asymptotic", true, ""};
  const EvolvingState decay = decay_state(1.0);
  c.expect_close(detection_density(decay, 1.0) / std::exp(-1.0), 1.0, 1e-6, "decay density");
  c.expect_close(conditional_density(decay, 1.4, 0.6) / std::exp(-0.8), 1.0, 1e-6,
                 "decay conditional");

  const EvolvingState cat = cat_state();
  c.expect_close(detection_density(cat, kPi / 4.0) / 0.5, 1.0, 1e-6, "cat density");
  c.expect_close(conditional_density(cat, 1.1, 0.4) / (std::sin(2.2) / (1.0 + std::cos(0.8))),
                 1.0, 1e-6, "cat conditional");

  const EvolvingState zeno = passive_zeno_state(2.0);
  c.expect_close(detection_density(zeno, 1.2) / 0.25, 1.0, 1e-6, "zeno density");
  c.expect_close(conditional_density(zeno, 1.5, 0.5) / (1.0 / 3.5), 1.0, 1e-6,
                 "zeno conditional");

  const double t0 = kPi / 2.0 - 1e-2;
  const NextIntervalProbability nip = next_interval_probability(cat, t0, 1e-3);
  const double deficit = std::abs(nip.first_order - nip.exact);
  c.expect(std::abs(deficit - nip.end_asymptotic) <= 0.05 * nip.end_asymptotic,
           "cat asymptotic mismatch beyond 5%");
  c.finish();
}

void criterion8_brainwash_and_catalog() {
  Criterion c{"criterion 8: round trips, catalog unitarity, time-ordering invariance", true, ""};
  for (BrainwashVariant v :
       {BrainwashVariant::inverse, BrainwashVariant::alt_unitary,
        BrainwashVariant::beamsplitter_double_pass, BrainwashVariant::switching_unit}) {
    const ExperimentReport rep = brainwash_roundtrip(v);
    c.expect_close(rep.scalar("fidelity"), 1.0, 1e-12, "round-trip fidelity");
  }
  c.expect(catalog::marking_unitary().is_unitary(1e-12), "marking unitary");
  c.expect(catalog::alt_observation_unitary().is_unitary(1e-12), "alternative observation");
  c.expect(catalog::tradeoff_p1().is_unitary(1e-12), "trade-off frame P1");
  c.expect(catalog::tradeoff_p2().is_unitary(1e-12), "trade-off frame P2");
  c.expect(catalog::tradeoff_unitary().is_unitary(1e-12), "trade-off unitary");
  c.expect(catalog::switching_u1().is_unitary(1e-12), "switching step 1");
  c.expect(catalog::switching_u2().is_unitary(1e-12), "switching step 2");
  c.expect(catalog::switching_u3().is_unitary(1e-12), "switching step 3");
  for (double t : {0.0, 0.3, 1.0, 5.0}) {
    c.expect(catalog::decay_evolution(1.0, t).is_unitary(1e-12), "decay evolution matrix");
    c.expect(catalog::cat_evolution(t).is_unitary(1e-12), "cat evolution matrix");
  }

  SplitMix64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemLayout lay({Subsystem("a", 2), Subsystem("b", 2), Subsystem("c", 2)});
    std::vector<cplx> amps(lay.total_dim());
    for (cplx& z : amps) z = rng.next_complex_normal();
    const StateVector psi = StateVector(lay, std::move(amps), false).normalized_copy();
    std::vector<cplx> va(2), vb(2);
    for (cplx& z : va) z = rng.next_complex_normal();
    for (cplx& z : vb) z = rng.next_complex_normal();
    const LocalProjector pa{
        projector_onto(StateVector(SystemLayout({Subsystem("a", 2)}), va, false)), {"a"}};
    const LocalProjector pb{
        projector_onto(StateVector(SystemLayout({Subsystem("b", 2)}), vb, false)), {"b"}};
    const std::vector<double> energies = {rng.next_double(), rng.next_double(),
                                          rng.next_double()};
    const double dev = time_ordering_invariance(
        psi, energies, pa, pb, {4.0 * rng.next_double(), 4.0 * rng.next_double()},
        {4.0 * rng.next_double(), 4.0 * rng.next_double()});
    c.expect(dev <= 1e-12, "time-ordering deviation above 1e-12");
  }
  c.finish();
}

void criterion9_histories() {
  Criterion c{"criterion 9: two-slit histories inconsistent unmarked, consistent marked", true, ""};
  const TwoSlitHistories unmarked = two_slit_histories(false);
  const ConsistencyReport u =
      consistency_matrix(unmarked.path_then_screen, unmarked.rho, 1e-10, unmarked.propagation);
  double max_off = 0.0;
  for (std::size_t i = 0; i < u.count; ++i)
    for (std::size_t j = 0; j < u.count; ++j)
      if (i != j) max_off = std::max(max_off, std::abs(u.matrix.at(i, j)));
  c.expect(max_off > 0.1, "unmarked family off-diagonal not above 0.1");
  c.expect(!u.consistent, "unmarked family wrongly consistent");

  const TwoSlitHistories marked = two_slit_histories(true);
  const ConsistencyReport screen =
      consistency_matrix(marked.path_then_screen, marked.rho, 1e-10, marked.propagation);
  double moff = 0.0;
  for (std::size_t i = 0; i < screen.count; ++i)
    for (std::size_t j = 0; j < screen.count; ++j)
      if (i != j) moff = std::max(moff, std::abs(screen.matrix.at(i, j)));
  c.expect(moff <= 1e-12, "marked screen family off-diagonal above 1e-12");

  const ConsistencyReport record =
      consistency_matrix(marked.path_then_record, marked.rho, 1e-10, marked.propagation);
  double roff = 0.0;
  for (std::size_t i = 0; i < record.count; ++i)
    for (std::size_t j = 0; j < record.count; ++j)
      if (i != j) roff = std::max(roff, std::abs(record.matrix.at(i, j)));
  c.expect(roff <= 1e-12, "marked record family off-diagonal above 1e-12");
  c.expect_close(record.probabilities[0], 0.5, 1e-12, "record family p0");
  c.expect_close(record.probabilities[1], 0.5, 1e-12, "record family p1");

  // exhaustive families tested: record family and a random orthogonal one
  c.expect_close(record.probabilities[0] + record.probabilities[1], 1.0, 1e-10,
                 "record family total probability");
  SplitMix64 rng(55);
  const SystemLayout lay({Subsystem("s", 3)});
  std::vector<cplx> amps(3);
  for (cplx& z : amps) z = rng.next_complex_normal();
  const StateVector psi = StateVector(lay, std::move(amps), false).normalized_copy();
  const CMatrix frame = random_unitary(3, rng);
  std::vector<History> family;
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<cplx> v(3);
    for (std::size_t r = 0; r < 3; ++r) v[r] = frame.at(r, col);
    family.push_back(
        History{{HistoryStep{0.0, projector_onto(StateVector(lay, std::move(v), true))}}});
  }
  const ConsistencyReport rnd = consistency_matrix(family, DensityOperator::from_state(psi));
  double total = 0.0;
  for (double p : rnd.probabilities) total += p;
  c.expect(rnd.consistent, "orthogonal single-time family not consistent");
  c.expect_close(total, 1.0, 1e-10, "orthogonal family total probability");
  c.finish();
}

void criterion10_determinism(const std::string& scenario_dir) {
  Criterion c{"criterion 10: byte-identical outputs across repeated corpus runs", true, ""};
  namespace fs = std::filesystem;
  if (!fs::exists(scenario_dir)) {
    c.expect(false, "scenario directory '" + scenario_dir + "' not found");
    c.finish();
    return;
  }
  int count = 0;
  for (const auto& entry : fs::directory_iterator(scenario_dir)) {
    if (entry.path().extension() != ".scn") continue;
    ++count;
    std::ifstream in(entry.path());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Scenario sc;
    try {
      sc = parse_scenario(buffer.str());
    } catch (const scenario_error& e) {
      c.expect(false, entry.path().filename().string() + " failed to parse: " + e.what());
      continue;
    }
    const auto run_once = [&]() {
      std::ostringstream out;
      EmitTargets targets;
      targets.summary = &out;
      targets.ascii = true;
      targets.prefix = sc.prefix;
      emit(run(sc), targets);
      return out.str();
    };
    try {
      if (run_once() != run_once())
        c.expect(false, entry.path().filename().string() + " not deterministic");
    } catch (const std::exception& e) {
      c.expect(false, entry.path().filename().string() + " threw: " + e.what());
    }
  }
  c.expect(count >= 25, "corpus unexpectedly small");
  c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string scenario_dir = argc > 1 ? argv[1] : "../scenarios";
  criterion1_tradeoff();
  criterion2_eraser_visibilities();
  criterion3_wave_particle_transition();
  criterion4_no_communication();
  criterion5_free_will_no_signalling();
  criterion6_entanglement_swapping();
  criterion7_temporal_closed_forms();
  criterion8_brainwash_and_catalog();
  criterion9_histories();
  criterion10_determinism(scenario_dir);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
