// nocomm.hpp
// Mechanized no-communication theorem: Alice's reduced density operator is
// invariant under any operation confined to Bob's side. Measurements are
// modeled exclusively as dilated unitaries (ancilla + unitary + trace), and
// a negative control shows the tensor-product hypothesis is necessary.

#pragma once

#include <string>
#include <vector>

#include "qeraser/hilbert.hpp"
#include "qeraser/linalg.hpp"
#include "qeraser/random.hpp"

namespace qeraser {

enum class BobOperationKind { unitary_on_b, dilated_measurement };

struct BobOperation {
  BobOperationKind kind = BobOperationKind::unitary_on_b;
  Operator op;                             // acts on b_labels (+ ancillas, appended last)
  std::vector<std::string> b_labels;       // Bob's subsystems within the joint state
  std::vector<std::size_t> ancilla_dims;   // empty for unitary_on_b

  void validate() const {
    if (b_labels.empty()) throw contract_error("BobOperation: empty B label set");
    if (!op.is_unitary()) throw contract_error("BobOperation: operator fails is_unitary");
    if (kind == BobOperationKind::unitary_on_b && !ancilla_dims.empty())
      throw contract_error("BobOperation: plain unitaries take no ancillas");
    if (kind == BobOperationKind::dilated_measurement && ancilla_dims.empty())
      throw contract_error("BobOperation: dilated measurements need at least one ancilla");
  }
};

namespace detail {

inline std::vector<std::string> complement_labels(const SystemLayout& layout,
                                                  const std::vector<std::string>& minus) {
  std::vector<std::string> out;
  for (const Subsystem& s : layout.subsystems()) {
    bool removed = false;
    for (const std::string& m : minus)
      if (m == s.label) removed = true;
    if (!removed) out.push_back(s.label);
  }
  return out;
}

}  // namespace detail

// Alice's density operator after Bob's decision: attach the operation's
// ancillas (each starting in its first basis level), apply the operator on
// Bob's side, trace out everything that is not Alice's. The operation must
// not touch any A label; that is the theorem's hypothesis. When
// `expected_a_labels` is given, B is checked against that split explicitly.
inline DensityOperator reduced_after(const StateVector& state, const BobOperation& bob,
                                     const std::vector<std::string>& expected_a_labels = {}) {
  bob.validate();
  for (const std::string& b : bob.b_labels)
    state.layout().position_of(b);  // throws on unknown label
  for (const std::string& a : expected_a_labels)
    for (const std::string& b : bob.b_labels)
      if (a == b)
        throw contract_error("reduced_after: operation touches Alice's subsystem '" + a +
                             "'; the systems are no longer interacting");
  const std::vector<std::string> a_labels =
      detail::complement_labels(state.layout(), bob.b_labels);
  if (a_labels.empty())
    throw contract_error("reduced_after: operation consumes the whole system, no A side left");

  StateVector joint = state.normalized() ? state : state.normalized_copy();
  std::vector<std::string> op_targets = bob.b_labels;
  for (std::size_t k = 0; k < bob.ancilla_dims.size(); ++k) {
    const std::string label = "_ancilla" + std::to_string(k);
    SystemLayout anc_layout({Subsystem(label, bob.ancilla_dims[k])});
    std::vector<cplx> ground(bob.ancilla_dims[k], cplx(0.0, 0.0));
    ground[0] = 1.0;
    joint = tensor(joint, StateVector(anc_layout, std::move(ground), true));
    op_targets.push_back(label);
  }

  std::size_t target_dim = 1;
  for (const std::string& t : op_targets)
    target_dim *= joint.layout().at(joint.layout().position_of(t)).dim;
  if (target_dim != bob.op.dim())
    throw contract_error("reduced_after: operator dimension does not match B plus ancillas");

  const StateVector after = apply(bob.op, joint, op_targets);
  return partial_trace(after, a_labels);
}

// max over the operations of || reduced_after(state, op) - Tr_B(rho) ||_max
inline double verify_no_communication(const StateVector& state,
                                      const std::vector<BobOperation>& ops) {
  double worst = 0.0;
  for (const BobOperation& bob : ops) {
    const std::vector<std::string> a_labels =
        detail::complement_labels(state.layout(), bob.b_labels);
    if (a_labels.empty())
      throw contract_error("verify_no_communication: no A side left");
    const DensityOperator baseline = partial_trace(state, a_labels);
    const DensityOperator after = reduced_after(state, bob);
    worst = std::max(worst, max_abs_diff(after.matrix(), baseline.matrix()));
  }
  return worst;
}

// || rho_A before - rho_A after || for an arbitrary global unitary; strictly
// positive for generic entangling operations, which is what fails when the
// tensor-product hypothesis is dropped.
inline double negative_control(const StateVector& state, const Operator& global_op,
                               const std::vector<std::string>& a_labels) {
  if (!global_op.is_unitary())
    throw contract_error("negative_control: operator fails is_unitary");
  if (global_op.dim() != state.dim())
    throw contract_error("negative_control: operator must act on the whole system");
  const StateVector before = state.normalized() ? state : state.normalized_copy();
  const StateVector after = apply(global_op, before, all_labels(before.layout()));
  return max_abs_diff(partial_trace(before, a_labels).matrix(),
                      partial_trace(after, a_labels).matrix());
}

// ---- seeded sweep -----------------------------------------------------------

struct NoCommSweepResult {
  int cases = 0;
  double max_deviation = 0.0;
};

// Generalized-shift record interaction |b, a> -> |b, (a+b) mod d> on
// B x ancilla of equal dimension d; the dilation core of a measurement.
inline Operator record_shift_unitary(std::size_t d) {
  SystemLayout lay({Subsystem("b", d), Subsystem("anc", d)});
  CMatrix m(d * d);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t a = 0; a < d; ++a) m.at(b * d + ((a + b) % d), b * d + a) = 1.0;
  return Operator(lay, m);
}

// Randomized property sweep over B-confined operations: plain unitaries,
// dilated measurements with one and two ancillas, and the interleaved
// product time evolution U_A (x) U_B followed by Bob's unitary. Returns the
// worst reduced-state deviation seen.
inline NoCommSweepResult run_nocomm_sweep(std::uint64_t seed, int cases) {
  if (cases < 1) throw contract_error("run_nocomm_sweep: need at least one case");
  NoCommSweepResult result;
  result.cases = cases;
  SplitMix64 root(seed);
  for (int c = 0; c < cases; ++c) {
    SplitMix64 rng = root.split(static_cast<std::uint64_t>(c));
    const std::size_t da = 2 + rng.next_below(2);  // 2..3
    const std::size_t db = 2 + rng.next_below(2);
    SystemLayout lay({Subsystem("A", da), Subsystem("B", db)});
    std::vector<cplx> amps(lay.total_dim());
    for (cplx& z : amps) z = rng.next_complex_normal();
    StateVector psi = StateVector(lay, std::move(amps), false).normalized_copy();

    const auto make_op = [&]() -> BobOperation {
      switch (c % 4) {
        case 0:
          return BobOperation{BobOperationKind::unitary_on_b,
                              Operator(SystemLayout({Subsystem("B", db)}),
                                       random_unitary(db, rng)),
                              {"B"},
                              {}};
        case 1: {
          // one ancilla: record shift, then a random unitary on B alone
          CMatrix shift = record_shift_unitary(db).matrix();
          CMatrix ub = random_unitary(db, rng);
          CMatrix ub_full(db * db);
          for (std::size_t r = 0; r < db; ++r)
            for (std::size_t cc = 0; cc < db; ++cc)
              for (std::size_t a = 0; a < db; ++a)
                ub_full.at(r * db + a, cc * db + a) = ub.at(r, cc);
          return BobOperation{BobOperationKind::dilated_measurement,
                              Operator(SystemLayout({Subsystem("B", db), Subsystem("anc", db)}),
                                       ub_full * shift),
                              {"B"},
                              {db}};
        }
        case 2: {
          // two ancillas: record into both, then a random unitary on B x anc1
          SystemLayout ext({Subsystem("B", db), Subsystem("anc1", db), Subsystem("anc2", db)});
          Operator lift1 = lift(record_shift_unitary(db), {"B", "anc1"}, ext);
          Operator lift2 = lift(record_shift_unitary(db), {"B", "anc2"}, ext);
          Operator mix = lift(Operator(SystemLayout({Subsystem("B", db), Subsystem("anc1", db)}),
                                       random_unitary(db * db, rng)),
                              {"B", "anc1"}, ext);
          return BobOperation{BobOperationKind::dilated_measurement,
                              Operator(ext, mix.matrix() * lift2.matrix() * lift1.matrix()),
                              {"B"},
                              {db, db}};
        }
        default: {
          // interleaved product evolution, then Bob's unitary
          Operator ua(SystemLayout({Subsystem("A", da)}), random_unitary(da, rng));
          Operator ub(SystemLayout({Subsystem("B", db)}), random_unitary(db, rng));
          psi = apply(ua, psi, {"A"});
          psi = apply(ub, psi, {"B"});
          return BobOperation{BobOperationKind::unitary_on_b,
                              Operator(SystemLayout({Subsystem("B", db)}),
                                       random_unitary(db, rng)),
                              {"B"},
                              {}};
        }
      }
    };
    const double dev = verify_no_communication(psi, {make_op()});
    result.max_deviation = std::max(result.max_deviation, dev);
  }
  return result;
}

}  // namespace qeraser
