// catalog.hpp
// Built-in catalog of the fixed unitaries used by the experiments: the
// which-path marking interaction, the trade-off construction U = P2 P1^T,
// the three-step memory switching unit, and the time-dependent decay and
// cat-observation evolutions. Every entry is checkable with is_unitary.

#pragma once

#include <cmath>

#include "qeraser/hilbert.hpp"

namespace qeraser {
namespace catalog {

// Records which path the system took into a two-level marker:
// |0>(|u>+|d>) -> |0>|u> + |1>|d>. Basis {0u, 0d, 1u, 1d}.
inline Operator marking_unitary(const std::string& marker_label = "marker",
                                const std::string& system_label = "path") {
  SystemLayout lay({Subsystem(marker_label, {"0", "1"}), Subsystem(system_label, {"u", "d"})});
  CMatrix m(4);
  m.at(0, 0) = 1.0;
  m.at(1, 3) = 1.0;
  m.at(2, 2) = 1.0;
  m.at(3, 1) = 1.0;
  return Operator(lay, m);
}

// A second observation unitary achieving the same record, not a permutation.
// Basis {0L, 0R, 1L, 1R}.
inline Operator alt_observation_unitary() {
  SystemLayout lay({Subsystem("alice", {"0", "1"}), Subsystem("car", {"L", "R"})});
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(4);
  m.at(0, 1) = 1.0;
  m.at(1, 2) = s;
  m.at(1, 3) = s;
  m.at(2, 2) = s;
  m.at(2, 3) = -s;
  m.at(3, 0) = 1.0;
  return Operator(lay, m);
}

// Orthogonal frame whose first column is the trade-off initial state
// (2,1,2,1)/sqrt(10) in basis {0L, 0R, 1L, 1R}.
inline Operator tradeoff_p1() {
  SystemLayout lay({Subsystem("detector", {"0", "1"}), Subsystem("mode", {"L", "R"})});
  const double r25 = std::sqrt(2.0 / 5.0);
  const double r10 = 1.0 / std::sqrt(10.0);
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix m(4, {cplx(r25), cplx(h),    cplx(0.0),  cplx(-r10),
                cplx(r10), cplx(0.0),  cplx(h),    cplx(r25),
                cplx(r25), cplx(-h),   cplx(0.0),  cplx(-r10),
                cplx(r10), cplx(0.0),  cplx(-h),   cplx(r25)});
  return Operator(lay, m);
}

// Orthogonal frame whose first column is the trade-off final state
// (5,0,3,4)/(5 sqrt 2). The third column is the normalized completion
// (3, 0, -5, 0)/sqrt(34) of the frame.
inline Operator tradeoff_p2() {
  SystemLayout lay({Subsystem("detector", {"0", "1"}), Subsystem("mode", {"L", "R"})});
  const double h = 1.0 / std::sqrt(2.0);
  const double a = 3.0 / (5.0 * std::sqrt(2.0));
  const double b = 2.0 * std::sqrt(2.0) / 5.0;
  const double c3a = 3.0 / std::sqrt(34.0);
  const double c3b = -5.0 / std::sqrt(34.0);
  const double d1 = 2.0 / std::sqrt(17.0);
  const double d3 = 6.0 / (5.0 * std::sqrt(17.0));
  const double d4 = -std::sqrt(17.0) / 5.0;
  CMatrix m(4, {cplx(h),   cplx(0.0), cplx(c3a), cplx(d1),
                cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0),
                cplx(a),   cplx(0.0), cplx(c3b), cplx(d3),
                cplx(b),   cplx(0.0), cplx(0.0), cplx(d4)});
  return Operator(lay, m);
}

// U = P2 P1^T, mapping the trade-off initial state onto the final one.
inline Operator tradeoff_unitary() {
  Operator p1 = tradeoff_p1();
  Operator p2 = tradeoff_p2();
  return Operator(p1.layout(), p2.matrix() * dagger(p1.matrix()));
}

// Switching-unit step 1, moving the car record into the qutrit memory:
// acts on memory (3) x car (2), basis {0L, 0R, 1L, 1R, 2L, 2R}.
inline Operator switching_u1() {
  SystemLayout lay({Subsystem("alice", {"0", "1", "2"}), Subsystem("car", {"L", "R"})});
  CMatrix m(6);
  m.at(0, 2) = 1.0;
  m.at(1, 5) = 1.0;
  m.at(2, 0) = 1.0;
  m.at(3, 4) = 1.0;
  m.at(4, 3) = 1.0;
  m.at(5, 1) = 1.0;
  return Operator(lay, m);
}

// Switching-unit step 2, handing the memory over to the switch qubit:
// acts on memory (3) x switch (2), basis {0u, 0d, 1u, 1d, 2u, 2d}.
inline Operator switching_u2() {
  SystemLayout lay({Subsystem("alice", {"0", "1", "2"}), Subsystem("switch", {"u", "d"})});
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(6);
  m.at(0, 2) = s;
  m.at(0, 3) = s;
  m.at(1, 4) = s;
  m.at(1, 5) = s;
  m.at(2, 2) = s;
  m.at(2, 3) = -s;
  m.at(3, 4) = s;
  m.at(3, 5) = -s;
  m.at(4, 0) = 1.0;
  m.at(5, 1) = 1.0;
  return Operator(lay, m);
}

// Switching-unit step 3, disentangling switch from car:
// acts on car (2) x switch (2), basis {Lu, Ld, Ru, Rd}.
inline Operator switching_u3() {
  SystemLayout lay({Subsystem("car", {"L", "R"}), Subsystem("switch", {"u", "d"})});
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(4, {cplx(s),  cplx(s),  cplx(0.0), cplx(0.0),
                cplx(s),  cplx(-s), cplx(0.0), cplx(0.0),
                cplx(0.0), cplx(0.0), cplx(-s), cplx(s),
                cplx(0.0), cplx(0.0), cplx(s),  cplx(s)});
  return Operator(lay, m);
}

// Evolution of atom (U/Th) x observer (sad/happy) after time t at decay
// rate lambda; column 0 carries |U,sad> -> a|U,sad> + b|Th,happy> with
// a = sqrt(e^{-lt}), b = sqrt(1-e^{-lt}).
inline Operator decay_evolution(double lambda, double t) {
  if (!(lambda > 0.0)) throw contract_error("decay_evolution: lambda must be positive");
  const double a = std::sqrt(std::exp(-lambda * t));
  const double b = std::sqrt(1.0 - std::exp(-lambda * t));
  SystemLayout lay({Subsystem("atom", {"U", "Th"}), Subsystem("bob", {"sad", "happy"})});
  CMatrix m(4);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 3) = 1.0;
  m.at(2, 2) = 1.0;
  m.at(3, 0) = b;
  m.at(3, 1) = -a;
  return Operator(lay, m);
}

// Evolution of cat (alive/dead) x observer (neutral/happy/sad) while the box
// is slowly opened; on the symmetric initial state it produces
// e^{-it}/sqrt2 (cos t (|alive>+|dead>)|n> + i sin t (|dead>|happy>+|alive>|sad>)).
inline Operator cat_evolution(double t) {
  SystemLayout lay(
      {Subsystem("cat", {"alive", "dead"}), Subsystem("alice", {"neutral", "happy", "sad"})});
  const cplx phase(std::cos(t), -std::sin(t));  // e^{-it}
  const cplx a(std::cos(t), 0.0);
  const cplx b(0.0, std::sin(t));  // i sin t
  CMatrix m(6);
  // index order: alive,n(0) alive,happy(1) alive,sad(2) dead,n(3) dead,happy(4) dead,sad(5)
  m.at(0, 0) = a;
  m.at(0, 4) = b;
  m.at(1, 1) = 1.0;
  m.at(2, 2) = a;
  m.at(2, 3) = b;
  m.at(3, 2) = b;
  m.at(3, 3) = a;
  m.at(4, 0) = b;
  m.at(4, 4) = a;
  m.at(5, 5) = 1.0;
  for (cplx& z : m.a) z *= phase;
  return Operator(lay, m);
}

}  // namespace catalog
}  // namespace qeraser
