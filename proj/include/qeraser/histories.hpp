// histories.hpp
// Consistent-histories checker: chronologically ordered class operators,
// the decoherence condition Tr(C_i rho C_j^dagger) = 0 for i != j, and
// history probabilities from the diagonal.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qeraser/hilbert.hpp"

namespace qeraser {

struct HistoryStep {
  double time = 0.0;
  Operator projector;  // on the full layout
};

struct History {
  std::vector<HistoryStep> steps;

  void validate() const {
    if (steps.empty()) throw contract_error("History: at least one step required");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
      if (!(steps[i].time < steps[i + 1].time))
        throw contract_error("History: step times must be strictly increasing");
    for (const HistoryStep& s : steps)
      if (!s.projector.is_projector())
        throw contract_error("History: step operator fails the projector check");
  }
};

// Unitary bridging two projection times; identity when absent.
using IntervalEvolution = std::function<Operator(double t_from, double t_to)>;

// Chronologically ordered product, latest factor leftmost:
// C = P_n U(t_{n-1}, t_n) P_{n-1} ... U(t_1, t_2) P_1.
inline Operator class_operator(const History& h, const IntervalEvolution& evolve = {}) {
  h.validate();
  Operator c = h.steps.front().projector;
  for (std::size_t i = 1; i < h.steps.size(); ++i) {
    if (evolve) {
      Operator u = evolve(h.steps[i - 1].time, h.steps[i].time);
      if (u.layout() != c.layout())
        throw contract_error("class_operator: interval evolution layout mismatch");
      c = u * c;
    }
    c = h.steps[i].projector * c;
  }
  return c;
}

struct ConsistencyReport {
  std::size_t count = 0;
  CMatrix matrix;                     // M_ij = Tr(C_i rho C_j^dagger)
  bool consistent = false;
  std::vector<double> probabilities;  // diagonal
  double tolerance = 0.0;
};

inline ConsistencyReport consistency_matrix(const std::vector<History>& histories,
                                            const DensityOperator& rho,
                                            double tolerance = tol::structural,
                                            const IntervalEvolution& evolve = {}) {
  if (histories.empty()) throw contract_error("consistency_matrix: no histories given");
  std::vector<Operator> cls;
  cls.reserve(histories.size());
  for (const History& h : histories) {
    Operator c = class_operator(h, evolve);
    if (c.layout() != rho.layout())
      throw contract_error("consistency_matrix: history layout does not match rho");
    cls.push_back(std::move(c));
  }
  ConsistencyReport report;
  report.count = histories.size();
  report.tolerance = tolerance;
  report.matrix = CMatrix(histories.size());
  report.consistent = true;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    for (std::size_t j = 0; j < cls.size(); ++j) {
      const CMatrix prod = cls[i].matrix() * rho.matrix() * dagger(cls[j].matrix());
      const cplx t = trace(prod);
      report.matrix.at(i, j) = t;
      if (i != j && std::abs(t) > tolerance) report.consistent = false;
    }
  }
  report.probabilities.reserve(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const cplx d = report.matrix.at(i, i);
    if (d.real() < -tol::positivity || std::abs(d.imag()) > tol::structural)
      throw invariant_error("consistency_matrix: diagonal entry is not a probability");
    report.probabilities.push_back(d.real() < 0.0 ? 0.0 : d.real());
  }
  return report;
}

}  // namespace qeraser
