// hilbert.hpp
// Labeled composite Hilbert spaces: states, operators, tensor products,
// subsystem lifting, partial trace, projection and Born-rule measurement.
// Dense complex vectors/matrices throughout; index order is row-major over
// the subsystem list. States may be carried unnormalized (flagged); every
// probability-returning operation normalizes internally.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeraser/common.hpp"
#include "qeraser/linalg.hpp"

namespace qeraser {

inline constexpr std::size_t kMaxTotalDimension = 4096;

struct Subsystem {
  std::string label;
  std::size_t dim = 0;
  std::vector<std::string> levels;  // names of the basis levels; defaults "0","1",...

  Subsystem(std::string label_, std::size_t dim_) : label(std::move(label_)), dim(dim_) {
    levels.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) levels.push_back(std::to_string(i));
  }
  Subsystem(std::string label_, std::vector<std::string> levels_)
      : label(std::move(label_)), dim(levels_.size()), levels(std::move(levels_)) {}

  bool operator==(const Subsystem& o) const {
    return label == o.label && dim == o.dim && levels == o.levels;
  }
};

class SystemLayout {
 public:
  SystemLayout() = default;

  explicit SystemLayout(std::vector<Subsystem> subsystems) : subs_(std::move(subsystems)) {
    if (subs_.empty()) throw contract_error("SystemLayout: at least one subsystem required");
    total_ = 1;
    for (const auto& s : subs_) {
      if (s.dim < 2) {
        throw contract_error("SystemLayout: subsystem '" + s.label +
                             "' has dimension " + std::to_string(s.dim) +
                             "; dimension 1 is rejected");
      }
      if (s.levels.size() != s.dim)
        throw contract_error("SystemLayout: level names of '" + s.label + "' do not match dim");
      if (total_ > kMaxTotalDimension / s.dim)
        throw contract_error("SystemLayout: total dimension exceeds the 4096 cap");
      total_ *= s.dim;
    }
    for (std::size_t i = 0; i < subs_.size(); ++i)
      for (std::size_t j = i + 1; j < subs_.size(); ++j)
        if (subs_[i].label == subs_[j].label)
          throw contract_error("SystemLayout: duplicate subsystem label '" + subs_[i].label + "'");
    strides_.assign(subs_.size(), 1);
    for (std::size_t i = subs_.size(); i-- > 1;)
      strides_[i - 1] = strides_[i] * subs_[i].dim;
  }

  std::size_t size() const { return subs_.size(); }
  std::size_t total_dim() const { return total_; }
  const Subsystem& at(std::size_t i) const { return subs_[i]; }
  const std::vector<Subsystem>& subsystems() const { return subs_; }
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  bool has_label(const std::string& label) const {
    return std::any_of(subs_.begin(), subs_.end(),
                       [&](const Subsystem& s) { return s.label == label; });
  }

  std::size_t position_of(const std::string& label) const {
    for (std::size_t i = 0; i < subs_.size(); ++i)
      if (subs_[i].label == label) return i;
    throw contract_error("SystemLayout: unknown subsystem label '" + label + "'");
  }

  std::size_t level_index(const std::string& label, const std::string& level) const {
    const Subsystem& s = subs_[position_of(label)];
    for (std::size_t i = 0; i < s.levels.size(); ++i)
      if (s.levels[i] == level) return i;
    throw contract_error("SystemLayout: subsystem '" + label + "' has no level '" + level + "'");
  }

  // digits of a flat index, one per subsystem
  std::vector<std::size_t> decompose(std::size_t index) const {
    std::vector<std::size_t> d(subs_.size());
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      d[i] = index / strides_[i];
      index %= strides_[i];
    }
    return d;
  }

  std::size_t compose(const std::vector<std::size_t>& digits) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < subs_.size(); ++i) idx += digits[i] * strides_[i];
    return idx;
  }

  bool operator==(const SystemLayout& o) const { return subs_ == o.subs_; }
  bool operator!=(const SystemLayout& o) const { return !(*this == o); }

 private:
  std::vector<Subsystem> subs_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

inline SystemLayout single(const std::string& label, std::vector<std::string> levels) {
  return SystemLayout({Subsystem(label, std::move(levels))});
}

inline std::vector<std::string> all_labels(const SystemLayout& layout) {
  std::vector<std::string> out;
  out.reserve(layout.size());
  for (const Subsystem& s : layout.subsystems()) out.push_back(s.label);
  return out;
}

inline SystemLayout qubit(const std::string& label, const std::string& lv0 = "0",
                          const std::string& lv1 = "1") {
  return single(label, {lv0, lv1});
}

class StateVector {
 public:
  StateVector(SystemLayout layout, std::vector<cplx> amplitudes, bool claim_normalized = false)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != layout_.total_dim())
      throw contract_error("StateVector: amplitude count does not match layout dimension");
    if (claim_normalized && std::abs(norm() - 1.0) > tol::structural)
      throw contract_error("StateVector: normalized flag set but norm deviates from 1");
    normalized_ = claim_normalized;
  }

  // basis state named by one level per subsystem, in layout order
  static StateVector basis(const SystemLayout& layout, const std::vector<std::string>& levels) {
    if (levels.size() != layout.size())
      throw contract_error("StateVector::basis: one level name per subsystem required");
    std::vector<std::size_t> digits(layout.size());
    for (std::size_t i = 0; i < layout.size(); ++i)
      digits[i] = layout.level_index(layout.at(i).label, levels[i]);
    std::vector<cplx> amps(layout.total_dim(), cplx(0.0, 0.0));
    amps[layout.compose(digits)] = 1.0;
    return StateVector(std::move(amps), layout, true);
  }

  const SystemLayout& layout() const { return layout_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }
  cplx amplitude(std::size_t i) const { return amps_[i]; }
  bool normalized() const { return normalized_; }

  double norm_squared() const {
    double s = 0.0;
    for (const cplx& z : amps_) s += std::norm(z);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  StateVector normalized_copy() const {
    const double n = norm();
    if (n <= 0.0) throw contract_error("StateVector: cannot normalize the zero vector");
    std::vector<cplx> amps = amps_;
    for (cplx& z : amps) z /= n;
    return StateVector(std::move(amps), layout_, true);
  }

  StateVector scaled(cplx factor) const {
    std::vector<cplx> amps = amps_;
    for (cplx& z : amps) z *= factor;
    StateVector r(std::move(amps), layout_, false);
    r.refresh_normalized_flag();
    return r;
  }

  friend StateVector operator+(const StateVector& a, const StateVector& b) {
    if (a.layout_ != b.layout_) throw contract_error("state sum: layout mismatch");
    std::vector<cplx> amps = a.amps_;
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += b.amps_[i];
    StateVector r(std::move(amps), a.layout_, false);
    r.refresh_normalized_flag();
    return r;
  }

  friend StateVector operator-(const StateVector& a, const StateVector& b) {
    return a + b.scaled(-1.0);
  }

 private:
  // internal: amplitudes first so the public ctor can stay validating
  StateVector(std::vector<cplx> amps, SystemLayout layout, bool normalized)
      : layout_(std::move(layout)), amps_(std::move(amps)), normalized_(normalized) {}

  void refresh_normalized_flag() { normalized_ = std::abs(norm() - 1.0) <= tol::structural; }

  SystemLayout layout_;
  std::vector<cplx> amps_;
  bool normalized_ = false;

  friend StateVector tensor(const StateVector&, const StateVector&);
  friend StateVector apply(const class Operator&, const StateVector&,
                           const std::vector<std::string>&);
};

class Operator {
 public:
  Operator(SystemLayout layout, CMatrix matrix)
      : layout_(std::move(layout)), m_(std::move(matrix)) {
    if (m_.n != layout_.total_dim())
      throw contract_error("Operator: matrix dimension does not match layout");
  }

  static Operator identity(const SystemLayout& layout) {
    return Operator(layout, CMatrix::identity(layout.total_dim()));
  }

  const SystemLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.n; }

  bool is_unitary(double tolerance = tol::structural) const {
    return is_unitary_matrix(m_, tolerance);
  }
  bool is_projector(double tolerance = tol::structural) const {
    return is_projector_matrix(m_, tolerance);
  }

  Operator dagger() const { return Operator(layout_, qeraser::dagger(m_)); }
  friend Operator operator*(const Operator& x, const Operator& y) {
    if (x.layout_ != y.layout_) throw contract_error("operator product: layout mismatch");
    return Operator(x.layout_, x.m_ * y.m_);
  }

 private:
  SystemLayout layout_;
  CMatrix m_;
};

// |v><v| on the layout of v (v need not be normalized)
inline Operator projector_onto(const StateVector& v) {
  const double n2 = v.norm_squared();
  if (n2 <= 0.0) throw contract_error("projector_onto: zero vector");
  CMatrix m(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j)
      m.at(i, j) = v.amplitude(i) * std::conj(v.amplitude(j)) / n2;
  return Operator(v.layout(), m);
}

class DensityOperator {
 public:
  DensityOperator(SystemLayout layout, CMatrix matrix)
      : layout_(std::move(layout)), m_(std::move(matrix)) {
    if (m_.n != layout_.total_dim())
      throw contract_error("DensityOperator: matrix dimension does not match layout");
    if (!is_hermitian_matrix(m_, tol::structural))
      throw invariant_error("DensityOperator: matrix is not hermitian");
    if (std::abs(trace(m_) - cplx(1.0, 0.0)) > tol::structural)
      throw invariant_error("DensityOperator: trace deviates from 1");
  }

  // |psi><psi| of the internally normalized state
  static DensityOperator from_state(const StateVector& psi) {
    const StateVector n = psi.normalized() ? psi : psi.normalized_copy();
    CMatrix m(n.dim());
    for (std::size_t i = 0; i < n.dim(); ++i)
      for (std::size_t j = 0; j < n.dim(); ++j)
        m.at(i, j) = n.amplitude(i) * std::conj(n.amplitude(j));
    return DensityOperator(n.layout(), std::move(m));
  }

  const SystemLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.n; }

  bool positive_semidefinite(double slack = tol::positivity) const {
    return is_psd_within(m_, slack);
  }

 private:
  SystemLayout layout_;
  CMatrix m_;
};

struct MeasurementResult {
  std::string outcome_label;
  double probability = 0.0;
  StateVector post_state;
};

// ---- operations ------------------------------------------------------------

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Subsystem> subs = a.layout().subsystems();
  for (const Subsystem& s : b.layout().subsystems()) {
    if (a.layout().has_label(s.label))
      throw contract_error("tensor: duplicate subsystem label '" + s.label + "'");
    subs.push_back(s);
  }
  SystemLayout joint(std::move(subs));
  std::vector<cplx> amps(joint.total_dim());
  const std::size_t bd = b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < bd; ++j) amps[i * bd + j] = a.amplitude(i) * b.amplitude(j);
  return StateVector(std::move(amps), std::move(joint),
                     a.normalized() && b.normalized());
}

namespace detail {

// positions/strides of target subsystems (in the order requested) and a
// flat iteration scheme over the complementary environment indices
struct TargetIndexer {
  std::vector<std::size_t> target_pos;
  std::vector<std::size_t> target_stride;  // strides of targets inside the full index
  std::vector<std::size_t> target_dim;
  std::vector<std::size_t> env_pos;
  std::vector<std::size_t> env_stride;
  std::vector<std::size_t> env_dim;
  std::size_t target_total = 1;
  std::size_t env_total = 1;

  TargetIndexer(const SystemLayout& layout, const std::vector<std::string>& targets) {
    if (targets.empty()) throw contract_error("target list must not be empty");
    for (const std::string& t : targets) {
      const std::size_t p = layout.position_of(t);
      if (std::find(target_pos.begin(), target_pos.end(), p) != target_pos.end())
        throw contract_error("target label '" + t + "' listed twice");
      target_pos.push_back(p);
      target_stride.push_back(layout.stride(p));
      target_dim.push_back(layout.at(p).dim);
      target_total *= layout.at(p).dim;
    }
    for (std::size_t p = 0; p < layout.size(); ++p) {
      if (std::find(target_pos.begin(), target_pos.end(), p) == target_pos.end()) {
        env_pos.push_back(p);
        env_stride.push_back(layout.stride(p));
        env_dim.push_back(layout.at(p).dim);
        env_total *= layout.at(p).dim;
      }
    }
  }

  // flat offset of the e-th environment configuration
  std::size_t env_offset(std::size_t e) const {
    std::size_t off = 0;
    for (std::size_t i = env_dim.size(); i-- > 0;) {
      off += (e % env_dim[i]) * env_stride[i];
      e /= env_dim[i];
    }
    return off;
  }

  // flat offset of the t-th target configuration (row-major over target list)
  std::size_t target_offset(std::size_t t) const {
    std::size_t off = 0;
    for (std::size_t i = target_dim.size(); i-- > 0;) {
      off += (t % target_dim[i]) * target_stride[i];
      t /= target_dim[i];
    }
    return off;
  }
};

}  // namespace detail

// Apply an operator to the named target subsystems of a state, identity on
// the rest. The operator's matrix is indexed row-major over the target list.
inline StateVector apply(const Operator& op, const StateVector& psi,
                         const std::vector<std::string>& targets) {
  detail::TargetIndexer ix(psi.layout(), targets);
  if (ix.target_total != op.dim())
    throw contract_error("apply: operator dimension does not match target subsystems");
  std::vector<cplx> out(psi.dim(), cplx(0.0, 0.0));
  std::vector<std::size_t> toff(ix.target_total);
  for (std::size_t t = 0; t < ix.target_total; ++t) toff[t] = ix.target_offset(t);
  std::vector<cplx> gathered(ix.target_total);
  for (std::size_t e = 0; e < ix.env_total; ++e) {
    const std::size_t base = ix.env_offset(e);
    for (std::size_t t = 0; t < ix.target_total; ++t)
      gathered[t] = psi.amplitude(base + toff[t]);
    for (std::size_t r = 0; r < ix.target_total; ++r) {
      cplx acc(0.0, 0.0);
      for (std::size_t c = 0; c < ix.target_total; ++c)
        acc += op.matrix().at(r, c) * gathered[c];
      out[base + toff[r]] = acc;
    }
  }
  StateVector result(std::move(out), psi.layout(), false);
  result.refresh_normalized_flag();
  return result;
}

// Materialized lift: operator acting as op on the targets and identity on
// everything else, with the index permutation for non-contiguous targets.
inline Operator lift(const Operator& op, const std::vector<std::string>& targets,
                     const SystemLayout& layout) {
  detail::TargetIndexer ix(layout, targets);
  if (ix.target_total != op.dim())
    throw contract_error("lift: operator dimension does not match target subsystems");
  const std::size_t n = layout.total_dim();
  CMatrix full(n);
  std::vector<std::size_t> toff(ix.target_total);
  for (std::size_t t = 0; t < ix.target_total; ++t) toff[t] = ix.target_offset(t);
  for (std::size_t e = 0; e < ix.env_total; ++e) {
    const std::size_t base = ix.env_offset(e);
    for (std::size_t r = 0; r < ix.target_total; ++r)
      for (std::size_t c = 0; c < ix.target_total; ++c)
        full.at(base + toff[r], base + toff[c]) = op.matrix().at(r, c);
  }
  return Operator(layout, std::move(full));
}

// Reduced density operator on the kept subsystems (result layout follows the
// order of keep_labels). Trace is preserved.
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<std::string>& keep_labels) {
  if (keep_labels.empty()) throw contract_error("partial_trace: keep set must not be empty");
  detail::TargetIndexer ix(rho.layout(), keep_labels);
  std::vector<Subsystem> kept;
  kept.reserve(keep_labels.size());
  for (std::size_t p : ix.target_pos) kept.push_back(rho.layout().at(p));
  SystemLayout reduced_layout(std::move(kept));
  CMatrix reduced(ix.target_total);
  std::vector<std::size_t> toff(ix.target_total);
  for (std::size_t t = 0; t < ix.target_total; ++t) toff[t] = ix.target_offset(t);
  for (std::size_t e = 0; e < ix.env_total; ++e) {
    const std::size_t base = ix.env_offset(e);
    for (std::size_t r = 0; r < ix.target_total; ++r)
      for (std::size_t c = 0; c < ix.target_total; ++c)
        reduced.at(r, c) += rho.matrix().at(base + toff[r], base + toff[c]);
  }
  return DensityOperator(std::move(reduced_layout), std::move(reduced));
}

inline DensityOperator partial_trace(const StateVector& psi,
                                     const std::vector<std::string>& keep_labels) {
  return partial_trace(DensityOperator::from_state(psi), keep_labels);
}

struct ProjectionResult {
  std::optional<StateVector> state;  // empty on null projection
  double survival = 0.0;
};

// Project the named targets with a projector; survival = |P psi|^2 / |psi|^2.
// Survival below the null threshold yields an explicit empty result.
inline ProjectionResult project(const StateVector& psi, const Operator& projector,
                                const std::vector<std::string>& targets) {
  if (!projector.is_projector())
    throw contract_error("project: operator fails the projector check");
  const double before = psi.norm_squared();
  if (before <= 0.0) throw contract_error("project: zero input state");
  StateVector projected = apply(projector, psi, targets);
  const double survival = projected.norm_squared() / before;
  if (survival < tol::null_projection) return ProjectionResult{std::nullopt, survival};
  return ProjectionResult{projected.normalized_copy(), survival};
}

// Born-rule measurement of the target subsystems in the given orthonormal,
// complete basis. Outcomes are returned in basis order; post states are
// normalized. Labels default to the basis index.
inline std::vector<MeasurementResult> measure(const StateVector& psi,
                                              const std::vector<std::string>& targets,
                                              const std::vector<StateVector>& basis,
                                              std::vector<std::string> labels = {}) {
  detail::TargetIndexer ix(psi.layout(), targets);
  if (basis.size() != ix.target_total)
    throw contract_error("measure: basis does not span the target subspace (incomplete)");
  for (const StateVector& b : basis)
    if (b.dim() != ix.target_total)
      throw contract_error("measure: basis state dimension does not match targets");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx ip(0.0, 0.0);
      for (std::size_t k = 0; k < ix.target_total; ++k)
        ip += std::conj(basis[i].amplitude(k)) * basis[j].amplitude(k);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(ip - cplx(want, 0.0)) > tol::structural)
        throw contract_error("measure: basis is not orthonormal");
    }
  }
  if (labels.empty()) {
    labels.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != basis.size())
    throw contract_error("measure: outcome label count does not match basis");

  const StateVector n = psi.normalized() ? psi : psi.normalized_copy();
  std::vector<std::size_t> toff(ix.target_total);
  for (std::size_t t = 0; t < ix.target_total; ++t) toff[t] = ix.target_offset(t);

  std::vector<MeasurementResult> results;
  results.reserve(basis.size());
  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    // residual amplitude on the environment for outcome bi
    std::vector<cplx> residual(ix.env_total, cplx(0.0, 0.0));
    double prob = 0.0;
    for (std::size_t e = 0; e < ix.env_total; ++e) {
      const std::size_t base = ix.env_offset(e);
      cplx acc(0.0, 0.0);
      for (std::size_t t = 0; t < ix.target_total; ++t)
        acc += std::conj(basis[bi].amplitude(t)) * n.amplitude(base + toff[t]);
      residual[e] = acc;
      prob += std::norm(acc);
    }
    // post state: basis vector on targets, residual on environment; for a
    // zero-probability outcome the basis vector at the first environment
    // configuration stands in (any normalized representative works)
    std::vector<cplx> post(n.dim(), cplx(0.0, 0.0));
    if (prob > 0.0) {
      const double inv = 1.0 / std::sqrt(prob);
      for (std::size_t e = 0; e < ix.env_total; ++e) {
        if (residual[e] == cplx(0.0, 0.0)) continue;
        const std::size_t base = ix.env_offset(e);
        for (std::size_t t = 0; t < ix.target_total; ++t)
          post[base + toff[t]] += basis[bi].amplitude(t) * residual[e] * inv;
      }
    } else {
      for (std::size_t t = 0; t < ix.target_total; ++t)
        post[toff[t]] = basis[bi].amplitude(t);
    }
    results.push_back(
        MeasurementResult{labels[bi], prob, StateVector(n.layout(), std::move(post), true)});
  }
  double total = 0.0;
  for (const auto& r : results) total += r.probability;
  if (std::abs(total - 1.0) > tol::structural)
    throw invariant_error("measure: outcome probabilities do not sum to 1");
  return results;
}

inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.layout() != b.layout()) throw contract_error("inner: layout mismatch");
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i)
    s += std::conj(a.amplitude(i)) * b.amplitude(i);
  return s;
}

inline double norm_of(const StateVector& a) { return a.norm(); }

// |<a|b>|^2 normalized; insensitive to global phase and scaling.
inline double fidelity(const StateVector& a, const StateVector& b) {
  const double na = a.norm_squared();
  const double nb = b.norm_squared();
  if (na <= 0.0 || nb <= 0.0) throw contract_error("fidelity: zero vector");
  return std::norm(inner(a, b)) / (na * nb);
}

}  // namespace qeraser
