// optics.hpp
// Component operators (beam splitter, wave plates, polarizer) and the
// two-Gaussian screen model turning path/marker states into interference
// patterns with a Michelson visibility summary.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qeraser/hilbert.hpp"

namespace qeraser {

struct ScreenConfig {
  double x_min = -10.0;
  double x_max = 10.0;
  int points = 401;
  double slit_half_separation = 2.0;  // humps at +-a
  double envelope_sigma = 6.0;
  double fringe_wavenumber = 1.5;

  void validate() const {
    if (!(x_min < x_max)) throw contract_error("ScreenConfig: x_min must be below x_max");
    if (points < 3) throw contract_error("ScreenConfig: at least 3 grid points required");
    if (!(slit_half_separation > 0.0))
      throw contract_error("ScreenConfig: slit_half_separation must be positive");
    if (!(envelope_sigma > 0.0)) throw contract_error("ScreenConfig: envelope_sigma must be positive");
    if (fringe_wavenumber < 0.0)
      throw contract_error("ScreenConfig: fringe_wavenumber must be non-negative");
  }

  std::vector<double> grid() const {
    validate();
    std::vector<double> xs(points);
    const double h = (x_max - x_min) / (points - 1);
    for (int i = 0; i < points; ++i) xs[i] = x_min + h * i;
    return xs;
  }
};

// Sampled intensity over detector positions. `baseline` holds the incoherent
// (cross-term-free) reference used to flatten the envelope before the
// visibility is read off; phase-scan patterns leave it empty and use the raw
// global Michelson ratio instead.
struct ScreenPattern {
  std::vector<double> xs;
  std::vector<double> intensity;
  std::vector<double> baseline;
  double window_half_width = 0.0;
  double visibility = 0.0;
  double survival = 1.0;
};

// (I_max - I_min)/(I_max + I_min); envelope-normalized within the overlap
// window when a baseline is present, raw over the whole grid otherwise.
inline double visibility(const ScreenPattern& pattern) {
  if (pattern.xs.empty() || pattern.intensity.size() != pattern.xs.size())
    throw contract_error("visibility: empty or inconsistent pattern");
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  const bool normalized = !pattern.baseline.empty();
  for (std::size_t i = 0; i < pattern.xs.size(); ++i) {
    if (normalized && std::abs(pattern.xs[i]) > pattern.window_half_width) continue;
    double v = pattern.intensity[i];
    if (normalized) {
      const double b = pattern.baseline[i];
      v = (b > 0.0) ? v / b : 0.0;
    }
    if (!seen) {
      lo = hi = v;
      seen = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!seen || hi <= 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

inline Operator beam_splitter() {
  const double s = 1.0 / std::sqrt(2.0);
  return Operator(qubit("path", "u", "d"), CMatrix(2, {s, s, s, -s}));
}

enum class WavePlateKind { half, quarter };

// half: polarization rotation by the given angle, R(theta);
// quarter: retarder with fast axis at the given angle, R(a) diag(1, i) R(-a).
inline Operator wave_plate(WavePlateKind kind, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const SystemLayout pol = qubit("pol", "up", "right");
  if (kind == WavePlateKind::half) {
    return Operator(pol, CMatrix(2, {c, -s, s, c}));
  }
  const cplx i(0.0, 1.0);
  // R(a) * diag(1, i) * R(-a)
  CMatrix m(2);
  m.at(0, 0) = c * c + i * (s * s);
  m.at(0, 1) = c * s - i * (s * c);
  m.at(1, 0) = s * c - i * (c * s);
  m.at(1, 1) = s * s + i * (c * c);
  return Operator(pol, m);
}

// rank-1 projector onto cos(theta)|up> + sin(theta)|right>
inline Operator polarizer(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Operator(qubit("pol", "up", "right"),
                  CMatrix(2, {c * c, c * s, s * c, s * s}));
}

enum class Path { upper, lower };

// f_u(x) = exp(-(x-a)^2/4s^2) e^{+ikx}, f_d(x) = exp(-(x+a)^2/4s^2) e^{-ikx}
inline cplx screen_amplitude(const ScreenConfig& config, Path path, double x) {
  if (x < config.x_min || x > config.x_max)
    throw contract_error("screen_amplitude: x outside the configured grid");
  const double a = config.slit_half_separation;
  const double s2 = config.envelope_sigma * config.envelope_sigma;
  const double center = (path == Path::upper) ? a : -a;
  const double sign = (path == Path::upper) ? 1.0 : -1.0;
  const double env = std::exp(-(x - center) * (x - center) / (4.0 * s2));
  const double phase = sign * config.fringe_wavenumber * x;
  return cplx(env * std::cos(phase), env * std::sin(phase));
}

// Screen intensity of a state holding a two-level path subsystem plus any
// number of marker subsystems: I(x) = sum over the marker basis of
// |c_u f_u(x) + c_d f_d(x)|^2, i.e. the marker is traced out. Level 0 of the
// path subsystem feeds the upper-slit amplitude, level 1 the lower one. The
// values are per-cell Born weights scaled by `weight` (the caller's
// survival/branch probability); the state itself is normalized internally.
// The grid sum equals `weight` exactly for cross-term-free patterns; coherent
// fringes clip a little mass at the grid edges unless the screen is widened.
inline ScreenPattern intensity(const StateVector& state, const ScreenConfig& config,
                               const std::string& path_label, double weight = 1.0) {
  config.validate();
  if (!state.layout().has_label(path_label))
    throw contract_error("intensity: state has no path subsystem '" + path_label + "'");
  if (state.layout().at(state.layout().position_of(path_label)).dim != 2)
    throw contract_error("intensity: path subsystem must be two-level");

  const StateVector psi = state.normalized() ? state : state.normalized_copy();
  detail::TargetIndexer ix(psi.layout(), {path_label});

  const std::vector<double> xs = config.grid();
  std::vector<cplx> fu(xs.size()), fd(xs.size());
  double mass_u = 0.0, mass_d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fu[i] = screen_amplitude(config, Path::upper, xs[i]);
    fd[i] = screen_amplitude(config, Path::lower, xs[i]);
    mass_u += std::norm(fu[i]);
    mass_d += std::norm(fd[i]);
  }
  const double inv_u = 1.0 / std::sqrt(mass_u);
  const double inv_d = 1.0 / std::sqrt(mass_d);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fu[i] *= inv_u;
    fd[i] *= inv_d;
  }

  const std::size_t upper_off = 0;
  const std::size_t lower_off = ix.target_stride[0];
  ScreenPattern p;
  p.xs = xs;
  p.intensity.assign(xs.size(), 0.0);
  p.baseline.assign(xs.size(), 0.0);
  p.window_half_width = config.envelope_sigma / 2.0;
  p.survival = weight;
  for (std::size_t e = 0; e < ix.env_total; ++e) {
    const std::size_t base = ix.env_offset(e);
    const cplx cu = psi.amplitude(base + upper_off);
    const cplx cd = psi.amplitude(base + lower_off);
    if (cu == cplx(0.0, 0.0) && cd == cplx(0.0, 0.0)) continue;
    const double nu = std::norm(cu);
    const double nd = std::norm(cd);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      p.intensity[i] += std::norm(cu * fu[i] + cd * fd[i]) * weight;
      p.baseline[i] += (nu * std::norm(fu[i]) + nd * std::norm(fd[i])) * weight;
    }
  }
  p.visibility = visibility(p);
  return p;
}

// pattern over an abstract scan coordinate (interferometer phase,
// coincidence delay); visibility is the raw global Michelson ratio
inline ScreenPattern scan_pattern(std::vector<double> xs, std::vector<double> values,
                                  double survival = 1.0) {
  ScreenPattern p;
  p.xs = std::move(xs);
  p.intensity = std::move(values);
  p.survival = survival;
  p.visibility = visibility(p);
  return p;
}

}  // namespace qeraser
