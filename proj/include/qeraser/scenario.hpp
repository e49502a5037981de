// scenario.hpp
// Line-oriented scenario files ("key = value", # comments, one optional
// [screen] section), per-experiment key schemas, the dispatcher running a
// parsed scenario through the experiment/temporal/nocomm/histories modules,
// and the CSV/summary/ascii emitters. Everything is deterministic in
// (scenario, seed).

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qeraser/experiments.hpp"
#include "qeraser/histories.hpp"
#include "qeraser/nocomm.hpp"
#include "qeraser/temporal.hpp"

namespace qeraser {

// Scenario problems (syntax, unknown keys, type mismatches) carry the line
// they were found on; the CLI maps them to exit code 2.
class scenario_error : public std::runtime_error {
 public:
  scenario_error(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " +
                           message),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct Angle {
  double radians = 0.0;
  bool operator==(const Angle& o) const { return radians == o.radians; }
};

using SettingValue = std::variant<std::int64_t, double, bool, Angle, std::string>;

enum class SettingType { integer, real, boolean, angle, word };

inline const char* setting_type_name(SettingType t) {
  switch (t) {
    case SettingType::integer: return "integer";
    case SettingType::real: return "real";
    case SettingType::boolean: return "boolean";
    case SettingType::angle: return "angle";
    default: return "word";
  }
}

inline const char* value_kind_name(const SettingValue& v) {
  switch (v.index()) {
    case 0: return "integer";
    case 1: return "real";
    case 2: return "boolean";
    case 3: return "angle";
    default: return "word";
  }
}

struct SettingSpec {
  SettingType type = SettingType::word;
  bool required = false;
  std::string doc;
};

struct ExperimentSchema {
  std::string name;
  std::string doc;
  std::map<std::string, SettingSpec> keys;
};

inline const std::vector<ExperimentSchema>& experiment_schemas() {
  static const std::vector<ExperimentSchema> schemas = {
      {"wheeler",
       "delayed-choice interferometer: fringe scan or which-path detectors",
       {{"choice", {SettingType::word, true, "interference | which_path"}}}},
      {"double_slit_eraser",
       "two slits with a polarization marker and optional eraser",
       {{"marker", {SettingType::angle, false, "marker rotation angle, or `none`"}},
        {"eraser",
         {SettingType::word, false,
          "none | polarizer:<angle> | hwp_upper | hwp_lower | qwp_pair"}}}},
      {"herzog",
       "double-pass pair creation; coincidence rate against the mirror phase",
       {{"qwp", {SettingType::boolean, false, "turn the second-pass polarization"}},
        {"filter", {SettingType::boolean, false, "45-degree polarizer on the idler"}},
        {"phase_points", {SettingType::integer, false, "phase grid size (default 201)"}}}},
      {"free_will",
       "entangled double slit; push reads which-path, not_push erases it",
       {{"choice", {SettingType::word, true, "push | not_push"}}}},
      {"entanglement_swapping",
       "two pairs; Victor projects photons 2,3 onto Bell or separable states",
       {{"victor", {SettingType::word, true, "bell | separable"}}}},
      {"tradeoff",
       "interference coefficient vs correlation for the two-mode trade-off states",
       {{"family_points", {SettingType::integer, false, "overlap sweep size (default 21)"}}}},
      {"brainwash",
       "observation followed by a memory-erasing unitary",
       {{"variant",
         {SettingType::word, true,
          "inverse | alt_unitary | beamsplitter_double_pass | switching_unit"}}}},
      {"nocomm",
       "seeded sweep of B-confined operations plus the entangling negative control",
       {{"cases", {SettingType::integer, false, "sweep size (default 1000)"}}}},
      {"decay",
       "atom decay watched by an observer; detection densities and conditionals",
       {{"lambda", {SettingType::real, true, "decay rate, > 0"}}}},
      {"cat", "slow box opening; blue-photon detection densities", {}},
      {"passive_zeno",
       "watching one of two paths without ever detecting anything",
       {{"duration", {SettingType::real, true, "interaction window T, > 0"}}}},
      {"zeno",
       "repeated projective resets inhibit the evolution",
       {{"measurements", {SettingType::integer, true, "number of resets n, >= 1"}},
        {"total_time", {SettingType::real, true, "total evolution time"}}}},
      {"histories_double_slit",
       "consistency matrix of the path-then-screen history family",
       {{"marked", {SettingType::boolean, true, "record the path in an ancilla"}}}},
  };
  return schemas;
}

inline const ExperimentSchema* find_schema(const std::string& name) {
  for (const ExperimentSchema& s : experiment_schemas())
    if (s.name == name) return &s;
  return nullptr;
}

struct Scenario {
  std::string experiment;
  std::map<std::string, SettingValue> settings;
  ScreenConfig screen;
  std::uint64_t seed = 0;
  std::int64_t shots = 1;
  std::string prefix;  // output file prefix; defaults to the experiment name

  bool operator==(const Scenario& o) const {
    return experiment == o.experiment && settings == o.settings && seed == o.seed &&
           shots == o.shots && prefix == o.prefix && screen.x_min == o.screen.x_min &&
           screen.x_max == o.screen.x_max && screen.points == o.screen.points &&
           screen.slit_half_separation == o.screen.slit_half_separation &&
           screen.envelope_sigma == o.screen.envelope_sigma &&
           screen.fringe_wavenumber == o.screen.fringe_wavenumber;
  }

  const SettingValue* find(const std::string& key) const {
    auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  }
  std::string word(const std::string& key, const std::string& fallback = "") const {
    const SettingValue* v = find(key);
    return v ? std::get<std::string>(*v) : fallback;
  }
  bool flag(const std::string& key, bool fallback) const {
    const SettingValue* v = find(key);
    return v ? std::get<bool>(*v) : fallback;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    const SettingValue* v = find(key);
    return v ? std::get<std::int64_t>(*v) : fallback;
  }
  double real(const std::string& key, double fallback) const {
    const SettingValue* v = find(key);
    return v ? std::get<double>(*v) : fallback;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool is_word_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_word_char(char c) {
  return is_word_start(c) || (c >= '0' && c <= '9') || c == ':' || c == '.' || c == '+' ||
         c == '-';
}

inline bool parse_full_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

inline bool parse_full_int(const std::string& text, std::int64_t& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

// number followed by a mandatory `deg`/`rad` suffix, e.g. "45 deg", "0.3rad"
inline bool parse_angle(const std::string& text, Angle& out) {
  std::size_t split = text.size();
  if (text.size() >= 3) {
    const std::string suffix = text.substr(text.size() - 3);
    if (suffix == "deg" || suffix == "rad") split = text.size() - 3;
  }
  if (split == text.size()) return false;
  const std::string number = trim(text.substr(0, split));
  double v = 0.0;
  if (!parse_full_double(number, v)) return false;
  out.radians = (text.substr(text.size() - 3) == "deg") ? v * kPi / 180.0 : v;
  return true;
}

inline SettingValue type_value(const std::string& text, int line, int column) {
  if (text == "true") return SettingValue{true};
  if (text == "false") return SettingValue{false};
  std::int64_t i = 0;
  if (parse_full_int(text, i)) return SettingValue{i};
  Angle a;
  if (parse_angle(text, a)) return SettingValue{a};
  double d = 0.0;
  if (parse_full_double(text, d)) return SettingValue{d};
  if (!text.empty() && is_word_start(text[0])) {
    for (char c : text)
      if (!is_word_char(c))
        throw scenario_error(line, column, "malformed value '" + text + "'");
    return SettingValue{text};
  }
  throw scenario_error(line, column, "malformed value '" + text + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_value(const SettingValue& v) {
  switch (v.index()) {
    case 0: return std::to_string(std::get<std::int64_t>(v));
    case 1: return format_double(std::get<double>(v));
    case 2: return std::get<bool>(v) ? "true" : "false";
    case 3: return format_double(std::get<Angle>(v).radians) + " rad";
    default: return std::get<std::string>(v);
  }
}

// composite eraser word "polarizer:<number><deg|rad>"
inline bool parse_polarizer_word(const std::string& word, double& angle_rad) {
  const std::string prefix = "polarizer:";
  if (word.rfind(prefix, 0) != 0) return false;
  Angle a;
  if (!parse_angle(word.substr(prefix.size()), a)) return false;
  angle_rad = a.radians;
  return true;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  struct RawEntry {
    SettingValue value;
    int line;
    bool screen_section;
  };
  std::map<std::string, RawEntry> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_screen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t == "[screen]") {
        in_screen = true;
        continue;
      }
      throw scenario_error(lineno, 1, "unknown section '" + t + "' (only [screen] exists)");
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw scenario_error(lineno, static_cast<int>(t.size()),
                           "expected `key = value`, found no '='");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string value_text = detail::trim(t.substr(eq + 1));
    if (key.empty() || !detail::is_word_start(key[0]))
      throw scenario_error(lineno, 1, "malformed key '" + key + "'");
    for (char c : key)
      if (!(detail::is_word_start(c) || (c >= '0' && c <= '9')))
        throw scenario_error(lineno, 1, "malformed key '" + key + "'");
    if (value_text.empty())
      throw scenario_error(lineno, static_cast<int>(eq + 2), "missing value after '='");
    const std::string stored = (in_screen ? "screen." : "") + key;
    if (raw.count(stored))
      throw scenario_error(lineno, 1, "duplicate key '" + key + "'");
    raw.emplace(stored, RawEntry{detail::type_value(value_text, lineno, static_cast<int>(eq + 2)),
                                 lineno, in_screen});
  }

  const auto take = [&](const std::string& key) -> std::optional<RawEntry> {
    auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    RawEntry e = it->second;
    raw.erase(it);
    return e;
  };

  Scenario sc;
  {
    auto e = take("experiment");
    if (!e) throw scenario_error(1, 1, "missing required key 'experiment'");
    if (e->value.index() != 4)
      throw scenario_error(e->line, 1, "'experiment' must be a word");
    sc.experiment = std::get<std::string>(e->value);
  }
  const ExperimentSchema* schema = find_schema(sc.experiment);
  if (!schema)
    throw scenario_error(1, 1, "unknown experiment '" + sc.experiment + "'");

  if (auto e = take("seed")) {
    if (e->value.index() != 0 || std::get<std::int64_t>(e->value) < 0)
      throw scenario_error(e->line, 1, "'seed' must be a non-negative integer");
    sc.seed = static_cast<std::uint64_t>(std::get<std::int64_t>(e->value));
  }
  if (auto e = take("shots")) {
    if (e->value.index() != 0 || std::get<std::int64_t>(e->value) < 1)
      throw scenario_error(e->line, 1, "'shots' must be a positive integer");
    sc.shots = std::get<std::int64_t>(e->value);
  }
  if (auto e = take("prefix")) {
    if (e->value.index() != 4)
      throw scenario_error(e->line, 1, "'prefix' must be a word");
    sc.prefix = std::get<std::string>(e->value);
  }
  if (sc.prefix.empty()) sc.prefix = sc.experiment;

  // [screen] section
  const auto screen_real = [&](const std::string& key, double& slot) {
    if (auto e = take("screen." + key)) {
      if (e->value.index() == 1)
        slot = std::get<double>(e->value);
      else if (e->value.index() == 0)
        slot = static_cast<double>(std::get<std::int64_t>(e->value));
      else
        throw scenario_error(e->line, 1, "screen '" + key + "' must be a real number");
    }
  };
  screen_real("x_min", sc.screen.x_min);
  screen_real("x_max", sc.screen.x_max);
  screen_real("slit_half_separation", sc.screen.slit_half_separation);
  screen_real("envelope_sigma", sc.screen.envelope_sigma);
  screen_real("fringe_wavenumber", sc.screen.fringe_wavenumber);
  if (auto e = take("screen.points")) {
    if (e->value.index() != 0 || std::get<std::int64_t>(e->value) < 3)
      throw scenario_error(e->line, 1, "screen 'points' must be an integer >= 3");
    sc.screen.points = static_cast<int>(std::get<std::int64_t>(e->value));
  }
  try {
    sc.screen.validate();
  } catch (const contract_error& err) {
    throw scenario_error(1, 1, err.what());
  }

  // experiment-specific keys against the schema
  for (const auto& [key, spec] : schema->keys) {
    auto e = take(key);
    if (!e) {
      if (spec.required)
        throw scenario_error(1, 1, "missing required key '" + key + "' for experiment '" +
                                       sc.experiment + "'");
      continue;
    }
    const SettingValue& v = e->value;
    bool ok = false;
    switch (spec.type) {
      case SettingType::integer: ok = v.index() == 0; break;
      case SettingType::real: ok = v.index() == 1 || v.index() == 0; break;
      case SettingType::boolean: ok = v.index() == 2; break;
      case SettingType::angle:
        ok = v.index() == 3 ||
             (v.index() == 4 && std::get<std::string>(v) == "none");
        break;
      case SettingType::word: ok = v.index() == 4; break;
    }
    if (!ok)
      throw scenario_error(e->line, 1,
                           "key '" + key + "' expects " + setting_type_name(spec.type) +
                               ", got " + value_kind_name(v) + " value");
    SettingValue stored = v;
    if (spec.type == SettingType::real && v.index() == 0)
      stored = SettingValue{static_cast<double>(std::get<std::int64_t>(v))};
    sc.settings.emplace(key, std::move(stored));
  }

  if (!raw.empty()) {
    const auto& [key, entry] = *raw.begin();
    throw scenario_error(entry.line, 1,
                         "unknown key '" + key + "' for experiment '" + sc.experiment + "'");
  }

  // value-level validation
  const auto word_in = [&](const std::string& key, std::vector<std::string> allowed) {
    auto it = sc.settings.find(key);
    if (it == sc.settings.end()) return;
    const std::string& w = std::get<std::string>(it->second);
    for (const std::string& a : allowed)
      if (w == a) return;
    double angle;
    if (key == "eraser" && detail::parse_polarizer_word(w, angle)) return;
    std::string msg = "key '" + key + "' must be one of:";
    for (const std::string& a : allowed) msg += " " + a;
    throw scenario_error(1, 1, msg);
  };
  word_in("choice", sc.experiment == "wheeler"
                        ? std::vector<std::string>{"interference", "which_path"}
                        : std::vector<std::string>{"push", "not_push"});
  word_in("victor", {"bell", "separable"});
  word_in("variant", {"inverse", "alt_unitary", "beamsplitter_double_pass", "switching_unit"});
  word_in("eraser", {"none", "hwp_upper", "hwp_lower", "qwp_pair"});
  if (sc.experiment == "decay" && !(sc.real("lambda", 1.0) > 0.0))
    throw scenario_error(1, 1, "'lambda' must be positive");
  if (sc.experiment == "passive_zeno" && !(sc.real("duration", 1.0) > 0.0))
    throw scenario_error(1, 1, "'duration' must be positive");
  if (sc.experiment == "zeno") {
    if (sc.integer("measurements", 1) < 1)
      throw scenario_error(1, 1, "'measurements' must be >= 1");
    if (!(sc.real("total_time", 1.0) > 0.0))
      throw scenario_error(1, 1, "'total_time' must be positive");
  }
  if (sc.experiment == "nocomm" && sc.integer("cases", 1000) < 1)
    throw scenario_error(1, 1, "'cases' must be >= 1");
  if (sc.experiment == "herzog" && sc.integer("phase_points", 201) < 3)
    throw scenario_error(1, 1, "'phase_points' must be >= 3");
  if (sc.experiment == "tradeoff" && sc.integer("family_points", 21) < 2)
    throw scenario_error(1, 1, "'family_points' must be >= 2");
  return sc;
}

inline std::string serialize_scenario(const Scenario& sc) {
  std::string out;
  out += "experiment = " + sc.experiment + "\n";
  out += "seed = " + std::to_string(sc.seed) + "\n";
  out += "shots = " + std::to_string(sc.shots) + "\n";
  out += "prefix = " + sc.prefix + "\n";
  for (const auto& [key, value] : sc.settings)
    out += key + " = " + detail::format_value(value) + "\n";
  out += "[screen]\n";
  out += "x_min = " + detail::format_double(sc.screen.x_min) + "\n";
  out += "x_max = " + detail::format_double(sc.screen.x_max) + "\n";
  out += "points = " + std::to_string(sc.screen.points) + "\n";
  out += "slit_half_separation = " + detail::format_double(sc.screen.slit_half_separation) + "\n";
  out += "envelope_sigma = " + detail::format_double(sc.screen.envelope_sigma) + "\n";
  out += "fringe_wavenumber = " + detail::format_double(sc.screen.fringe_wavenumber) + "\n";
  return out;
}

// ---- the two-slit history family (shared by tests, CLI and acceptance) ------

// The member histories assert the path at t = 0 and the arrival cell (or the
// marker record) at t = 1; `propagation` is the slit-to-screen unitary that
// must evolve the state between those two times. It pools both slit beams
// into overlapping screen wavefunctions phi_u = (|x1>+|x2>)/sqrt2 and
// phi_d = (|x1>-|x2>)/sqrt2, which is what lets the class operators fail to
// decohere when no record is kept.
struct TwoSlitHistories {
  std::vector<History> path_then_screen;
  std::vector<History> path_then_record;  // empty when unmarked
  DensityOperator rho;
  IntervalEvolution propagation;
};

inline TwoSlitHistories two_slit_histories(bool marked) {
  std::vector<Subsystem> subs = {Subsystem("path", {"u", "d"}),
                                 Subsystem("screen", {"x1", "x2", "x3"})};
  if (marked) subs.push_back(Subsystem("marker", {"0", "1"}));
  SystemLayout lay(subs);

  // (|u> + |d>)/sqrt2 on a blank screen register, the marker recording the
  // path when switched on
  std::vector<cplx> amps(lay.total_dim(), cplx(0.0, 0.0));
  const double h = 1.0 / std::sqrt(2.0);
  const auto put = [&](std::size_t path) {
    std::vector<std::size_t> digits = {path, 0};
    if (marked) digits.push_back(path);
    amps[lay.compose(digits)] = h;
  };
  put(0);
  put(1);
  StateVector psi(lay, std::move(amps), true);

  // propagation on path x screen: both slit beams land in the same path
  // sector with orthogonal, cell-overlapping screen amplitudes
  SystemLayout ps({Subsystem("path", {"u", "d"}), Subsystem("screen", {"x1", "x2", "x3"})});
  CMatrix v(6);
  v.at(0, 0) = h;   // |u,x1> -> |u>(|x1>+|x2>)/sqrt2
  v.at(1, 0) = h;
  v.at(0, 3) = h;   // |d,x1> -> |u>(|x1>-|x2>)/sqrt2
  v.at(1, 3) = -h;
  v.at(2, 1) = 1.0;  // completion of the frame
  v.at(3, 2) = 1.0;
  v.at(4, 4) = 1.0;
  v.at(5, 5) = 1.0;
  const Operator propagation_full = lift(Operator(ps, v), {"path", "screen"}, lay);
  IntervalEvolution propagation = [propagation_full](double, double) {
    return propagation_full;
  };

  const Operator p_u = lift(projector_onto(StateVector::basis(qubit("q", "u", "d"), {"u"})),
                            {"path"}, lay);
  const Operator p_d = lift(projector_onto(StateVector::basis(qubit("q", "u", "d"), {"d"})),
                            {"path"}, lay);
  const Operator p_mid =
      lift(projector_onto(StateVector::basis(single("s", {"x1", "x2", "x3"}), {"x2"})),
           {"screen"}, lay);

  TwoSlitHistories out{{History{{HistoryStep{0.0, p_u}, HistoryStep{1.0, p_mid}}},
                        History{{HistoryStep{0.0, p_d}, HistoryStep{1.0, p_mid}}}},
                       {},
                       DensityOperator::from_state(psi),
                       std::move(propagation)};
  if (marked) {
    const Operator m0 = lift(projector_onto(StateVector::basis(qubit("m"), {"0"})),
                             {"marker"}, lay);
    const Operator m1 = lift(projector_onto(StateVector::basis(qubit("m"), {"1"})),
                             {"marker"}, lay);
    out.path_then_record = {History{{HistoryStep{0.0, p_u}, HistoryStep{1.0, m0}}},
                            History{{HistoryStep{0.0, p_d}, HistoryStep{1.0, m1}}}};
  }
  return out;
}

// ---- dispatcher ---------------------------------------------------------------

namespace detail {

inline std::vector<double> phase_grid(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = -kPi + 2.0 * kPi * i / (points - 1);
  return g;
}

inline ExperimentReport run_decay(const Scenario& sc) {
  const double lambda = sc.real("lambda", 1.0);
  const EvolvingState s = decay_state(lambda);
  ExperimentReport rep;
  rep.experiment = "decay";
  rep.add_setting("lambda", format_double(lambda));
  const double horizon = 5.0 / lambda;
  const int points = 501;
  std::vector<double> ts(points), cdf(points);
  double norm_dev = 0.0;
  bool monotone = true;
  for (int i = 0; i < points; ++i) {
    ts[i] = horizon * i / (points - 1);
    cdf[i] = detection_cdf(s, ts[i]);
    if (i > 0 && cdf[i] < cdf[i - 1]) monotone = false;
    std::vector<cplx> a = s.amplitude_fn(ts[i]);
    double n2 = 0.0;
    for (const cplx& z : a) n2 += std::norm(z);
    norm_dev = std::max(norm_dev, std::abs(std::sqrt(n2) - 1.0));
  }
  const double t_probe = 1.0 / lambda;
  const double t0 = 0.4 / lambda;
  rep.add_scalar("cdf_at_probe", detection_cdf(s, t_probe));
  rep.add_scalar("cdf_closed_form", 1.0 - std::exp(-lambda * t_probe));
  rep.add_scalar("density_at_probe", detection_density(s, t_probe));
  rep.add_scalar("density_closed_form", lambda * std::exp(-lambda * t_probe));
  rep.add_scalar("conditional_at_probe", conditional_density(s, t_probe, t0));
  rep.add_scalar("conditional_closed_form", lambda * std::exp(-lambda * (t_probe - t0)));
  double unitary_dev = 0.0;
  for (double t : {0.0, 0.3 / lambda, 1.0 / lambda, 5.0 / lambda}) {
    const Operator u = s.evolution(t);
    unitary_dev = std::max(unitary_dev,
                           max_abs_diff(dagger(u.matrix()) * u.matrix(),
                                        CMatrix::identity(u.dim())));
  }
  rep.add_scalar("evolution_unitarity_dev", unitary_dev);
  rep.add_scalar("norm_dev_max", norm_dev);
  rep.add_scalar("cdf_monotone", monotone ? 1.0 : 0.0);
  rep.add_pattern("cdf", scan_pattern(std::move(ts), std::move(cdf)));
  return rep;
}

inline ExperimentReport run_cat(const Scenario&) {
  const EvolvingState s = cat_state();
  ExperimentReport rep;
  rep.experiment = "cat";
  const int points = 501;
  std::vector<double> ts(points), cdf(points);
  double norm_dev = 0.0;
  bool monotone = true;
  for (int i = 0; i < points; ++i) {
    ts[i] = s.t_end * i / (points - 1);
    cdf[i] = detection_cdf(s, ts[i]);
    if (i > 0 && cdf[i] < cdf[i - 1]) monotone = false;
    std::vector<cplx> a = s.amplitude_fn(ts[i]);
    double n2 = 0.0;
    for (const cplx& z : a) n2 += std::norm(z);
    norm_dev = std::max(norm_dev, std::abs(std::sqrt(n2) - 1.0));
  }
  const double probe = kPi / 4.0;
  const double t0 = 0.3;
  rep.add_scalar("cdf_at_probe", detection_cdf(s, probe));
  rep.add_scalar("cdf_closed_form", 0.5 * std::sin(probe) * std::sin(probe));
  rep.add_scalar("density_at_probe", detection_density(s, probe));
  rep.add_scalar("density_closed_form", 0.5 * std::sin(2.0 * probe));
  rep.add_scalar("conditional_at_probe", conditional_density(s, probe, t0));
  rep.add_scalar("conditional_closed_form",
                 std::sin(2.0 * probe) / (1.0 + std::cos(2.0 * t0)));
  const double t0a = kPi / 2.0 - 1e-2;
  const NextIntervalProbability nip = next_interval_probability(s, t0a, 1e-3);
  rep.add_scalar("next_interval_first_order", nip.first_order);
  rep.add_scalar("next_interval_exact", nip.exact);
  rep.add_scalar("next_interval_end_asymptotic", nip.end_asymptotic);
  double unitary_dev = 0.0;
  for (double t : {0.0, 0.4, kPi / 4.0, kPi / 2.0}) {
    const Operator u = s.evolution(t);
    unitary_dev = std::max(unitary_dev,
                           max_abs_diff(dagger(u.matrix()) * u.matrix(),
                                        CMatrix::identity(u.dim())));
  }
  rep.add_scalar("evolution_unitarity_dev", unitary_dev);
  rep.add_scalar("norm_dev_max", norm_dev);
  rep.add_scalar("cdf_monotone", monotone ? 1.0 : 0.0);
  rep.add_pattern("cdf", scan_pattern(std::move(ts), std::move(cdf)));
  return rep;
}

inline ExperimentReport run_passive_zeno(const Scenario& sc) {
  const double duration = sc.real("duration", 1.0);
  const EvolvingState s = passive_zeno_state(duration);
  ExperimentReport rep;
  rep.experiment = "passive_zeno";
  rep.add_setting("duration", format_double(duration));
  const double probe = 0.6 * duration;
  const double t0 = 0.25 * duration;
  rep.add_scalar("density_at_probe", detection_density(s, probe));
  rep.add_scalar("density_closed_form", 1.0 / (2.0 * duration));
  rep.add_scalar("conditional_at_probe", conditional_density(s, probe, t0));
  rep.add_scalar("conditional_closed_form", 1.0 / (2.0 * duration - t0));
  const StateVector leftover = undetected_state(s, duration);
  const StateVector want = StateVector::basis(s.layout, {"d", "0"});
  rep.add_scalar("undetected_final_fidelity", fidelity(leftover, want));
  const int points = 301;
  std::vector<double> ts(points), cdf(points);
  for (int i = 0; i < points; ++i) {
    ts[i] = duration * i / (points - 1);
    cdf[i] = detection_cdf(s, ts[i]);
  }
  rep.add_pattern("cdf", scan_pattern(std::move(ts), std::move(cdf)));
  return rep;
}

inline ExperimentReport run_zeno(const Scenario& sc) {
  const int n = static_cast<int>(sc.integer("measurements", 10));
  const double total = sc.real("total_time", kPi / 2.0);
  ExperimentReport rep;
  rep.experiment = "zeno";
  rep.add_setting("measurements", std::to_string(n));
  rep.add_setting("total_time", format_double(total));
  const double survival = zeno_survival(n, total);
  const double c = std::cos(total / n);
  rep.add_scalar("survival", survival);
  rep.add_scalar("closed_form", std::pow(c * c, n));
  rep.add_scalar("survival_double_n", zeno_survival(2 * n, total));
  return rep;
}

inline ExperimentReport run_nocomm_scenario(const Scenario& sc) {
  const int cases = static_cast<int>(sc.integer("cases", 1000));
  ExperimentReport rep;
  rep.experiment = "nocomm";
  rep.add_setting("cases", std::to_string(cases));
  rep.add_setting("seed", std::to_string(sc.seed));
  const NoCommSweepResult sweep = run_nocomm_sweep(sc.seed, cases);
  rep.add_scalar("cases", sweep.cases);
  rep.add_scalar("max_deviation", sweep.max_deviation);

  // negative control: CNOT from B to A on the Bell state, then H on B
  SystemLayout lay({Subsystem("A", {"0", "1"}), Subsystem("B", {"0", "1"})});
  const StateVector bell =
      (StateVector::basis(lay, {"0", "0"}) + StateVector::basis(lay, {"1", "1"}))
          .normalized_copy();
  CMatrix cnot_b_to_a(4);
  cnot_b_to_a.at(0, 0) = 1.0;  // |00> -> |00>
  cnot_b_to_a.at(3, 1) = 1.0;  // |01> -> |11>
  cnot_b_to_a.at(2, 2) = 1.0;  // |10> -> |10>
  cnot_b_to_a.at(1, 3) = 1.0;  // |11> -> |01>
  const double hs = 1.0 / std::sqrt(2.0);
  CMatrix h_on_b(4);
  h_on_b.at(0, 0) = hs;
  h_on_b.at(0, 1) = hs;
  h_on_b.at(1, 0) = hs;
  h_on_b.at(1, 1) = -hs;
  h_on_b.at(2, 2) = hs;
  h_on_b.at(2, 3) = hs;
  h_on_b.at(3, 2) = hs;
  h_on_b.at(3, 3) = -hs;
  const Operator global(lay, h_on_b * cnot_b_to_a);
  rep.add_scalar("negative_control_deviation", negative_control(bell, global, {"A"}));
  return rep;
}

inline ExperimentReport run_histories(const Scenario& sc) {
  const bool marked = sc.flag("marked", false);
  ExperimentReport rep;
  rep.experiment = "histories_double_slit";
  rep.add_setting("marked", marked ? "true" : "false");
  const TwoSlitHistories setup = two_slit_histories(marked);
  const ConsistencyReport screen_family =
      consistency_matrix(setup.path_then_screen, setup.rho, 1e-10, setup.propagation);
  double max_off = 0.0;
  for (std::size_t i = 0; i < screen_family.count; ++i)
    for (std::size_t j = 0; j < screen_family.count; ++j)
      if (i != j) max_off = std::max(max_off, std::abs(screen_family.matrix.at(i, j)));
  rep.add_scalar("screen_family_max_offdiag", max_off);
  rep.add_scalar("screen_family_consistent", screen_family.consistent ? 1.0 : 0.0);
  for (std::size_t i = 0; i < screen_family.probabilities.size(); ++i)
    rep.add_scalar("screen_family_p" + std::to_string(i), screen_family.probabilities[i]);
  if (marked) {
    const ConsistencyReport record_family =
        consistency_matrix(setup.path_then_record, setup.rho, 1e-10, setup.propagation);
    double rmax = 0.0;
    for (std::size_t i = 0; i < record_family.count; ++i)
      for (std::size_t j = 0; j < record_family.count; ++j)
        if (i != j) rmax = std::max(rmax, std::abs(record_family.matrix.at(i, j)));
    rep.add_scalar("record_family_max_offdiag", rmax);
    rep.add_scalar("record_family_consistent", record_family.consistent ? 1.0 : 0.0);
    for (std::size_t i = 0; i < record_family.probabilities.size(); ++i)
      rep.add_scalar("record_family_p" + std::to_string(i), record_family.probabilities[i]);
  }
  return rep;
}

inline ExperimentReport run_tradeoff_scenario(const Scenario& sc) {
  ExperimentReport rep;
  rep.experiment = "tradeoff";
  const TradeoffResult r = complementarity_tradeoff();
  rep.add_scalar("initial_interference_coeff", r.initial_interference_coeff);
  rep.add_scalar("final_interference_coeff", r.final_interference_coeff);
  rep.add_scalar("correlation_initial", r.correlation_initial);
  rep.add_scalar("correlation_final", r.correlation_measure);
  rep.add_scalar("map_fidelity", r.map_fidelity);
  rep.add_scalar("unitary_dev",
                 max_abs_diff(dagger(r.constructed_unitary.matrix()) *
                                  r.constructed_unitary.matrix(),
                              CMatrix::identity(4)));
  const int pts = static_cast<int>(sc.integer("family_points", 21));
  bool coeff_up = true, corr_down = true;
  TradeoffFamilyPoint prev = complementarity_family(0.0);
  for (int i = 1; i < pts; ++i) {
    const TradeoffFamilyPoint cur = complementarity_family(double(i) / (pts - 1));
    if (cur.interference_coeff <= prev.interference_coeff) coeff_up = false;
    if (cur.correlation >= prev.correlation) corr_down = false;
    prev = cur;
  }
  rep.add_scalar("family_points", pts);
  rep.add_scalar("family_coeff_monotone_up", coeff_up ? 1.0 : 0.0);
  rep.add_scalar("family_corr_monotone_down", corr_down ? 1.0 : 0.0);
  return rep;
}

}  // namespace detail

inline ExperimentReport run(const Scenario& sc) {
  if (sc.experiment == "wheeler")
    return run_wheeler(sc.word("choice") == "interference" ? WheelerChoice::interference
                                                           : WheelerChoice::which_path,
                       sc.screen);
  if (sc.experiment == "double_slit_eraser") {
    std::optional<double> marker;
    if (const SettingValue* v = sc.find("marker"); v && v->index() == 3)
      marker = std::get<Angle>(*v).radians;
    const std::string w = sc.word("eraser", "none");
    EraserKind kind = EraserKind::none;
    double pol_angle = kPi / 4.0;
    if (w == "hwp_upper") kind = EraserKind::hwp_upper;
    else if (w == "hwp_lower") kind = EraserKind::hwp_lower;
    else if (w == "qwp_pair") kind = EraserKind::qwp_pair;
    else if (double a = 0.0; detail::parse_polarizer_word(w, a)) {
      kind = EraserKind::polarizer_filter;
      pol_angle = a;
    }
    return run_double_slit_eraser(marker, kind, pol_angle, sc.screen);
  }
  if (sc.experiment == "herzog")
    return run_herzog(sc.flag("qwp", false), sc.flag("filter", false),
                      detail::phase_grid(static_cast<int>(sc.integer("phase_points", 201))));
  if (sc.experiment == "free_will")
    return run_free_will(sc.word("choice") == "push" ? FreeWillChoice::push
                                                     : FreeWillChoice::not_push,
                         sc.screen);
  if (sc.experiment == "entanglement_swapping")
    return run_entanglement_swapping(sc.word("victor") == "bell" ? VictorChoice::bell
                                                                 : VictorChoice::separable,
                                     sc.seed, static_cast<int>(sc.shots));
  if (sc.experiment == "tradeoff") return detail::run_tradeoff_scenario(sc);
  if (sc.experiment == "brainwash") {
    const std::string w = sc.word("variant");
    BrainwashVariant v = BrainwashVariant::inverse;
    if (w == "alt_unitary") v = BrainwashVariant::alt_unitary;
    else if (w == "beamsplitter_double_pass") v = BrainwashVariant::beamsplitter_double_pass;
    else if (w == "switching_unit") v = BrainwashVariant::switching_unit;
    return brainwash_roundtrip(v);
  }
  if (sc.experiment == "nocomm") return detail::run_nocomm_scenario(sc);
  if (sc.experiment == "decay") return detail::run_decay(sc);
  if (sc.experiment == "cat") return detail::run_cat(sc);
  if (sc.experiment == "passive_zeno") return detail::run_passive_zeno(sc);
  if (sc.experiment == "zeno") return detail::run_zeno(sc);
  if (sc.experiment == "histories_double_slit") return detail::run_histories(sc);
  throw contract_error("run: unknown experiment '" + sc.experiment + "'");
}

// ---- emitters -----------------------------------------------------------------

struct EmitTargets {
  std::ostream* summary = nullptr;          // key=value lines
  std::optional<std::string> out_dir;       // per-pattern CSV files when set
  bool ascii = false;                       // 60-column fringe plots
  std::string prefix;                       // CSV filename prefix
};

namespace detail {

inline std::string format_scalar(double v) {
  char buf[64];
  if (v == 0.0 || std::abs(v) >= 1e-4)
    std::snprintf(buf, sizeof buf, "%.6f", v);
  else
    std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline void write_csv(const std::string& path, const ScreenPattern& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw contract_error("emit: cannot open '" + path + "' for writing");
  out << "x,intensity\n";
  for (std::size_t i = 0; i < p.xs.size(); ++i)
    out << format_double(p.xs[i]) << "," << format_double(p.intensity[i]) << "\n";
}

inline void ascii_plot(std::ostream& os, const std::string& name, const ScreenPattern& p) {
  constexpr int kCols = 60;
  constexpr int kRows = 12;
  std::vector<double> col(kCols, 0.0);
  std::vector<int> hits(kCols, 0);
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    int c = static_cast<int>(static_cast<double>(i) * kCols / p.xs.size());
    if (c >= kCols) c = kCols - 1;
    col[c] += p.intensity[i];
    ++hits[c];
  }
  double peak = 0.0;
  for (int c = 0; c < kCols; ++c) {
    if (hits[c]) col[c] /= hits[c];
    peak = std::max(peak, col[c]);
  }
  os << "pattern " << name << " (peak " << format_scalar(peak) << ")\n";
  for (int r = kRows; r >= 1; --r) {
    const double threshold = (r - 0.5) / kRows;
    os << "  ";
    for (int c = 0; c < kCols; ++c)
      os << ((peak > 0.0 && col[c] / peak >= threshold) ? '#' : ' ');
    os << "\n";
  }
}

}  // namespace detail

inline void emit(const ExperimentReport& rep, const EmitTargets& targets) {
  if (targets.summary) {
    std::ostream& os = *targets.summary;
    os << "experiment=" << rep.experiment << "\n";
    for (const auto& [k, v] : rep.settings) os << k << "=" << v << "\n";
    for (const auto& [k, v] : rep.scalars) os << k << "=" << detail::format_scalar(v) << "\n";
    if (!rep.notes.empty()) os << "notes=" << rep.notes << "\n";
    if (targets.out_dir)
      for (const auto& [name, p] : rep.patterns) {
        (void)p;
        os << "pattern_" << name << "=" << *targets.out_dir << "/" << targets.prefix << "_"
           << name << ".csv\n";
      }
    if (targets.ascii)
      for (const auto& [name, p] : rep.patterns) detail::ascii_plot(os, name, p);
  }
  if (targets.out_dir)
    for (const auto& [name, p] : rep.patterns)
      detail::write_csv(*targets.out_dir + "/" + targets.prefix + "_" + name + ".csv", p);
}

}  // namespace qeraser
