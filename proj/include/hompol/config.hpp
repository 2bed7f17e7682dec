#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hompol/homtrace.hpp"
#include "hompol/lattice.hpp"
#include "hompol/polarization.hpp"

namespace hompol {

/// One or more invalid configuration entries, each prefixed by its key path.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
  static std::string join(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& l : lines) {
      if (!out.empty()) out += '\n';
      out += l;
    }
    return out;
  }

  std::vector<std::string> diagnostics_;
};

struct AxisSpec {
  double min;
  double max;
  int points;
};

/// Everything a CLI run needs. Defaults reproduce the fabricated device.
struct RunConfig {
  CouplerParams coupler{0.0, 0.0, 0.1035, 0.02433, 15.0};
  LatticeGeometry lattice{};
  double lattice_z_max = 15.0;
  int lattice_samples = 151;

  DelayModel delay{0.972, 300.0};
  AxisSpec tau{-1500.0, 1500.0, 301};
  std::vector<double> hom_thetas{0.0, 9.0 * std::numbers::pi / 180.0, 18.0 * std::numbers::pi / 180.0,
                                 27.0 * std::numbers::pi / 180.0, 36.0 * std::numbers::pi / 180.0,
                                 45.0 * std::numbers::pi / 180.0};

  double predict_theta = std::numbers::pi / 4.0;

  AxisSpec scan_theta{0.0, std::numbers::pi / 2.0, 91};
  AxisSpec scan_phase{0.0, std::numbers::pi / 2.0, 91};
  bool scan_apply_source_visibility = false;

  std::string polarizer_samples; // empty: use synthesized samples
  double polarizer_synth_phase = std::numbers::pi / 4.0;
  double polarizer_synth_noise = 0.0;
  int polarizer_synth_points = 37;

  std::uint64_t seed = 1;
  std::string out = "out";
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_integer(std::string_view s) {
  Int v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

inline std::optional<bool> to_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

} // namespace config_detail

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0; // no "-0"
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

namespace config_detail {

constexpr double deg = std::numbers::pi / 180.0;

// Key table: how to read each canonical key and how to print it back.
struct Field {
  std::string key;
  bool angle; // also accepts <key>_deg
  std::function<std::optional<std::string>(RunConfig&, std::string_view, double scale)> read;
  std::function<std::string(const RunConfig&)> write;
};

inline Field number(std::string key, bool angle, double RunConfig::*m) {
  return {std::move(key), angle,
          [m](RunConfig& c, std::string_view v, double scale) -> std::optional<std::string> {
            const auto d = to_double(v);
            if (!d) return "expected a finite number, got '" + std::string(v) + "'";
            c.*m = *d * scale;
            return std::nullopt;
          },
          [m](const RunConfig& c) { return format_double(c.*m); }};
}

template <class Owner>
Field nested_number(std::string key, bool angle, Owner RunConfig::*owner, double Owner::*m) {
  return {std::move(key), angle,
          [owner, m](RunConfig& c, std::string_view v, double scale) -> std::optional<std::string> {
            const auto d = to_double(v);
            if (!d) return "expected a finite number, got '" + std::string(v) + "'";
            (c.*owner).*m = *d * scale;
            return std::nullopt;
          },
          [owner, m](const RunConfig& c) { return format_double((c.*owner).*m); }};
}

template <class Owner>
Field nested_int(std::string key, Owner RunConfig::*owner, int Owner::*m) {
  return {std::move(key), false,
          [owner, m](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
            const auto i = to_integer<int>(v);
            if (!i) return "expected an integer, got '" + std::string(v) + "'";
            (c.*owner).*m = *i;
            return std::nullopt;
          },
          [owner, m](const RunConfig& c) { return std::to_string((c.*owner).*m); }};
}

inline Field integer(std::string key, int RunConfig::*m) {
  return {std::move(key), false,
          [m](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
            const auto i = to_integer<int>(v);
            if (!i) return "expected an integer, got '" + std::string(v) + "'";
            c.*m = *i;
            return std::nullopt;
          },
          [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(nested_number("coupler.beta_h", false, &RunConfig::coupler, &CouplerParams::beta_h));
    f.push_back(nested_number("coupler.beta_v", false, &RunConfig::coupler, &CouplerParams::beta_v));
    f.push_back(nested_number("coupler.gamma_h", false, &RunConfig::coupler, &CouplerParams::gamma_h));
    f.push_back(nested_number("coupler.gamma_v", false, &RunConfig::coupler, &CouplerParams::gamma_v));
    f.push_back(nested_number("coupler.length_z", false, &RunConfig::coupler, &CouplerParams::length_z));

    f.push_back(nested_int("lattice.n_sinks_per_side", &RunConfig::lattice, &LatticeGeometry::n_sinks_per_side));
    f.push_back(nested_number("lattice.couple_target_h", false, &RunConfig::lattice, &LatticeGeometry::couple_target_h));
    f.push_back(nested_number("lattice.couple_target_v", false, &RunConfig::lattice, &LatticeGeometry::couple_target_v));
    f.push_back(nested_number("lattice.couple_array_h", false, &RunConfig::lattice, &LatticeGeometry::couple_array_h));
    f.push_back(nested_number("lattice.couple_array_v", false, &RunConfig::lattice, &LatticeGeometry::couple_array_v));
    f.push_back({"lattice.two_sided", false,
                 [](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
                   const auto b = to_bool(v);
                   if (!b) return "expected true or false, got '" + std::string(v) + "'";
                   c.lattice.two_sided = *b;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::string(c.lattice.two_sided ? "true" : "false"); }});
    f.push_back(number("lattice.z_max", false, &RunConfig::lattice_z_max));
    f.push_back(integer("lattice.n_samples", &RunConfig::lattice_samples));

    f.push_back(nested_number("delay.source_visibility", false, &RunConfig::delay, &DelayModel::source_visibility));
    f.push_back(nested_number("delay.coherence_time_sigma", false, &RunConfig::delay, &DelayModel::coherence_time_sigma));
    f.push_back(nested_number("delay.tau_min", false, &RunConfig::tau, &AxisSpec::min));
    f.push_back(nested_number("delay.tau_max", false, &RunConfig::tau, &AxisSpec::max));
    f.push_back(nested_int("delay.tau_points", &RunConfig::tau, &AxisSpec::points));

    f.push_back({"hom.thetas", true,
                 [](RunConfig& c, std::string_view v, double scale) -> std::optional<std::string> {
                   std::vector<double> out;
                   std::string item;
                   std::stringstream ss{std::string(v)};
                   while (std::getline(ss, item, ',')) {
                     const auto t = trim(item);
                     if (t.empty()) continue;
                     const auto d = to_double(t);
                     if (!d) return "expected a comma-separated list of numbers, got '" + t + "'";
                     out.push_back(*d * scale);
                   }
                   c.hom_thetas = std::move(out);
                   return std::nullopt;
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.hom_thetas.size(); ++i) {
                     if (i) s += ", ";
                     s += format_double(c.hom_thetas[i]);
                   }
                   return s;
                 }});

    f.push_back(number("predict.theta", true, &RunConfig::predict_theta));

    f.push_back(nested_number("scan.theta_min", true, &RunConfig::scan_theta, &AxisSpec::min));
    f.push_back(nested_number("scan.theta_max", true, &RunConfig::scan_theta, &AxisSpec::max));
    f.push_back(nested_int("scan.theta_points", &RunConfig::scan_theta, &AxisSpec::points));
    f.push_back(nested_number("scan.phase_min", true, &RunConfig::scan_phase, &AxisSpec::min));
    f.push_back(nested_number("scan.phase_max", true, &RunConfig::scan_phase, &AxisSpec::max));
    f.push_back(nested_int("scan.phase_points", &RunConfig::scan_phase, &AxisSpec::points));
    f.push_back({"scan.apply_source_visibility", false,
                 [](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
                   const auto b = to_bool(v);
                   if (!b) return "expected true or false, got '" + std::string(v) + "'";
                   c.scan_apply_source_visibility = *b;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::string(c.scan_apply_source_visibility ? "true" : "false"); }});

    f.push_back({"polarizer.samples", false,
                 [](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
                   c.polarizer_samples = std::string(v);
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return c.polarizer_samples; }});
    f.push_back(number("polarizer.synth_phase", true, &RunConfig::polarizer_synth_phase));
    f.push_back(number("polarizer.synth_noise", false, &RunConfig::polarizer_synth_noise));
    f.push_back(integer("polarizer.synth_points", &RunConfig::polarizer_synth_points));

    f.push_back({"run.seed", false,
                 [](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
                   const auto s = to_integer<std::uint64_t>(v);
                   if (!s) return "expected an unsigned 64-bit integer, got '" + std::string(v) + "'";
                   c.seed = *s;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    f.push_back({"run.out", false,
                 [](RunConfig& c, std::string_view v, double) -> std::optional<std::string> {
                   c.out = std::string(v);
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return c.out; }});
    return f;
  }();
  return table;
}

} // namespace config_detail

/// Collects every invariant violation as "key.path: message".
inline std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errs;
  auto check = [&errs](bool ok, const char* key, const char* msg) {
    if (!ok) errs.push_back(std::string(key) + ": " + msg);
  };
  check(c.coupler.gamma_h >= 0.0, "coupler.gamma_h", "must be >= 0");
  check(c.coupler.gamma_v >= 0.0, "coupler.gamma_v", "must be >= 0");
  check(c.coupler.length_z >= 0.0, "coupler.length_z", "must be >= 0");

  check(c.lattice.n_sinks_per_side >= 1, "lattice.n_sinks_per_side", "must be >= 1");
  check(c.lattice.couple_target_h >= 0.0, "lattice.couple_target_h", "must be >= 0");
  check(c.lattice.couple_target_v >= 0.0, "lattice.couple_target_v", "must be >= 0");
  check(c.lattice.couple_array_h >= 0.0, "lattice.couple_array_h", "must be >= 0");
  check(c.lattice.couple_array_v >= 0.0, "lattice.couple_array_v", "must be >= 0");
  check(c.lattice_z_max > 0.0, "lattice.z_max", "must be > 0");
  check(c.lattice_samples >= 2, "lattice.n_samples", "must be >= 2");

  check(c.delay.source_visibility >= 0.0 && c.delay.source_visibility <= 1.0, "delay.source_visibility",
        "must lie in [0, 1]");
  check(c.delay.coherence_time_sigma > 0.0, "delay.coherence_time_sigma", "must be > 0");
  check(c.tau.min <= c.tau.max, "delay.tau_max", "must be >= delay.tau_min");
  check(c.tau.points >= 1, "delay.tau_points", "must be >= 1");

  check(c.scan_theta.points >= 1, "scan.theta_points", "must be >= 1");
  check(c.scan_phase.points >= 1, "scan.phase_points", "must be >= 1");
  check(c.scan_theta.min <= c.scan_theta.max, "scan.theta_max", "must be >= scan.theta_min");
  check(c.scan_phase.min <= c.scan_phase.max, "scan.phase_max", "must be >= scan.phase_min");

  check(c.polarizer_synth_noise >= 0.0, "polarizer.synth_noise", "must be >= 0");
  check(c.polarizer_synth_points >= 3, "polarizer.synth_points", "must be >= 3");
  check(!c.out.empty(), "run.out", "must not be empty");
  return errs;
}

/// Parses `section.key = value` lines. '#' starts a comment. Keys listed as angles
/// also accept a `_deg` suffix. `coupler.phase[_deg]` sets delta_beta * length_z
/// with zero mean propagation constant and may not be combined with explicit betas.
/// Throws ConfigError listing every offending key.
inline RunConfig parse_config(std::string_view text) {
  using namespace config_detail;
  RunConfig cfg;
  std::vector<std::string> errs;
  std::map<std::string, int> seen;
  std::optional<double> phase;

  std::stringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errs.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));

    double scale = 1.0;
    std::string canonical = key;
    constexpr std::string_view suffix = "_deg";
    if (key.size() > suffix.size() && key.ends_with(suffix)) {
      canonical = key.substr(0, key.size() - suffix.size());
      scale = deg;
    }
    if (seen[canonical]++ > 0) {
      errs.push_back(key + ": duplicate key");
      continue;
    }

    if (canonical == "coupler.phase") {
      const auto d = to_double(value);
      if (!d) errs.push_back(key + ": expected a finite number, got '" + value + "'");
      else phase = *d * scale;
      continue;
    }

    const Field* field = nullptr;
    for (const auto& f : fields())
      if (f.key == canonical) field = &f;
    if (!field || (scale != 1.0 && !field->angle)) {
      errs.push_back(key + ": unknown key");
      continue;
    }
    if (auto err = field->read(cfg, value, scale)) errs.push_back(key + ": " + *err);
  }

  if (phase) {
    if (seen.count("coupler.beta_h") || seen.count("coupler.beta_v"))
      errs.push_back("coupler.phase: cannot be combined with coupler.beta_h / coupler.beta_v");
    else if (!(cfg.coupler.length_z > 0.0))
      errs.push_back("coupler.phase: requires coupler.length_z > 0");
    else
      cfg.coupler = CouplerParams::with_phase(cfg.coupler.gamma_h, cfg.coupler.gamma_v, *phase, cfg.coupler.length_z);
  }

  for (auto& e : validate(cfg)) errs.push_back(std::move(e));
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

/// Canonical form: every key, fixed order, radians, shortest round-trip numbers.
inline std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : config_detail::fields()) {
    const std::string s = f.key.substr(0, f.key.find('.'));
    if (s != section) {
      if (!section.empty()) out += '\n';
      out += "# " + s + "\n";
      section = s;
    }
    out += f.key + " = " + f.write(cfg) + "\n";
  }
  return out;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace hompol
