#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hompol/biphoton.hpp"
#include "hompol/characterize.hpp"
#include "hompol/config.hpp"
#include "hompol/homtrace.hpp"
#include "hompol/lattice.hpp"
#include "hompol/scan.hpp"

namespace hompol {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace io {

inline std::string decay_csv(const DecayCurve& curve) {
  std::string s = "z_cm,survival_probability\n";
  for (const auto& p : curve) s += format_double(p.z_cm) + "," + format_double(p.survival) + "\n";
  return s;
}

/// CoincidenceResult whose visibility may be undefined (vanishing baseline).
struct SummaryRow {
  double theta_rad = 0.0;
  double c_ind = 0.0;
  double c_dis = 0.0;
  std::optional<double> visibility;

  static SummaryRow from(const CoincidenceResult& r) { return {r.theta_rad, r.c_ind, r.c_dis, r.visibility}; }
};

inline std::string coincidence_csv(std::span<const SummaryRow> rows) {
  std::string s = "theta_rad,c_ind,c_dis,visibility\n";
  for (const auto& r : rows)
    s += format_double(r.theta_rad) + "," + format_double(r.c_ind) + "," + format_double(r.c_dis) + "," +
         (r.visibility ? format_double(*r.visibility) : std::string("undefined")) + "\n";
  return s;
}

inline std::string trace_csv(const HomTrace& trace) {
  std::string s = "tau_fs,normalized_coincidence\n";
  for (const auto& p : trace) s += format_double(p.tau_fs) + "," + format_double(p.normalized_coincidence) + "\n";
  return s;
}

/// Undefined cells are written as the literal `undefined`.
inline std::string grid_csv(const VisibilityGrid& grid) {
  std::string s = "theta_rad,phase_rad,visibility\n";
  for (std::size_t i = 0; i < grid.theta_axis.size(); ++i)
    for (std::size_t j = 0; j < grid.phase_axis.size(); ++j) {
      const auto& v = grid.at(i, j);
      s += format_double(grid.theta_axis[i]) + "," + format_double(grid.phase_axis[j]) + "," +
           (v ? format_double(*v) : std::string("undefined")) + "\n";
    }
  return s;
}

inline std::string phase_csv(const PhaseEstimate& e) {
  return "phase_rad,residual\n" + format_double(e.phase) + "," + format_double(e.residual) + "\n";
}

inline std::string samples_csv(std::span<const PolarizerSample> samples) {
  std::string s = "phi_rad,ratio\n";
  for (const auto& p : samples) s += format_double(p.phi) + "," + format_double(p.ratio) + "\n";
  return s;
}

/// Reads `phi_rad,ratio` CSV. Throws InputError naming the offending line.
inline std::vector<PolarizerSample> parse_samples_csv(std::string_view text) {
  std::stringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<PolarizerSample> out;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = config_detail::trim(line);
    if (t.empty()) continue;
    if (!header) {
      if (t != "phi_rad,ratio") throw InputError("samples line " + std::to_string(lineno) + ": expected header 'phi_rad,ratio'");
      header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos) throw InputError("samples line " + std::to_string(lineno) + ": expected two columns");
    const auto phi = config_detail::to_double(config_detail::trim(std::string_view(t).substr(0, comma)));
    const auto ratio = config_detail::to_double(config_detail::trim(std::string_view(t).substr(comma + 1)));
    if (!phi || !ratio) throw InputError("samples line " + std::to_string(lineno) + ": malformed number");
    out.push_back({*phi, *ratio});
  }
  if (!header) throw InputError("samples file is empty");
  return out;
}

inline nlohmann::json to_json(const SummaryRow& r) {
  return {{"theta_rad", r.theta_rad},
          {"c_ind", r.c_ind},
          {"c_dis", r.c_dis},
          {"visibility", r.visibility ? nlohmann::json(*r.visibility) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const DecayCurve& curve) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : curve) a.push_back({{"z_cm", p.z_cm}, {"survival_probability", p.survival}});
  return a;
}

inline nlohmann::json to_json(const HomTrace& trace) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : trace) a.push_back({{"tau_fs", p.tau_fs}, {"normalized_coincidence", p.normalized_coincidence}});
  return a;
}

inline nlohmann::json to_json(const VisibilityGrid& grid) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.theta_axis.size(); ++i)
    for (std::size_t j = 0; j < grid.phase_axis.size(); ++j) {
      const auto& v = grid.at(i, j);
      a.push_back({{"theta_rad", grid.theta_axis[i]},
                   {"phase_rad", grid.phase_axis[j]},
                   {"visibility", v ? nlohmann::json(*v) : nlohmann::json(nullptr)}});
    }
  return a;
}

inline nlohmann::json to_json(const PhaseEstimate& e) { return {{"phase_rad", e.phase}, {"residual", e.residual}}; }

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace io
} // namespace hompol
