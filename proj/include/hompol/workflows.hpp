#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hompol/biphoton.hpp"
#include "hompol/characterize.hpp"
#include "hompol/config.hpp"
#include "hompol/grid.hpp"
#include "hompol/homtrace.hpp"
#include "hompol/io.hpp"
#include "hompol/lattice.hpp"
#include "hompol/scan.hpp"

namespace hompol {

enum class Subcommand { lattice_decay, hom_trace, visibility_scan, polarizer_synth, polarizer_fit, predict, reproduce };
enum class OutputFormat { csv, json };

inline std::optional<Subcommand> parse_subcommand(std::string_view name) {
  if (name == "lattice-decay") return Subcommand::lattice_decay;
  if (name == "hom-trace") return Subcommand::hom_trace;
  if (name == "visibility-scan") return Subcommand::visibility_scan;
  if (name == "polarizer-synth") return Subcommand::polarizer_synth;
  if (name == "polarizer-fit") return Subcommand::polarizer_fit;
  if (name == "predict") return Subcommand::predict;
  if (name == "reproduce") return Subcommand::reproduce;
  return std::nullopt;
}

/// Noisy crossed-polarizer scan over phi in [0, pi/2]; ratios are clipped to [0, 1].
inline std::vector<PolarizerSample> synthesize_polarizer_samples(double phase, double noise, int points,
                                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<PolarizerSample> out;
  for (double phi : linspace(0.0, std::numbers::pi / 2.0, points)) {
    double r = crossed_polarizer_intensity(phi, phase);
    if (noise > 0.0) r = std::clamp(r + noise * gauss(rng), 0.0, 1.0);
    out.push_back({phi, r});
  }
  return out;
}

namespace workflow_detail {

inline io::SummaryRow summarize(const CouplerParams& params, BasisAngle angle) {
  const auto r = coincidence_rates(params, angle, params.length_z);
  io::SummaryRow row{angle.theta, r.c_ind, r.c_dis, std::nullopt};
  if (r.c_dis > 0.0) row.visibility = visibility(r.c_ind, r.c_dis);
  return row;
}

inline std::filesystem::path emit(const std::filesystem::path& dir, const std::string& name, std::string_view content,
                                  std::vector<std::filesystem::path>& written) {
  const auto path = dir / name;
  io::write_atomic(path, content);
  written.push_back(path);
  return path;
}

inline std::string indexed(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%02zu.%s", stem, i, ext);
  return buf;
}

inline void lattice_decay(const RunConfig& cfg, const std::filesystem::path& dir, OutputFormat fmt,
                          std::vector<std::filesystem::path>& written) {
  nlohmann::json doc;
  nlohmann::json rates = nlohmann::json::array();
  std::string rates_csv = "polarization,z_cm,transmission,gamma_per_cm\n";
  for (const auto pol : {Polarization::H, Polarization::V}) {
    const char* tag = pol == Polarization::H ? "h" : "v";
    const DecayCurve curve = decay_curve(cfg.lattice, pol, cfg.lattice_z_max, cfg.lattice_samples);
    const double transmission = curve.back().survival;
    std::optional<double> rate;
    if (transmission > 0.0) rate = effective_rate(std::min(transmission, 1.0), cfg.lattice_z_max);

    const std::string label = pol == Polarization::H ? "H" : "V";
    rates_csv += label + "," + format_double(cfg.lattice_z_max) + "," + format_double(transmission) + "," +
                 (rate ? format_double(*rate) : std::string("undefined")) + "\n";
    rates.push_back({{"polarization", label},
                     {"z_cm", cfg.lattice_z_max},
                     {"transmission", transmission},
                     {"gamma_per_cm", rate ? nlohmann::json(*rate) : nlohmann::json(nullptr)}});
    if (fmt == OutputFormat::csv) emit(dir, std::string("decay_") + tag + ".csv", io::decay_csv(curve), written);
    else doc[std::string("decay_") + tag] = io::to_json(curve);
  }
  if (fmt == OutputFormat::csv) {
    emit(dir, "effective_rates.csv", rates_csv, written);
  } else {
    doc["effective_rates"] = rates;
    emit(dir, "lattice_decay.json", io::dump(doc), written);
  }
}

inline void hom_traces(const RunConfig& cfg, const std::filesystem::path& dir, OutputFormat fmt,
                       std::vector<std::filesystem::path>& written) {
  const auto taus = linspace(cfg.tau.min, cfg.tau.max, cfg.tau.points);
  std::vector<io::SummaryRow> summary;
  std::vector<HomTrace> family;
  for (double t : cfg.hom_thetas) {
    summary.push_back(summarize(cfg.coupler, {t}));
    // An undefined baseline leaves an empty trace; the summary row says why.
    family.push_back(summary.back().visibility ? hom_trace(cfg.coupler, {t}, cfg.delay, taus) : HomTrace{});
  }

  if (fmt == OutputFormat::csv) {
    for (std::size_t i = 0; i < family.size(); ++i) emit(dir, indexed("hom_trace", i, "csv"), io::trace_csv(family[i]), written);
    emit(dir, "hom_family.csv", io::coincidence_csv(summary), written);
    return;
  }
  nlohmann::json traces = nlohmann::json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    nlohmann::json entry = io::to_json(summary[i]);
    entry["trace"] = io::to_json(family[i]);
    traces.push_back(entry);
  }
  emit(dir, "hom_trace.json", io::dump({{"traces", traces}}), written);
}

inline void visibility_scan(const RunConfig& cfg, const std::filesystem::path& dir, OutputFormat fmt,
                            std::vector<std::filesystem::path>& written) {
  const auto thetas = linspace(cfg.scan_theta.min, cfg.scan_theta.max, cfg.scan_theta.points);
  const auto phases = linspace(cfg.scan_phase.min, cfg.scan_phase.max, cfg.scan_phase.points);
  const double scale = cfg.scan_apply_source_visibility ? cfg.delay.source_visibility : 1.0;
  const auto grid = visibility_grid(cfg.coupler, thetas, phases, scale);
  if (fmt == OutputFormat::csv) emit(dir, "visibility_grid.csv", io::grid_csv(grid), written);
  else emit(dir, "visibility_grid.json", io::dump({{"cells", io::to_json(grid)}}), written);
}

inline std::vector<PolarizerSample> configured_samples(const RunConfig& cfg) {
  if (cfg.polarizer_samples.empty())
    return synthesize_polarizer_samples(cfg.polarizer_synth_phase, cfg.polarizer_synth_noise,
                                        cfg.polarizer_synth_points, cfg.seed);
  return io::parse_samples_csv(io::read_file(cfg.polarizer_samples));
}

inline void polarizer_synth(const RunConfig& cfg, const std::filesystem::path& dir,
                            std::vector<std::filesystem::path>& written) {
  const auto samples = synthesize_polarizer_samples(cfg.polarizer_synth_phase, cfg.polarizer_synth_noise,
                                                    cfg.polarizer_synth_points, cfg.seed);
  emit(dir, "polarizer_samples.csv", io::samples_csv(samples), written);
}

inline void polarizer_fit(const RunConfig& cfg, const std::filesystem::path& dir, OutputFormat fmt,
                          std::vector<std::filesystem::path>& written) {
  const auto est = estimate_phase(configured_samples(cfg));
  if (fmt == OutputFormat::csv) emit(dir, "phase_estimate.csv", io::phase_csv(est), written);
  else emit(dir, "phase_estimate.json", io::dump(io::to_json(est)), written);
}

inline void predict(const RunConfig& cfg, const std::filesystem::path& dir, OutputFormat fmt,
                    std::vector<std::filesystem::path>& written) {
  const auto r = summarize(cfg.coupler, {cfg.predict_theta});
  if (fmt == OutputFormat::csv) emit(dir, "prediction.csv", io::coincidence_csv({&r, 1}), written);
  else emit(dir, "prediction.json", io::dump(io::to_json(r)), written);
}

} // namespace workflow_detail

/// Runs one subcommand and returns the files it wrote, in write order.
///
/// Without an explicit format, `predict` writes JSON and everything else CSV.
/// `reproduce` runs every figure workflow; its polarizer fit reads back the
/// samples it just synthesized.
inline std::vector<std::filesystem::path> run(Subcommand cmd, const RunConfig& cfg, const std::filesystem::path& out_dir,
                                              std::optional<OutputFormat> format = std::nullopt) {
  namespace wd = workflow_detail;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir.string());

  const OutputFormat fmt = format.value_or(cmd == Subcommand::predict ? OutputFormat::json : OutputFormat::csv);
  std::vector<std::filesystem::path> written;
  switch (cmd) {
  case Subcommand::lattice_decay: wd::lattice_decay(cfg, out_dir, fmt, written); break;
  case Subcommand::hom_trace: wd::hom_traces(cfg, out_dir, fmt, written); break;
  case Subcommand::visibility_scan: wd::visibility_scan(cfg, out_dir, fmt, written); break;
  case Subcommand::polarizer_synth: wd::polarizer_synth(cfg, out_dir, written); break;
  case Subcommand::polarizer_fit: wd::polarizer_fit(cfg, out_dir, fmt, written); break;
  case Subcommand::predict: wd::predict(cfg, out_dir, fmt, written); break;
  case Subcommand::reproduce: {
    const OutputFormat f = format.value_or(OutputFormat::csv);
    wd::lattice_decay(cfg, out_dir, f, written);
    wd::hom_traces(cfg, out_dir, f, written);
    wd::visibility_scan(cfg, out_dir, f, written);
    wd::polarizer_synth(cfg, out_dir, written);
    RunConfig fit = cfg;
    fit.polarizer_samples = (out_dir / "polarizer_samples.csv").string();
    wd::polarizer_fit(fit, out_dir, f, written);
    wd::predict(cfg, out_dir, format.value_or(OutputFormat::json), written);
    break;
  }
  }
  return written;
}

} // namespace hompol
