#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sawphoton/config.hpp"
#include "sawphoton/design.hpp"

namespace sawphoton::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;
inline constexpr int kExitVerifyFailure = 4;

/// Closed-form device report: quantized current, wavelength, screening,
/// i-region length, maximum injection frequency, minimum divider and the
/// emitted-count pmf at t = T, each with SI value and paper-unit rendering.
nlohmann::json analytic_report(const RunConfig& config, double epsilon);

/// Accuracy budget plus minimum divider for the configured device.
nlohmann::json design_report(const RunConfig& config, double epsilon);

/// Runs the experiment and writes emissions.csv, detections.csv,
/// counts.csv, g2.csv, phase.csv and summary.json into out_dir. Returns the
/// summary document. Identical (config, seed) produce byte-identical files.
nlohmann::json simulate_to_directory(const RunConfig& config,
                                     const std::filesystem::path& out_dir);

design::SweepRequest parse_grid_text(const std::string& text);
design::SweepRequest parse_grid_file(const std::string& path);

/// Cartesian sweep driven by a grid file; writes one CSV with a mandatory
/// header, axis columns first.
void sweep_to_csv(const RunConfig& config, const design::SweepRequest& request,
                  const std::filesystem::path& csv_path, double epsilon);

/// Re-derives every closed-form device number and checks it against the
/// published value; prints one PASS/FAIL line per check.
bool verify_paper_numbers(std::ostream& out);

}  // namespace sawphoton::io
