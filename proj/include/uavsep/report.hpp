#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsep/analysis.hpp"
#include "uavsep/config.hpp"
#include "uavsep/simulator.hpp"

// Machine-readable outputs: report.json (config echo, per-policy summaries,
// per-run rows with flight times) and runs.csv (one row per flight) for
// `simulate`; analysis_*.csv tables for `analyze`. Number formatting is
// locale-independent and stable so repeated invocations are byte-identical.

namespace uavsep::report {

inline constexpr const char* kToolVersion = "0.1.0";

// Fixed-notation, locale-independent double formatting.
std::string format_fixed(double value, int digits = 6);

nlohmann::json build_report(const config::SimulateSpec& spec,
                            const std::vector<sim::MonteCarloResult>& results);

std::string build_runs_csv(const config::SimulateSpec& spec,
                           const std::vector<sim::MonteCarloResult>& results);

// Writes report.json and runs.csv into out_dir (created if needed).
void write_report_files(const std::filesystem::path& out_dir,
                        const config::SimulateSpec& spec,
                        const std::vector<sim::MonteCarloResult>& results);

std::string loc_error_quantiles_csv(const std::vector<analysis::LocErrorRow>& rows);
std::string loc_error_pdf_csv(const std::vector<analysis::PdfPoint>& points);
std::string mobility_csv(const std::vector<analysis::MobilityRow>& rows);
std::string unmac_csv(const std::vector<analysis::UnmacRow>& rows);

} // namespace uavsep::report
