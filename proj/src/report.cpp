#include "uavsep/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uavsep::report {

std::string format_fixed(double value, int digits) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                   digits);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json summary_json(const sim::MonteCarloResult& r, int runs) {
    return nlohmann::json{
        {"policy", rid::format_name(r.policy)},
        {"runs", runs},
        {"arrived", r.arrived},
        {"collided", r.collided},
        {"stalled", r.stalled},
        {"runs_with_mac", r.runs_with_mac},
        {"mac_rate", runs > 0 ? static_cast<double>(r.runs_with_mac) / runs : 0.0},
        {"total_macs", r.total_macs},
        {"mission_time_median_s", r.median_time},
        {"mission_time_mean_s", r.mean_time},
        {"mission_time_p95_s", r.p95_time},
    };
}

} // namespace

nlohmann::json build_report(const config::SimulateSpec& spec,
                            const std::vector<sim::MonteCarloResult>& results) {
    nlohmann::json summaries = nlohmann::json::array();
    nlohmann::json per_run = nlohmann::json::array();
    for (const auto& r : results) {
        summaries.push_back(summary_json(r, spec.runs));
        for (std::size_t run = 0; run < r.outcomes.size(); ++run) {
            const auto& o = r.outcomes[run];
            nlohmann::json statuses = nlohmann::json::array();
            nlohmann::json times = nlohmann::json::array();
            for (std::size_t i = 0; i < o.final_status.size(); ++i) {
                statuses.push_back(sim::status_name(o.final_status[i]));
                if (o.arrival_times[i]) {
                    times.push_back(*o.arrival_times[i]);
                } else {
                    times.push_back(nullptr);
                }
            }
            double min_sep = std::numeric_limits<double>::infinity();
            for (double d : o.min_separation_trace) min_sep = std::min(min_sep, d);
            nlohmann::json row{
                {"policy", rid::format_name(r.policy)},
                {"run", run},
                {"fleet_seed", o.fleet_seed},
                {"noise_seed", o.noise_seed},
                {"status", statuses},
                {"arrival_times_s", times},
                {"mac_count", o.mac_count},
                {"end_time_s", o.end_time},
            };
            if (std::isfinite(min_sep)) row["min_separation_m"] = min_sep;
            per_run.push_back(std::move(row));
        }
    }

    return nlohmann::json{
        {"tool_version", kToolVersion},
        {"config", config::simulate_spec_to_json(spec)},
        {"summaries", summaries},
        {"per_run", per_run},
    };
}

std::string build_runs_csv(const config::SimulateSpec& spec,
                           const std::vector<sim::MonteCarloResult>& results) {
    std::ostringstream out;
    out << "scenario,policy,run,uav,airframe_m,cruise_mps,status,arrival_time_s,"
           "run_mac_count,run_min_separation_m\n";
    const std::string scenario = sim::layout_name(spec.scenario.layout);
    for (const auto& r : results) {
        const std::string policy = rid::format_name(r.policy);
        for (std::size_t run = 0; run < r.outcomes.size(); ++run) {
            const auto& o = r.outcomes[run];
            double min_sep = std::numeric_limits<double>::infinity();
            for (double d : o.min_separation_trace) min_sep = std::min(min_sep, d);
            const std::string min_sep_str =
                std::isfinite(min_sep) ? format_fixed(min_sep) : std::string();

            // Re-derive the per-run fleet for the static columns.
            const auto fleet = sim::generate_fleet(static_cast<int>(o.final_status.size()),
                                                   o.fleet_seed, spec.scenario.fleet);
            for (std::size_t i = 0; i < o.final_status.size(); ++i) {
                out << scenario << ',' << policy << ',' << run << ',' << i << ','
                    << format_fixed(fleet[i].airframe_diameter) << ','
                    << format_fixed(fleet[i].cruise_speed) << ','
                    << sim::status_name(o.final_status[i]) << ',';
                if (o.arrival_times[i]) out << format_fixed(*o.arrival_times[i]);
                out << ',' << o.mac_count << ',' << min_sep_str << '\n';
            }
        }
    }
    return out.str();
}

void write_report_files(const std::filesystem::path& out_dir,
                        const config::SimulateSpec& spec,
                        const std::vector<sim::MonteCarloResult>& results) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream json_out(out_dir / "report.json", std::ios::binary);
        if (!json_out) throw std::runtime_error("cannot write " + (out_dir / "report.json").string());
        json_out << build_report(spec, results).dump(2) << '\n';
    }
    {
        std::ofstream csv_out(out_dir / "runs.csv", std::ios::binary);
        if (!csv_out) throw std::runtime_error("cannot write " + (out_dir / "runs.csv").string());
        csv_out << build_runs_csv(spec, results);
    }
}

std::string loc_error_quantiles_csv(const std::vector<analysis::LocErrorRow>& rows) {
    std::ostringstream out;
    out << "sigma_i_m,sigma_j_m,mean_m,q999_m\n";
    for (const auto& r : rows) {
        out << format_fixed(r.sigma_i, 2) << ',' << format_fixed(r.sigma_j, 2) << ','
            << format_fixed(r.mean) << ',' << format_fixed(r.q999) << '\n';
    }
    return out.str();
}

std::string loc_error_pdf_csv(const std::vector<analysis::PdfPoint>& points) {
    std::ostringstream out;
    out << "sigma_m,x_m,density_per_m\n";
    for (const auto& p : points) {
        out << format_fixed(p.sigma, 2) << ',' << format_fixed(p.x) << ','
            << format_fixed(p.density, 9) << '\n';
    }
    return out.str();
}

std::string mobility_csv(const std::vector<analysis::MobilityRow>& rows) {
    std::ostringstream out;
    out << "category,dt_s,mean_m,q997_m\n";
    for (const auto& r : rows) {
        out << r.category << ',' << format_fixed(r.dt, 3) << ',' << format_fixed(r.mean)
            << ',' << format_fixed(r.q997) << '\n';
    }
    return out.str();
}

std::string unmac_csv(const std::vector<analysis::UnmacRow>& rows) {
    std::ostringstream out;
    out << "sigma_m,dt_s,mean_m,p50_m,p90_m,p99_m,p999_m\n";
    for (const auto& r : rows) {
        out << format_fixed(r.sigma, 2) << ',' << format_fixed(r.dt, 3) << ','
            << format_fixed(r.mean) << ',' << format_fixed(r.p50) << ','
            << format_fixed(r.p90) << ',' << format_fixed(r.p99) << ','
            << format_fixed(r.p999) << '\n';
    }
    return out.str();
}

} // namespace uavsep::report
