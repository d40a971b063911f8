// uavsep command line tool.
//
//   uavsep analyze    — per-component separation tables (CSV)
//   uavsep simulate   — seeded Monte Carlo navigation runs (JSON + CSV)
//   uavsep separation — pairwise separation breakdown for two vehicles
//
// Exit codes: 0 success, 1 usage/config error, 2 mid-air collision under a
// policy that must be safe (standard, candidate1, candidate2).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavsep/analysis.hpp"
#include "uavsep/config.hpp"
#include "uavsep/report.hpp"
#include "uavsep/separation.hpp"
#include "uavsep/simulator.hpp"

namespace {

using namespace uavsep;

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw config::ConfigError(std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw config::ConfigError(std::string(what) + ": empty list");
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_analyze(const std::string& sigma_csv, const std::string& dt_csv,
                const std::string& cat_csv, const std::string& out_dir, int samples,
                std::uint64_t seed) {
    const auto sigmas = parse_double_list(sigma_csv, "--sigma");
    const auto dts = parse_double_list(dt_csv, "--dt");
    std::vector<int> categories;
    for (double c : parse_double_list(cat_csv, "--categories")) {
        categories.push_back(static_cast<int>(c));
    }

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    const auto quantile_rows = analysis::loc_error_table(sigmas);
    write_text_file(dir / "analysis_loc_error_quantiles.csv",
                    report::loc_error_quantiles_csv(quantile_rows));
    write_text_file(dir / "analysis_loc_error_pdf.csv",
                    report::loc_error_pdf_csv(analysis::loc_error_pdf_curves(sigmas, 200)));
    write_text_file(dir / "analysis_mobility.csv",
                    report::mobility_csv(analysis::mobility_table(categories, dts)));
    write_text_file(
        dir / "analysis_unmac.csv",
        report::unmac_csv(analysis::unmac_distribution_table(sigmas, dts, samples, seed)));

    std::cout << "sigma_m  mean_m   q999_m\n";
    for (const auto& r : quantile_rows) {
        std::printf("%-8.2f %-8.3f %-8.3f\n", r.sigma_i, r.mean, r.q999);
    }
    std::cout << "tables written to " << out_dir << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<int> runs_override,
                 const std::string& policy_csv, std::optional<std::uint64_t> seed_override,
                 const std::string& out_dir) {
    config::SimulateSpec spec = config::load_simulate_spec(config_path);
    if (runs_override) {
        if (*runs_override < 1) throw config::ConfigError("--runs: must be >= 1");
        spec.runs = *runs_override;
    }
    if (!policy_csv.empty()) {
        spec.policies.clear();
        std::stringstream ss(policy_csv);
        std::string name;
        while (std::getline(ss, name, ',')) spec.policies.push_back(rid::parse_format(name));
        if (spec.policies.empty()) throw config::ConfigError("--policy: empty list");
    }
    if (seed_override) {
        spec.scenario.fleet_seed = *seed_override;
        spec.scenario.noise_seed = num::mix_seed(*seed_override, 1);
    }

    std::vector<sim::MonteCarloResult> results;
    results.reserve(spec.policies.size());
    bool unsafe_mac = false;
    for (auto policy : spec.policies) {
        sim::ScenarioConfig cfg = spec.scenario;
        cfg.policy = policy;
        auto r = sim::run_monte_carlo(cfg, spec.runs, spec.threads);
        std::printf("%-11s runs=%d arrived=%d collided=%d stalled=%d mac_runs=%d median=%ss\n",
                    rid::format_name(policy).c_str(), spec.runs, r.arrived, r.collided,
                    r.stalled, r.runs_with_mac,
                    report::format_fixed(r.median_time, 2).c_str());
        if (r.runs_with_mac > 0 && policy != rid::MessageFormat::SnmacBaseline) {
            unsafe_mac = true;
        }
        results.push_back(std::move(r));
    }

    report::write_report_files(out_dir, spec, results);
    std::cout << "report written to " << out_dir << "\n";
    if (unsafe_mac) {
        std::cerr << "error: mid-air collision under a policy that must be safe\n";
        return 2;
    }
    return 0;
}

int cmd_separation(double af_i, double af_j, double eps_i, double eps_j, double v_i,
                   double v_j, double dt, bool as_json) {
    sep::UavSpec spec_i;
    spec_i.airframe_diameter = af_i;
    sep::UavSpec spec_j;
    spec_j.airframe_diameter = af_j;
    const auto b = sep::pairwise_unmac(spec_i, spec_j, eps_i, eps_j, v_i, v_j, dt);
    if (as_json) {
        nlohmann::json j{{"mac_radius_m", b.mac_radius},
                         {"loc_term_m", b.loc_term},
                         {"mobility_term_m", b.mobility_term},
                         {"unmac_radius_m", b.unmac_radius}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("MAC radius      %8.3f m\n", b.mac_radius);
        std::printf("localization    %8.3f m\n", b.loc_term);
        std::printf("mobility        %8.3f m\n", b.mobility_term);
        std::printf("uNMAC radius    %8.3f m\n", b.unmac_radius);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV separation modeling and Remote ID-informed RVO simulation"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "write per-component separation tables");
    std::string sigma_csv = "1.9,3.5,4.85,10";
    std::string dt_csv = "0.01,0.05,0.1,0.2,0.5,1.0";
    std::string cat_csv = "1,2,3,4";
    std::string analyze_out = "analysis";
    int samples = 200000;
    std::uint64_t analyze_seed = 7;
    analyze->add_option("--sigma", sigma_csv, "GNSS sigma list, meters");
    analyze->add_option("--dt", dt_csv, "broadcast interval list, seconds");
    analyze->add_option("--categories", cat_csv, "speed category list (1-4)");
    analyze->add_option("--out", analyze_out, "output directory");
    analyze->add_option("--samples", samples, "Monte Carlo samples per table cell");
    analyze->add_option("--seed", analyze_seed, "Monte Carlo seed");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run seeded Monte Carlo navigation");
    std::string config_path;
    std::string policy_csv;
    std::string sim_out = "out";
    std::optional<int> runs_override;
    std::optional<std::uint64_t> seed_override;
    simulate->add_option("--config", config_path, "config JSON path")->required();
    simulate->add_option("--runs", runs_override, "override run count");
    simulate->add_option("--policy", policy_csv, "comma-separated policy list");
    simulate->add_option("--seed", seed_override, "override base seed");
    simulate->add_option("--out", sim_out, "output directory");

    // separation
    auto* separation = app.add_subcommand("separation", "pairwise separation breakdown");
    double af_i = 1.0, af_j = 1.0, eps_i = 0.0, eps_j = 0.0, v_i = 0.0, v_j = 0.0;
    double dt = 0.1;
    bool as_json = false;
    separation->add_option("--airframe-i", af_i, "airframe diameter i, m")->required();
    separation->add_option("--airframe-j", af_j, "airframe diameter j, m")->required();
    separation->add_option("--eps-i", eps_i, "localization error i, m");
    separation->add_option("--eps-j", eps_j, "localization error j, m");
    separation->add_option("--v-i", v_i, "speed i, m/s");
    separation->add_option("--v-j", v_j, "speed j, m/s");
    separation->add_option("--dt", dt, "broadcast interval, s");
    separation->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (analyze->parsed()) {
            return cmd_analyze(sigma_csv, dt_csv, cat_csv, analyze_out, samples, analyze_seed);
        }
        if (simulate->parsed()) {
            return cmd_simulate(config_path, runs_override, policy_csv, seed_override, sim_out);
        }
        return cmd_separation(af_i, af_j, eps_i, eps_j, v_i, v_j, dt, as_json);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
