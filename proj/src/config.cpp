#include "uavsep/config.hpp"

#include <fstream>
#include <set>

namespace uavsep::config {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "/" + key + ": expected a number");
    return v.get<double>();
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

} // namespace

SimulateSpec simulate_spec_from_json(const json& j) {
    require_keys(j, "/",
                 {"scenario", "fleet", "policy_disks", "selection", "policies", "runs",
                  "seeds", "threads"});

    SimulateSpec spec;
    sim::ScenarioConfig& sc = spec.scenario;

    if (!j.contains("scenario")) throw ConfigError("/: missing required key 'scenario'");
    const json& s = j.at("scenario");
    require_keys(s, "/scenario",
                 {"layout", "circle_radius", "square_side", "obstacle", "sensing_range",
                  "dt", "arrival_tolerance", "max_sim_time"});
    if (!s.contains("layout")) throw ConfigError("/scenario: missing required key 'layout'");
    try {
        sc.layout = sim::parse_layout(s.at("layout").get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("/scenario/layout: ") + e.what());
    }
    sc.circle_radius = get_number(s, "/scenario", "circle_radius", sc.circle_radius);
    sc.square_side = get_number(s, "/scenario", "square_side", sc.square_side);
    sc.sensing_range = get_number(s, "/scenario", "sensing_range", sc.sensing_range);
    sc.dt = get_number(s, "/scenario", "dt", sc.dt);
    sc.arrival_tolerance = get_number(s, "/scenario", "arrival_tolerance", sc.arrival_tolerance);
    sc.max_sim_time = get_number(s, "/scenario", "max_sim_time", sc.max_sim_time);

    if (s.contains("obstacle")) {
        const json& o = s.at("obstacle");
        if (o.is_null()) {
            sc.obstacle.reset();
        } else {
            require_keys(o, "/scenario/obstacle", {"center", "half_extent"});
            sim::ObstacleSpec obs;
            if (o.contains("center")) {
                const auto& c = o.at("center");
                check(c.is_array() && c.size() == 2,
                      "/scenario/obstacle/center: expected [x, y]");
                obs.center = {c.at(0).get<double>(), c.at(1).get<double>()};
            }
            obs.half_extent = get_number(o, "/scenario/obstacle", "half_extent", 20.0);
            check(obs.half_extent > 0.0, "/scenario/obstacle/half_extent: must be > 0");
            sc.obstacle = obs;
        }
    } else if (sc.layout == sim::Layout::Square24) {
        sc.obstacle = sim::ObstacleSpec{Vec2{}, 20.0};
    }

    if (j.contains("fleet")) {
        const json& f = j.at("fleet");
        require_keys(f, "/fleet",
                     {"airframe_min", "airframe_max", "accuracy_sigma", "speed_category"});
        sc.fleet.airframe_lo = get_number(f, "/fleet", "airframe_min", sc.fleet.airframe_lo);
        sc.fleet.airframe_hi = get_number(f, "/fleet", "airframe_max", sc.fleet.airframe_hi);
        sc.fleet.accuracy_sigma =
            get_number(f, "/fleet", "accuracy_sigma", sc.fleet.accuracy_sigma);
        if (f.contains("speed_category")) {
            const int c = f.at("speed_category").get<int>();
            check(c >= 1 && c <= 4, "/fleet/speed_category: must be 1..4");
            sc.fleet.speed = sep::speed_categories()[static_cast<std::size_t>(c - 1)];
        }
        check(sc.fleet.airframe_lo > 0.0 && sc.fleet.airframe_hi > sc.fleet.airframe_lo,
              "/fleet: need 0 < airframe_min < airframe_max");
        check(sc.fleet.accuracy_sigma > 0.0, "/fleet/accuracy_sigma: must be > 0");
    }
    sc.fleet.broadcast_interval = sc.dt;

    if (j.contains("policy_disks")) {
        const json& p = j.at("policy_disks");
        require_keys(p, "/policy_disks", {"af_max", "eps_upper_bound"});
        sc.af_max = get_number(p, "/policy_disks", "af_max", sc.af_max);
        sc.eps_upper_bound = get_number(p, "/policy_disks", "eps_upper_bound", sc.eps_upper_bound);
        check(sc.af_max > 0.0, "/policy_disks/af_max: must be > 0");
        check(sc.eps_upper_bound > 0.0, "/policy_disks/eps_upper_bound: must be > 0");
    }

    if (j.contains("selection")) {
        const json& sel = j.at("selection");
        require_keys(sel, "/selection", {"directions", "speed_levels"});
        if (sel.contains("directions")) {
            check(sel.at("directions").is_number_integer(),
                  "/selection/directions: expected an integer");
            sc.selection.directions = sel.at("directions").get<int>();
        }
        if (sel.contains("speed_levels")) {
            check(sel.at("speed_levels").is_number_integer(),
                  "/selection/speed_levels: expected an integer");
            sc.selection.speed_levels = sel.at("speed_levels").get<int>();
        }
        check(sc.selection.directions >= 4, "/selection/directions: must be >= 4");
        check(sc.selection.speed_levels >= 1, "/selection/speed_levels: must be >= 1");
    }

    if (j.contains("policies")) {
        const json& p = j.at("policies");
        check(p.is_array() && !p.empty(), "/policies: expected a non-empty array");
        spec.policies.clear();
        for (const auto& name : p) {
            try {
                spec.policies.push_back(rid::parse_format(name.get<std::string>()));
            } catch (const std::exception& e) {
                throw ConfigError(std::string("/policies: ") + e.what());
            }
        }
    }

    if (j.contains("runs")) {
        check(j.at("runs").is_number_integer(), "/runs: expected an integer");
        spec.runs = j.at("runs").get<int>();
    }
    check(spec.runs >= 1, "/runs: must be >= 1");

    if (j.contains("seeds")) {
        const json& seeds = j.at("seeds");
        require_keys(seeds, "/seeds", {"fleet", "noise"});
        auto read_seed = [](const json& v, const char* where) {
            const bool ok = v.is_number_unsigned() ||
                            (v.is_number_integer() && v.get<std::int64_t>() >= 0);
            if (!ok) throw ConfigError(std::string(where) + ": expected a non-negative integer");
            return v.get<std::uint64_t>();
        };
        if (seeds.contains("fleet")) sc.fleet_seed = read_seed(seeds.at("fleet"), "/seeds/fleet");
        if (seeds.contains("noise")) sc.noise_seed = read_seed(seeds.at("noise"), "/seeds/noise");
    }

    if (j.contains("threads")) {
        check(j.at("threads").is_number_integer() && j.at("threads").get<int>() >= 0,
              "/threads: expected an integer >= 0");
        spec.threads = j.at("threads").get<int>();
    }

    check(sc.dt > 0.0, "/scenario/dt: must be > 0");
    check(sc.sensing_range > 0.0, "/scenario/sensing_range: must be > 0");
    check(sc.arrival_tolerance > 0.0, "/scenario/arrival_tolerance: must be > 0");
    check(sc.max_sim_time > sc.dt, "/scenario/max_sim_time: must exceed dt");
    check(sc.circle_radius > 0.0, "/scenario/circle_radius: must be > 0");
    check(sc.square_side > 0.0, "/scenario/square_side: must be > 0");
    return spec;
}

nlohmann::json simulate_spec_to_json(const SimulateSpec& spec) {
    const sim::ScenarioConfig& sc = spec.scenario;
    json scenario{
        {"layout", sim::layout_name(sc.layout)},
        {"circle_radius", sc.circle_radius},
        {"square_side", sc.square_side},
        {"sensing_range", sc.sensing_range},
        {"dt", sc.dt},
        {"arrival_tolerance", sc.arrival_tolerance},
        {"max_sim_time", sc.max_sim_time},
    };
    if (sc.obstacle) {
        scenario["obstacle"] = {{"center", {sc.obstacle->center.x, sc.obstacle->center.y}},
                                {"half_extent", sc.obstacle->half_extent}};
    } else {
        scenario["obstacle"] = nullptr;
    }

    int category = 3;
    const auto& cats = sep::speed_categories();
    for (std::size_t i = 0; i < cats.size(); ++i) {
        if (cats[i].v_cruise == sc.fleet.speed.v_cruise && cats[i].v_max == sc.fleet.speed.v_max) {
            category = static_cast<int>(i + 1);
        }
    }

    json policies = json::array();
    for (auto p : spec.policies) policies.push_back(rid::format_name(p));

    return json{
        {"scenario", scenario},
        {"fleet",
         {{"airframe_min", sc.fleet.airframe_lo},
          {"airframe_max", sc.fleet.airframe_hi},
          {"accuracy_sigma", sc.fleet.accuracy_sigma},
          {"speed_category", category}}},
        {"policy_disks", {{"af_max", sc.af_max}, {"eps_upper_bound", sc.eps_upper_bound}}},
        {"selection",
         {{"directions", sc.selection.directions}, {"speed_levels", sc.selection.speed_levels}}},
        {"policies", policies},
        {"runs", spec.runs},
        {"seeds", {{"fleet", sc.fleet_seed}, {"noise", sc.noise_seed}}},
        {"threads", spec.threads},
    };
}

SimulateSpec load_simulate_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    try {
        return simulate_spec_from_json(j);
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError("config error: " + std::string(e.what()));
    }
}

} // namespace uavsep::config
