#include "uavsep/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "uavsep/numerics.hpp"

namespace uavsep::sim {

std::string layout_name(Layout l) {
    return l == Layout::Circle8 ? "circle8" : "square24";
}

Layout parse_layout(const std::string& name) {
    if (name == "circle8") return Layout::Circle8;
    if (name == "square24") return Layout::Square24;
    throw std::invalid_argument("unknown layout: " + name);
}

std::string status_name(UavStatus s) {
    switch (s) {
        case UavStatus::Active: return "active";
        case UavStatus::Arrived: return "arrived";
        case UavStatus::Collided: return "collided";
    }
    return "unknown";
}

std::vector<sep::UavSpec> generate_fleet(int n, std::uint64_t seed, const FleetModel& model) {
    if (n < 1) throw std::invalid_argument("generate_fleet: n must be >= 1");
    num::Rng rng(seed);
    std::vector<sep::UavSpec> fleet;
    fleet.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sep::UavSpec spec;
        spec.airframe_diameter = rng.uniform(model.airframe_lo, model.airframe_hi);
        spec.speed = model.speed;
        spec.accuracy = {model.accuracy_sigma, "fleet"};
        spec.broadcast_interval = model.broadcast_interval;
        // Cruise speed: Gaussian population model truncated to (0, v_max].
        double cruise;
        do {
            cruise = rng.normal(model.speed.v_cruise, model.speed.sigma_v());
        } while (!(cruise > 0.0 && cruise <= model.speed.v_max));
        spec.cruise_speed = cruise;
        fleet.push_back(spec);
    }
    return fleet;
}

std::vector<UavState> build_scenario(const ScenarioConfig& cfg,
                                     std::span<const sep::UavSpec> fleet) {
    const int n = cfg.agent_count();
    if (static_cast<int>(fleet.size()) != n) {
        throw std::invalid_argument("build_scenario: fleet size does not match layout");
    }

    std::vector<UavState> agents(static_cast<std::size_t>(n));
    if (cfg.layout == Layout::Circle8) {
        for (int i = 0; i < n; ++i) {
            const double angle = 2.0 * M_PI * i / n;
            agents[static_cast<std::size_t>(i)].true_position =
                Vec2{cfg.circle_radius * std::cos(angle), cfg.circle_radius * std::sin(angle)};
        }
    } else {
        // 24 agents, 6 per side, walking the perimeter from the lower-left
        // corner counter-clockwise.
        const double h = 0.5 * cfg.square_side;
        const double spacing = 4.0 * cfg.square_side / n;
        for (int i = 0; i < n; ++i) {
            const double s = spacing * i;
            const int side = static_cast<int>(s / cfg.square_side);
            const double along = s - side * cfg.square_side;
            Vec2 p;
            switch (side) {
                case 0: p = {-h + along, -h}; break;
                case 1: p = {h, -h + along}; break;
                case 2: p = {h - along, h}; break;
                default: p = {-h, h - along}; break;
            }
            agents[static_cast<std::size_t>(i)].true_position = p;
        }
    }

    for (int i = 0; i < n; ++i) {
        auto& a = agents[static_cast<std::size_t>(i)];
        a.spec = fleet[static_cast<std::size_t>(i)];
        a.goal = -a.true_position;  // opposite side, reflected through the center
        a.reported_position = a.true_position;
        a.control_station = a.true_position;
        a.velocity = Vec2{};
        a.status = UavStatus::Active;
    }
    return agents;
}

double swept_min_distance(Vec2 a_from, Vec2 a_to, Vec2 b_from, Vec2 b_to) {
    const Vec2 d0 = a_from - b_from;
    const Vec2 dd = (a_to - b_to) - d0;
    const double q = dd.norm2();
    double s = 0.0;
    if (q > 0.0) s = std::clamp(-d0.dot(dd) / q, 0.0, 1.0);
    return (d0 + dd * s).norm();
}

std::optional<MacEvent> detect_mac(const UavState& state_i, const UavState& state_j,
                                   Vec2 prev_i, Vec2 prev_j, int idx_i, int idx_j,
                                   double time) {
    const double mac_radius =
        0.5 * (state_i.spec.airframe_diameter + state_j.spec.airframe_diameter);
    const double d = swept_min_distance(prev_i, state_i.true_position, prev_j,
                                        state_j.true_position);
    if (d < mac_radius) return MacEvent{time, idx_i, idx_j, d};
    return std::nullopt;
}

Simulation::Simulation(const ScenarioConfig& cfg, std::span<const sep::UavSpec> fleet,
                       std::uint64_t noise_seed)
    : Simulation(cfg, build_scenario(cfg, fleet), noise_seed) {}

Simulation::Simulation(const ScenarioConfig& cfg, std::vector<UavState> agents,
                       std::uint64_t noise_seed)
    : cfg_(cfg),
      agents_(std::move(agents)),
      broadcasts_(agents_.size()),
      disk_radii_(agents_.size(), 0.0),
      new_velocities_(agents_.size()),
      noise_(noise_seed),
      noise_seed_(noise_seed) {
    if (!(cfg_.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(cfg_.sensing_range > 0.0)) throw std::invalid_argument("sensing range must be > 0");
    if (agents_.empty()) throw std::invalid_argument("no agents");
    if (cfg_.layout == Layout::Square24 && !cfg_.obstacle) {
        cfg_.obstacle = ObstacleSpec{Vec2{}, 20.0};
    }
}

void Simulation::step() {
    const double dt = cfg_.dt;
    const auto policy = cfg_.disk_policy();
    const auto wire = rid::wire_format_for(cfg_.policy);
    const std::size_t n = agents_.size();

    // (1) Fresh localization fixes, broadcast through the wire codec.
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents_[i];
        if (a.status != UavStatus::Active) continue;
        a.reported_position = a.true_position + noise_.radial_error(a.spec.accuracy.sigma);

        rid::RemoteIdMessage msg;
        msg.uav_id[0] = 'u';
        msg.uav_id[1] = static_cast<std::uint8_t>(i);
        msg.timestamp = time_;
        msg.position = a.reported_position;
        msg.velocity = a.velocity;
        msg.control_station = a.control_station;
        if (wire != rid::MessageFormat::Standard) msg.loc_error = a.spec.accuracy.three_sigma();
        if (wire == rid::MessageFormat::Candidate2) msg.airframe = a.spec.airframe_diameter;
        broadcasts_[i] = rid::decode(rid::encode(msg, wire));
        disk_radii_[i] = rid::disk_radius(policy, broadcasts_[i], dt);
    }

    // (2) Velocity selection on the frozen broadcast snapshot.
    std::vector<rvo::NeighborConstraint> neighbors;
    std::vector<rvo::ObstacleConstraint> obstacles;
    neighbors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents_[i];
        if (a.status != UavStatus::Active) continue;

        neighbors.clear();
        obstacles.clear();
        const Vec2 own_fix = broadcasts_[i].position;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || agents_[j].status != UavStatus::Active) continue;
            if (distance(own_fix, broadcasts_[j].position) > cfg_.sensing_range) continue;
            neighbors.push_back({broadcasts_[j].position, broadcasts_[j].velocity,
                                 disk_radii_[i] + disk_radii_[j]});
        }
        if (cfg_.obstacle) {
            obstacles.push_back({cfg_.obstacle->center,
                                 cfg_.obstacle->circumscribed_radius() + disk_radii_[i]});
        }

        rvo::AgentKinematics kin;
        kin.position = own_fix;
        kin.velocity = a.velocity;
        kin.radius = disk_radii_[i];
        kin.v_max = a.spec.speed.v_max;
        kin.v_cruise = a.spec.cruise_speed;
        kin.goal = a.goal;
        new_velocities_[i] = rvo::select_velocity(kin, neighbors, obstacles, cfg_.selection);
    }

    // (3) Integrate true positions.
    std::vector<Vec2> prev(n);
    std::vector<bool> moved(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents_[i];
        if (a.status != UavStatus::Active) continue;
        prev[i] = a.true_position;
        a.velocity = new_velocities_[i];
        a.true_position += a.velocity * dt;
        moved[i] = true;
    }

    const double t_end = time_ + dt;

    // (4) Swept MAC check on true positions; a collided pair drops out of all
    // further checks immediately.
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (!moved[i] || agents_[i].status == UavStatus::Collided) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!moved[j] || agents_[j].status == UavStatus::Collided) continue;
            if (agents_[i].status == UavStatus::Collided) break;
            const double d = swept_min_distance(prev[i], agents_[i].true_position, prev[j],
                                                agents_[j].true_position);
            min_sep = std::min(min_sep, d);
            const double mac_radius = 0.5 * (agents_[i].spec.airframe_diameter +
                                             agents_[j].spec.airframe_diameter);
            if (d < mac_radius) {
                mac_events_.push_back(
                    {t_end, static_cast<int>(i), static_cast<int>(j), d});
                agents_[i].status = UavStatus::Collided;
                agents_[j].status = UavStatus::Collided;
                agents_[i].velocity = Vec2{};
                agents_[j].velocity = Vec2{};
            }
        }
    }
    if (std::isfinite(min_sep)) min_separation_trace_.push_back(min_sep);

    // (5) Arrivals.
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents_[i];
        if (a.status != UavStatus::Active) continue;
        if (distance(a.true_position, a.goal) <= cfg_.arrival_tolerance) {
            a.status = UavStatus::Arrived;
            a.arrival_time = t_end;
            a.velocity = Vec2{};
        }
    }

    time_ = t_end;
}

bool Simulation::finished() const {
    if (time_ >= cfg_.max_sim_time - 1e-9) return true;
    return std::none_of(agents_.begin(), agents_.end(), [](const UavState& a) {
        return a.status == UavStatus::Active;
    });
}

SimOutcome Simulation::run() {
    while (!finished()) step();
    return outcome();
}

SimOutcome Simulation::outcome() const {
    SimOutcome out;
    out.policy = cfg_.policy;
    out.fleet_seed = cfg_.fleet_seed;
    out.noise_seed = noise_seed_;
    out.final_status.reserve(agents_.size());
    out.arrival_times.reserve(agents_.size());
    for (const auto& a : agents_) {
        out.final_status.push_back(a.status);
        out.arrival_times.push_back(a.arrival_time);
        if (a.status == UavStatus::Active) ++out.stalled;
    }
    out.mac_events = mac_events_;
    out.mac_count = static_cast<int>(mac_events_.size());
    out.min_separation_trace = min_separation_trace_;
    out.end_time = time_;
    return out;
}

double percentile(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (sorted.size() == 1) return sorted[0];
    const double idx = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg, int runs, int threads) {
    if (runs < 1) throw std::invalid_argument("run_monte_carlo: runs must be >= 1");

    MonteCarloResult result;
    result.policy = cfg.policy;
    result.outcomes.resize(static_cast<std::size_t>(runs));

    auto run_one = [&](int r) {
        ScenarioConfig run_cfg = cfg;
        run_cfg.fleet_seed = num::mix_seed(cfg.fleet_seed, static_cast<std::uint64_t>(r));
        const std::uint64_t noise =
            num::mix_seed(cfg.noise_seed, static_cast<std::uint64_t>(r));
        const auto fleet = generate_fleet(cfg.agent_count(), run_cfg.fleet_seed, cfg.fleet);
        Simulation sim(run_cfg, fleet, noise);
        result.outcomes[static_cast<std::size_t>(r)] = sim.run();
    };

    unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(runs));
    if (workers <= 1) {
        for (int r = 0; r < runs; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) run_one(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& o : result.outcomes) {
        if (o.mac_count > 0) ++result.runs_with_mac;
        result.total_macs += o.mac_count;
        result.stalled += o.stalled;
        for (std::size_t i = 0; i < o.final_status.size(); ++i) {
            if (o.final_status[i] == UavStatus::Arrived) {
                ++result.arrived;
                result.pooled_times.push_back(*o.arrival_times[i]);
            } else if (o.final_status[i] == UavStatus::Collided) {
                ++result.collided;
            }
        }
    }
    std::sort(result.pooled_times.begin(), result.pooled_times.end());
    if (!result.pooled_times.empty()) {
        result.median_time = percentile(result.pooled_times, 0.5);
        result.mean_time = std::accumulate(result.pooled_times.begin(),
                                           result.pooled_times.end(), 0.0) /
                           static_cast<double>(result.pooled_times.size());
        result.p95_time = percentile(result.pooled_times, 0.95);
    }
    return result;
}

} // namespace uavsep::sim
