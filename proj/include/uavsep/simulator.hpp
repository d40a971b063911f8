#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavsep/numerics.hpp"
#include "uavsep/remoteid.hpp"
#include "uavsep/rvo.hpp"
#include "uavsep/separation.hpp"
#include "uavsep/vec2.hpp"

// Discrete-time multi-agent execution loop, scenario construction, fleet
// generation, MAC detection and the Monte Carlo harness.

namespace uavsep::sim {

enum class Layout { Circle8, Square24 };

std::string layout_name(Layout l);
Layout parse_layout(const std::string& name);

struct ObstacleSpec {
    Vec2 center;
    double half_extent = 20.0;  // m, square obstacle half side

    // The square is represented for avoidance as its circumscribed disk.
    double circumscribed_radius() const { return half_extent * std::sqrt(2.0); }
};

// Population model the fleet is drawn from.
struct FleetModel {
    double airframe_lo = 0.1;   // m
    double airframe_hi = 7.5;   // m
    double accuracy_sigma = 10.0;  // m, worst-case GPS class
    sep::SpeedCategory speed = sep::speed_categories()[2];  // category 3
    double broadcast_interval = 0.1;  // s
};

struct ScenarioConfig {
    Layout layout = Layout::Circle8;
    double circle_radius = 200.0;  // m
    // Perimeter spacing (4*side/24) must clear the candidate-policy pairwise
    // disk (~64 m) plus the reported-position noise band, or the start line
    // sits permanently inside its own constraints.
    double square_side = 600.0;    // m
    std::optional<ObstacleSpec> obstacle;  // defaults on for square24
    double sensing_range = 400.0;  // m, k_size
    double dt = 0.1;               // s, physics step == broadcast interval
    rid::MessageFormat policy = rid::MessageFormat::Candidate2;
    rid::SafetyDiskPolicy disk_policy() const { return {policy, af_max, eps_upper_bound}; }
    double af_max = 7.5;            // m
    double eps_upper_bound = 80.0;  // m
    std::uint64_t fleet_seed = 1;
    std::uint64_t noise_seed = 2;
    double arrival_tolerance = 5.0;  // m
    double max_sim_time = 600.0;     // s
    FleetModel fleet;
    rvo::SelectionParams selection;

    int agent_count() const { return layout == Layout::Circle8 ? 8 : 24; }
};

enum class UavStatus { Active, Arrived, Collided };

std::string status_name(UavStatus s);

struct UavState {
    sep::UavSpec spec;
    Vec2 true_position;
    Vec2 reported_position;
    Vec2 velocity;
    Vec2 goal;
    Vec2 control_station;
    UavStatus status = UavStatus::Active;
    std::optional<double> arrival_time;  // s, present iff Arrived
};

struct MacEvent {
    double time = 0.0;  // s
    int uav_a = 0;
    int uav_b = 0;
    double distance = 0.0;  // m, minimum true distance within the step
};

struct SimOutcome {
    rid::MessageFormat policy = rid::MessageFormat::Candidate2;
    std::uint64_t fleet_seed = 0;
    std::uint64_t noise_seed = 0;
    std::vector<UavStatus> final_status;
    std::vector<std::optional<double>> arrival_times;  // s, per UAV
    std::vector<MacEvent> mac_events;
    int mac_count = 0;
    std::vector<double> min_separation_trace;  // m, per step with >= 2 active
    double end_time = 0.0;  // s
    int stalled = 0;        // agents still active at max_sim_time
};

// Airframes ~ U(lo, hi), accuracy sigma fixed, cruise speed ~ N(mu_v, sigma_v^2)
// truncated to (0, v_max]. Deterministic per seed.
std::vector<sep::UavSpec> generate_fleet(int n, std::uint64_t seed,
                                         const FleetModel& model = {});

// Start/goal placement. circle8: agents evenly spaced on the circle, goal at
// the antipode. square24: 6 agents per side of the square perimeter, goal at
// the point reflection through the center; obstacle at the center.
std::vector<UavState> build_scenario(const ScenarioConfig& cfg,
                                     std::span<const sep::UavSpec> fleet);

// Minimum distance between two linearly moving points over one step.
double swept_min_distance(Vec2 a_from, Vec2 a_to, Vec2 b_from, Vec2 b_to);

// MAC iff the swept true distance drops below (d_AF_i + d_AF_j) / 2.
std::optional<MacEvent> detect_mac(const UavState& state_i, const UavState& state_j,
                                   Vec2 prev_i, Vec2 prev_j, int idx_i, int idx_j,
                                   double time);

class Simulation {
  public:
    Simulation(const ScenarioConfig& cfg, std::span<const sep::UavSpec> fleet,
               std::uint64_t noise_seed);
    // Custom initial states (e.g. a head-on pair); bypasses build_scenario.
    Simulation(const ScenarioConfig& cfg, std::vector<UavState> agents,
               std::uint64_t noise_seed);

    // One broadcast/decide/move/check cycle.
    void step();
    bool finished() const;
    SimOutcome run();  // steps until finished, then returns the outcome

    double time() const { return time_; }
    const std::vector<UavState>& agents() const { return agents_; }
    const ScenarioConfig& config() const { return cfg_; }
    SimOutcome outcome() const;

  private:
    ScenarioConfig cfg_;
    std::vector<UavState> agents_;
    std::vector<rid::RemoteIdMessage> broadcasts_;
    std::vector<double> disk_radii_;
    std::vector<Vec2> new_velocities_;
    num::Rng noise_;
    std::uint64_t noise_seed_;
    double time_ = 0.0;
    std::vector<MacEvent> mac_events_;
    std::vector<double> min_separation_trace_;
};

struct MonteCarloResult {
    rid::MessageFormat policy = rid::MessageFormat::Candidate2;
    std::vector<SimOutcome> outcomes;
    std::vector<double> pooled_times;  // sorted arrival times of all flights
    double median_time = 0.0;  // s
    double mean_time = 0.0;    // s
    double p95_time = 0.0;     // s
    int arrived = 0;
    int collided = 0;
    int stalled = 0;
    int runs_with_mac = 0;
    int total_macs = 0;
};

// Seeded independent runs; run r uses streams derived from (seed, r). Runs
// may execute on worker threads, results are ordered by run index.
MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg, int runs, int threads = 0);

double percentile(std::span<const double> sorted, double p);

} // namespace uavsep::sim
