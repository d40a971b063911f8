#pragma once

#include <cstdint>
#include <span>

#include "uavsep/vec2.hpp"

// Velocity Obstacle / Reciprocal Velocity Obstacle feasibility tests and
// velocity selection. Everything here is pure; per-agent selection calls may
// run concurrently on a frozen snapshot of broadcasts.

namespace uavsep::rvo {

struct AgentKinematics {
    Vec2 position;   // m (the agent's own reported fix)
    Vec2 velocity;   // m/s, current
    double radius = 1.0;    // m, own safety-disk radius
    double v_max = 30.7;    // m/s
    double v_cruise = 15.4; // m/s, preferred speed toward the goal
    Vec2 goal;       // m
};

// One pairwise constraint: relative position r = p_i - p_j and the combined
// disk radius R_ij = R_i + R_j.
struct RvoConstraint {
    Vec2 relative_position;  // m
    Vec2 v_i;                // m/s
    Vec2 v_j;                // m/s
    double combined_radius = 1.0;  // m
};

// True iff the ray p_i + t*(v_candidate - v_j), t > 0, intersects the disk of
// radius r_combined centered at p_j (positions already inside count as hits).
bool point_in_vo(Vec2 p_i, Vec2 p_j, Vec2 v_candidate, Vec2 v_j, double r_combined);

// ||r||^2 - (r.(2v - v_i - v_j))^2 / ||2v - v_i - v_j||^2 - R^2.
// Feasible iff >= 0. At the removable singularity 2v = v_i + v_j (zero
// reciprocal relative velocity, current separation is kept) the value is
// defined as ||r||^2 - R^2.
double rvo_value(const RvoConstraint& c, Vec2 v_rvo);

// A neighbor as seen through its broadcast, with the pairwise radius already
// combined.
struct NeighborConstraint {
    Vec2 position;  // m, reported
    Vec2 velocity;  // m/s, reported
    double combined_radius = 1.0;  // m
};

// Static obstacle, avoided with plain VO (no reciprocity).
struct ObstacleConstraint {
    Vec2 center;
    double combined_radius = 1.0;  // m, obstacle radius + agent disk radius
};

struct SelectionParams {
    int directions = 24;
    int speed_levels = 8;
};

// Candidate-grid velocity selection: polar grid of directions x speed levels
// up to v_max, plus the zero velocity, v_pref and the current velocity.
// Returns the feasible candidate closest to v_pref = v_cruise * unit(goal - p)
// when one exists, preferring the right-hand side of v_pref on ties (all
// agents share the rotation direction); otherwise the candidate maximizing
// the minimum constraint value.
Vec2 select_velocity(const AgentKinematics& self,
                     std::span<const NeighborConstraint> neighbors,
                     std::span<const ObstacleConstraint> obstacles = {},
                     const SelectionParams& params = {});

struct PositionUncertainty {
    Vec2 mean;          // m
    double sigma = 0.0;  // m, radial half-normal scale
};

// Monte Carlo estimate of P(rvo_value >= 0) with both positions perturbed by
// the radial error model (uniform direction, half-normal magnitude).
// Deterministic for a fixed seed.
double estimate_avoidance_probability(const RvoConstraint& c, Vec2 v_rvo,
                                      const PositionUncertainty& uncertainty_i,
                                      const PositionUncertainty& uncertainty_j,
                                      int samples, std::uint64_t seed);

} // namespace uavsep::rvo
