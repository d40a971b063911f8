#include "uavsep/rvo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavsep/numerics.hpp"

namespace uavsep::rvo {

bool point_in_vo(Vec2 p_i, Vec2 p_j, Vec2 v_candidate, Vec2 v_j, double r_combined) {
    if (!(r_combined > 0.0)) throw std::invalid_argument("point_in_vo: radius must be > 0");
    const Vec2 r = p_i - p_j;
    if (r.norm2() == 0.0) throw std::invalid_argument("point_in_vo: coincident positions");

    const double c = r.norm2() - r_combined * r_combined;
    if (c <= 0.0) return true;  // already inside the combined disk

    const Vec2 w = v_candidate - v_j;
    const double a = w.norm2();
    if (a == 0.0) return false;  // zero relative velocity never advances

    // ||r + t w||^2 = R^2 has a root with t > 0 iff disc >= 0 and the larger
    // root is positive.
    const double b = 2.0 * r.dot(w);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    return -b + std::sqrt(disc) > 0.0;
}

double rvo_value(const RvoConstraint& c, Vec2 v_rvo) {
    if (!(c.combined_radius > 0.0)) {
        throw std::invalid_argument("rvo_value: combined radius must be > 0");
    }
    const Vec2 r = c.relative_position;
    const Vec2 u = 2.0 * v_rvo - c.v_i - c.v_j;
    const double base = r.norm2() - c.combined_radius * c.combined_radius;
    const double q = u.norm2();
    if (q < 1e-30) return base;  // documented singularity convention
    const double proj = r.dot(u);
    return base - proj * proj / q;
}

namespace {

// Per-step precomputed constraint geometry: u = factor * candidate - bias.
// Neighbors carry reciprocity (factor 2, bias v_i + v_j); static obstacles
// are plain VO (factor 1, zero bias).
struct ConstraintRow {
    Vec2 r;            // relative position
    Vec2 bias;         // v_i + v_j (zero for obstacles)
    double factor;     // 2 for agents, 1 for obstacles
    double radius;     // combined disk radius
    double r_norm2;
    double r_norm;
    double gap;        // r_norm - radius
    double u_cap;      // upper bound on ||u|| over the candidate set
    double bound;      // gap - u_cap * horizon: no candidate scores below this
};

double constraint_value(const ConstraintRow& row, Vec2 candidate) {
    const Vec2 u = row.factor * candidate - row.bias;
    const double base = row.r_norm2 - row.radius * row.radius;
    const double q = u.norm2();
    if (q < 1e-30) return base;  // singularity convention
    const double proj = row.r.dot(u);
    return base - proj * proj / q;
}

double min_constraint_value(Vec2 candidate, std::span<const ConstraintRow> rows) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        worst = std::min(worst, constraint_value(row, candidate));
        if (worst < 0.0) return worst;
    }
    return worst;
}

// Lookahead horizon for the least-bad fallback.
constexpr double kRecoverySeconds = 2.0;

// Least-bad score in meters of clearance. rvo_value cannot rank candidates
// usefully once no candidate satisfies every constraint: its maximum over an
// overlapped pair is attained by matching velocities, which freezes the
// penetration in place, and against the full extrapolation line it penalizes
// receding motion whose backward extension crosses the disk. The fallback
// therefore scores each constraint by the minimum predicted clearance over a
// short horizon; for pairs already overlapped, by the depth plus the
// separation rate, so opening the gap wins and tangential motion gains
// nothing. Rows must be sorted by their score lower bound: once a row's
// bound clears the running minimum, no later row can lower it.
double least_bad_score(Vec2 candidate, std::span<const ConstraintRow> rows,
                       double stop_below) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.bound >= worst) break;
        const Vec2 u = row.factor * candidate - row.bias;
        double score;
        if (row.gap <= 0.0) {
            const double rate = row.r_norm > 0.0 ? row.r.dot(u) / row.r_norm : 0.0;
            score = row.gap + kRecoverySeconds * rate;
        } else {
            const double q = u.norm2();
            const double t =
                q < 1e-30 ? 0.0 : std::clamp(-row.r.dot(u) / q, 0.0, kRecoverySeconds);
            score = (row.r + u * t).norm() - row.radius;
        }
        worst = std::min(worst, score);
        if (worst < stop_below) return worst;
    }
    return worst;
}

} // namespace

Vec2 select_velocity(const AgentKinematics& self,
                     std::span<const NeighborConstraint> neighbors,
                     std::span<const ObstacleConstraint> obstacles,
                     const SelectionParams& params) {
    const Vec2 to_goal = self.goal - self.position;
    const Vec2 v_pref =
        to_goal.norm2() > 1e-18 ? to_goal.normalized() * self.v_cruise : Vec2{};

    if (neighbors.empty() && obstacles.empty()) return v_pref;

    thread_local std::vector<ConstraintRow> rows;
    rows.clear();
    rows.reserve(neighbors.size() + obstacles.size());
    const double self_cap = 2.0 * self.v_max + self.velocity.norm();
    for (const auto& n : neighbors) {
        ConstraintRow row;
        row.r = self.position - n.position;
        row.bias = self.velocity + n.velocity;
        row.factor = 2.0;
        row.radius = n.combined_radius;
        row.r_norm2 = row.r.norm2();
        row.r_norm = std::sqrt(row.r_norm2);
        row.gap = row.r_norm - row.radius;
        row.u_cap = self_cap + n.velocity.norm();
        row.bound = row.gap - row.u_cap * kRecoverySeconds;
        rows.push_back(row);
    }
    for (const auto& o : obstacles) {
        ConstraintRow row;
        row.r = self.position - o.center;
        row.bias = Vec2{};
        row.factor = 1.0;
        row.radius = o.combined_radius;
        row.r_norm2 = row.r.norm2();
        row.r_norm = std::sqrt(row.r_norm2);
        row.gap = row.r_norm - row.radius;
        row.u_cap = self.v_max;
        row.bound = row.gap - row.u_cap * kRecoverySeconds;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const ConstraintRow& a, const ConstraintRow& b) {
        return a.bound < b.bound;
    });

    // v_pref is the unconditional preference minimum; when it satisfies every
    // constraint there is nothing to search.
    if (min_constraint_value(v_pref, rows) >= 0.0) return v_pref;

    thread_local std::vector<Vec2> candidates;
    candidates.clear();
    candidates.reserve(static_cast<std::size_t>(params.directions) *
                           static_cast<std::size_t>(params.speed_levels) +
                       3);
    candidates.push_back(Vec2{});
    candidates.push_back(v_pref);
    candidates.push_back(self.velocity);
    for (int d = 0; d < params.directions; ++d) {
        const double angle = 2.0 * M_PI * d / params.directions;
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        for (int s = 1; s <= params.speed_levels; ++s) {
            candidates.push_back(dir * (self.v_max * s / params.speed_levels));
        }
    }

    // Preference order: distance to v_pref, right-hand side of v_pref first,
    // then coordinates for a total deterministic order. The distance key is
    // quantized so mirror-image candidates (equal up to trig rounding) rank
    // as ties and the side rule decides.
    thread_local std::vector<std::size_t> order;
    thread_local std::vector<std::int64_t> keys;
    order.resize(candidates.size());
    keys.resize(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
        // Quantized distance with the side bit appended: right of v_pref wins
        // ties.
        const std::int64_t dist = std::llround((candidates[i] - v_pref).norm2() * 1e6);
        const std::int64_t side = v_pref.cross(candidates[i]) < 0.0 ? 0 : 1;
        keys[i] = dist * 2 + side;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        if (candidates[a].x != candidates[b].x) return candidates[a].x < candidates[b].x;
        return candidates[a].y < candidates[b].y;
    });

    for (std::size_t idx : order) {
        if (min_constraint_value(candidates[idx], rows) >= 0.0) {
            return candidates[idx];
        }
    }

    // No feasible candidate: least-bad fallback; quantized scores keep ties
    // in preference order.
    Vec2 best = candidates[order.front()];
    double best_value = 0.0;
    bool have_best = false;
    for (std::size_t idx : order) {
        const double v = least_bad_score(candidates[idx], rows,
                                         have_best ? best_value
                                                   : -std::numeric_limits<double>::infinity());
        if (!have_best || std::llround(v * 1e6) > std::llround(best_value * 1e6)) {
            best_value = v;
            best = candidates[idx];
            have_best = true;
        }
    }
    return best;
}

double estimate_avoidance_probability(const RvoConstraint& c, Vec2 v_rvo,
                                      const PositionUncertainty& uncertainty_i,
                                      const PositionUncertainty& uncertainty_j,
                                      int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (uncertainty_i.sigma < 0.0 || uncertainty_j.sigma < 0.0) {
        throw std::invalid_argument("sigma must be >= 0");
    }

    num::Rng rng(seed);
    int feasible = 0;
    for (int s = 0; s < samples; ++s) {
        Vec2 p_i = uncertainty_i.mean;
        Vec2 p_j = uncertainty_j.mean;
        if (uncertainty_i.sigma > 0.0) p_i += rng.radial_error(uncertainty_i.sigma);
        if (uncertainty_j.sigma > 0.0) p_j += rng.radial_error(uncertainty_j.sigma);
        RvoConstraint sample = c;
        sample.relative_position = p_i - p_j;
        if (rvo_value(sample, v_rvo) >= 0.0) ++feasible;
    }
    return static_cast<double>(feasible) / samples;
}

} // namespace uavsep::rvo
