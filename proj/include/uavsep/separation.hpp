#pragma once

#include <array>
#include <string>

#include "uavsep/vec2.hpp"

// Separation model: distributions of the per-UAV uncertainty components
// (airframe size, GNSS localization error, inter-broadcast displacement) and
// the pairwise separation radii built from them. All functions are pure and
// thread-safe.

namespace uavsep::sep {

// GNSS accuracy class: sigma of the scalar Gaussian position error. The
// broadcastable 3-sigma bound covers 99.7% of fixes.
struct AccuracyClass {
    double sigma = 10.0;  // m
    std::string label;

    double three_sigma() const { return 3.0 * sigma; }
};

// The four canonical GPS accuracy classes (by correction-data age).
const std::array<AccuracyClass, 4>& accuracy_classes();

// Airspeed model per vehicle-weight category: Gaussian with mean v_cruise and
// sigma_v = (v_max - v_cruise) / 3.
struct SpeedCategory {
    double v_cruise = 15.4;  // m/s
    double v_max = 30.7;     // m/s

    double sigma_v() const { return (v_max - v_cruise) / 3.0; }
};

// Representative categories 1-4 by maximum gross takeoff weight.
const std::array<SpeedCategory, 4>& speed_categories();

// Static per-UAV truth.
struct UavSpec {
    double airframe_diameter = 1.0;  // m, d_AF
    double cruise_speed = 15.4;      // m/s, sampled per vehicle
    SpeedCategory speed;             // population model it was drawn from
    AccuracyClass accuracy;
    double broadcast_interval = 0.1;  // s
};

// Pairwise separation radii with the additive terms broken out:
// unmac_radius = mac_radius + loc_term + mobility_term.
struct SeparationBreakdown {
    double mac_radius = 0.0;      // m, (d_AF_i + d_AF_j) / 2
    double loc_term = 0.0;        // m, eps_i + eps_j
    double mobility_term = 0.0;   // m, dt * (v_i + v_j)
    double unmac_radius = 0.0;    // m
};

// Symmetric triangular density on [lo, hi] (mode at the midpoint).
double triangular_pdf(double x, double lo, double hi);

// Airframe-sum density: triangular on [0, af_max].
double triangular_mac_pdf(double x, double af_max);

// Density of |N(0, sigma^2)|: the radial localization-error magnitude.
double half_normal_pdf(double x, double sigma);

double half_normal_mean(double sigma);  // sigma * sqrt(2/pi)

// Closed-form density of eps_i + eps_j for two independent half-normal
// magnitudes (exponential factor times a sum of two erf terms).
double loc_error_sum_pdf(double x, double sigma_i, double sigma_j);

// Mean of the sum density, by quadrature.
double loc_error_sum_mean(double sigma_i, double sigma_j);

// Smallest x with CDF(x) >= p; CDF by numeric integration of the sum density,
// inverted by bisection to 1e-6 m.
double loc_error_sum_quantile(double p, double sigma_i, double sigma_j);

// Combined inter-broadcast displacement dt*(v_i + v_j) for two vehicles with
// Gaussian speeds: mean dt*(mu_i + mu_j), variance dt^2*(sigma_i^2 + sigma_j^2).
double relative_displacement_mean(const SpeedCategory& cat_i, const SpeedCategory& cat_j,
                                  double dt);

// Gaussian quantile of the combined displacement. At p = 0.997 the
// conventional mu + 3*sigma value is returned exactly.
double relative_displacement_quantile(double p, const SpeedCategory& cat_i,
                                      const SpeedCategory& cat_j, double dt);

// Uncertainty-disk diameter when the movement direction is unknown:
// d_AF + 2*(eps + v*dt).
double unmac_diameter_unknown_dir(double d_af, double eps, double v, double dt);

// Known-direction uncertainty region: a disk of radius d_AF/2 + eps swept
// along the displacement vector (a stadium).
struct StadiumRegion {
    Vec2 sweep;           // displacement vector v * dt, m
    double disk_radius = 0.0;  // m, d_AF/2 + eps

    double width() const { return 2.0 * disk_radius; }
    double length() const { return 2.0 * disk_radius + sweep.norm(); }
    // Largest distance across the region: d_AF + 2*eps + |v|*dt.
    double max_extent() const { return length(); }
};

StadiumRegion unmac_known_direction(double d_af, double eps, Vec2 velocity, double dt);

// Pairwise uNMAC radii for two vehicles with the given instantaneous error
// magnitudes and speeds.
SeparationBreakdown pairwise_unmac(const UavSpec& spec_i, const UavSpec& spec_j,
                                   double eps_i, double eps_j, double v_i, double v_j,
                                   double dt);

} // namespace uavsep::sep
