#include "uavsep/separation.hpp"

#include <cmath>
#include <stdexcept>

#include "uavsep/numerics.hpp"

namespace uavsep::sep {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + " must be >= 0");
}

} // namespace

const std::array<AccuracyClass, 4>& accuracy_classes() {
    static const std::array<AccuracyClass, 4> classes = {{
        {1.9, "zero_aod"},     // normal operations at zero AOD, 3sigma <= 5.7 m
        {3.5, "all_aod"},      // normal operations over all AODs
        {4.85, "any_aod"},     // normal operations at any AOD
        {10.0, "worst_case"},  // worst case during normal operations
    }};
    return classes;
}

const std::array<SpeedCategory, 4>& speed_categories() {
    static const std::array<SpeedCategory, 4> categories = {{
        {12.9, 20.6},  // category 1, MGTOW 0-1.8 kg
        {10.3, 15.4},  // category 2, MGTOW 0-9 kg
        {15.4, 30.7},  // category 3, MGTOW 0-9 kg
        {30.7, 51.5},  // category 4, MGTOW 9-25 kg
    }};
    return categories;
}

double triangular_pdf(double x, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("triangular_pdf: hi must be > lo");
    if (x <= lo || x >= hi) return 0.0;
    const double mode = 0.5 * (lo + hi);
    const double quarter = (hi - lo) * (hi - lo) / 4.0;
    if (x < mode) return (x - lo) / quarter;
    return (hi - x) / quarter;
}

double triangular_mac_pdf(double x, double af_max) {
    require_positive(af_max, "af_max");
    return triangular_pdf(x, 0.0, af_max);
}

double half_normal_pdf(double x, double sigma) {
    require_positive(sigma, "sigma");
    if (x < 0.0) return 0.0;
    return std::sqrt(2.0 / M_PI) / sigma * std::exp(-x * x / (2.0 * sigma * sigma));
}

double half_normal_mean(double sigma) {
    require_positive(sigma, "sigma");
    return sigma * std::sqrt(2.0 / M_PI);
}

double loc_error_sum_pdf(double x, double sigma_i, double sigma_j) {
    require_positive(sigma_i, "sigma_i");
    require_positive(sigma_j, "sigma_j");
    if (x < 0.0) return 0.0;
    const double s2 = sigma_i * sigma_i + sigma_j * sigma_j;
    const double s = std::sqrt(s2);
    const double pre = std::sqrt(2.0 / M_PI) / s * std::exp(-x * x / (2.0 * s2));
    const double root2 = std::sqrt(2.0);
    return pre * (std::erf(sigma_i * x / (root2 * sigma_j * s)) +
                  std::erf(sigma_j * x / (root2 * sigma_i * s)));
}

namespace {

// f(x) decays like a Gaussian with scale sqrt(si^2+sj^2); beyond 12 of those
// scales the remaining mass is far below the quadrature tolerance.
double sum_pdf_support(double sigma_i, double sigma_j) {
    return 12.0 * std::sqrt(sigma_i * sigma_i + sigma_j * sigma_j);
}

} // namespace

double loc_error_sum_mean(double sigma_i, double sigma_j) {
    require_positive(sigma_i, "sigma_i");
    require_positive(sigma_j, "sigma_j");
    const double hi = sum_pdf_support(sigma_i, sigma_j);
    return num::integrate(
        [&](double x) { return x * loc_error_sum_pdf(x, sigma_i, sigma_j); }, 0.0, hi,
        1e-10);
}

double loc_error_sum_quantile(double p, double sigma_i, double sigma_j) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("loc_error_sum_quantile: p must be in (0, 1)");
    }
    require_positive(sigma_i, "sigma_i");
    require_positive(sigma_j, "sigma_j");

    const double hi = sum_pdf_support(sigma_i, sigma_j);
    auto cdf = [&](double x) {
        return num::integrate(
            [&](double t) { return loc_error_sum_pdf(t, sigma_i, sigma_j); }, 0.0, x,
            1e-11);
    };
    return num::bisect_nondecreasing([&](double x) { return cdf(x) - p; }, 0.0, hi, 1e-6);
}

double relative_displacement_mean(const SpeedCategory& cat_i, const SpeedCategory& cat_j,
                                  double dt) {
    require_positive(dt, "dt");
    return dt * (cat_i.v_cruise + cat_j.v_cruise);
}

double relative_displacement_quantile(double p, const SpeedCategory& cat_i,
                                      const SpeedCategory& cat_j, double dt) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("relative_displacement_quantile: p must be in (0, 1)");
    }
    require_positive(dt, "dt");
    const double si = cat_i.sigma_v();
    const double sj = cat_j.sigma_v();
    const double sigma = dt * std::sqrt(si * si + sj * sj);
    // 99.7% is quoted as the 3-sigma level throughout; return that exactly
    // rather than the slightly smaller exact Gaussian quantile (2.7478).
    double z;
    if (p == 0.5) {
        z = 0.0;
    } else if (std::abs(p - 0.997) < 1e-9) {
        z = 3.0;
    } else {
        z = num::normal_quantile(p);
    }
    return relative_displacement_mean(cat_i, cat_j, dt) + z * sigma;
}

double unmac_diameter_unknown_dir(double d_af, double eps, double v, double dt) {
    require_nonnegative(d_af, "d_af");
    require_nonnegative(eps, "eps");
    require_nonnegative(v, "v");
    require_nonnegative(dt, "dt");
    return d_af + 2.0 * (eps + v * dt);
}

StadiumRegion unmac_known_direction(double d_af, double eps, Vec2 velocity, double dt) {
    require_nonnegative(d_af, "d_af");
    require_nonnegative(eps, "eps");
    require_nonnegative(dt, "dt");
    return StadiumRegion{velocity * dt, 0.5 * d_af + eps};
}

SeparationBreakdown pairwise_unmac(const UavSpec& spec_i, const UavSpec& spec_j,
                                   double eps_i, double eps_j, double v_i, double v_j,
                                   double dt) {
    require_nonnegative(spec_i.airframe_diameter, "airframe_diameter");
    require_nonnegative(spec_j.airframe_diameter, "airframe_diameter");
    require_nonnegative(eps_i, "eps_i");
    require_nonnegative(eps_j, "eps_j");
    require_nonnegative(v_i, "v_i");
    require_nonnegative(v_j, "v_j");
    require_nonnegative(dt, "dt");

    SeparationBreakdown out;
    out.mac_radius = 0.5 * (spec_i.airframe_diameter + spec_j.airframe_diameter);
    out.loc_term = eps_i + eps_j;
    out.mobility_term = dt * (v_i + v_j);
    out.unmac_radius = out.mac_radius + out.loc_term + out.mobility_term;
    return out;
}

} // namespace uavsep::sep
