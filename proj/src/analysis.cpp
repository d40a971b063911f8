#include "uavsep/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "uavsep/numerics.hpp"
#include "uavsep/simulator.hpp"

namespace uavsep::analysis {

std::vector<LocErrorRow> loc_error_table(std::span<const double> sigmas) {
    std::vector<LocErrorRow> rows;
    rows.reserve(sigmas.size());
    for (double s : sigmas) {
        rows.push_back({s, s, sep::loc_error_sum_mean(s, s),
                        sep::loc_error_sum_quantile(0.999, s, s)});
    }
    return rows;
}

std::vector<PdfPoint> loc_error_pdf_curves(std::span<const double> sigmas,
                                           int points_per_curve) {
    if (points_per_curve < 2) throw std::invalid_argument("need at least 2 curve points");
    std::vector<PdfPoint> points;
    points.reserve(sigmas.size() * static_cast<std::size_t>(points_per_curve));
    for (double s : sigmas) {
        const double hi = sep::loc_error_sum_quantile(0.999, s, s) * 1.2;
        for (int k = 0; k < points_per_curve; ++k) {
            const double x = hi * k / (points_per_curve - 1);
            points.push_back({s, x, sep::loc_error_sum_pdf(x, s, s)});
        }
    }
    return points;
}

std::vector<MobilityRow> mobility_table(std::span<const int> categories,
                                        std::span<const double> dts) {
    const auto& cats = sep::speed_categories();
    std::vector<MobilityRow> rows;
    rows.reserve(categories.size() * dts.size());
    for (int c : categories) {
        if (c < 1 || c > static_cast<int>(cats.size())) {
            throw std::invalid_argument("speed category must be 1..4");
        }
        const auto& cat = cats[static_cast<std::size_t>(c - 1)];
        for (double dt : dts) {
            rows.push_back({c, dt, sep::relative_displacement_mean(cat, cat, dt),
                            sep::relative_displacement_quantile(0.997, cat, cat, dt)});
        }
    }
    return rows;
}

namespace {

// Inverse-CDF draw from the symmetric triangular distribution on [lo, hi].
double sample_triangular(num::Rng& rng, double lo, double hi) {
    const double u = rng.uniform();
    const double w = hi - lo;
    if (u < 0.5) return lo + w * std::sqrt(u / 2.0);
    return hi - w * std::sqrt((1.0 - u) / 2.0);
}

} // namespace

std::vector<UnmacRow> unmac_distribution_table(std::span<const double> sigmas,
                                               std::span<const double> dts, int samples,
                                               std::uint64_t seed, double af_lo,
                                               double af_hi) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto cat = sep::speed_categories()[2];

    std::vector<UnmacRow> rows;
    rows.reserve(sigmas.size() * dts.size());
    std::vector<double> values(static_cast<std::size_t>(samples));
    for (double sigma : sigmas) {
        for (double dt : dts) {
            num::Rng rng(num::mix_seed(num::mix_seed(seed, std::bit_cast<std::uint64_t>(sigma)),
                                       std::bit_cast<std::uint64_t>(dt)));
            for (auto& v : values) {
                const double af_i = sample_triangular(rng, af_lo, af_hi);
                const double af_j = sample_triangular(rng, af_lo, af_hi);
                const double eps_i = rng.half_normal(sigma);
                const double eps_j = rng.half_normal(sigma);
                double v_i, v_j;
                do {
                    v_i = rng.normal(cat.v_cruise, cat.sigma_v());
                } while (!(v_i > 0.0 && v_i <= cat.v_max));
                do {
                    v_j = rng.normal(cat.v_cruise, cat.sigma_v());
                } while (!(v_j > 0.0 && v_j <= cat.v_max));
                v = 0.5 * (af_i + af_j) + eps_i + eps_j + dt * (v_i + v_j);
            }
            std::sort(values.begin(), values.end());
            UnmacRow row;
            row.sigma = sigma;
            row.dt = dt;
            row.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size());
            row.p50 = sim::percentile(values, 0.5);
            row.p90 = sim::percentile(values, 0.9);
            row.p99 = sim::percentile(values, 0.99);
            row.p999 = sim::percentile(values, 0.999);
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace uavsep::analysis
