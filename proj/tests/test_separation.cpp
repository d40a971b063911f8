#include <doctest.h>

#include <cmath>
#include <vector>

#include "uavsep/numerics.hpp"
#include "uavsep/separation.hpp"

using namespace uavsep;

namespace {

// Closed-form CDF of eps_i + eps_j for equal sigmas: the sum of two folded
// Gaussians satisfies P(Z <= z) = erf(z / (2 sigma))^2. Used as an
// independent oracle against the quadrature-based implementation.
double equal_sigma_sum_cdf(double z, double sigma) {
    const double e = std::erf(z / (2.0 * sigma));
    return e * e;
}

double equal_sigma_sum_quantile(double p, double sigma) {
    return 2.0 * sigma * num::erf_inv(std::sqrt(p));
}

} // namespace

TEST_SUITE("separation") {

TEST_CASE("canonical tables") {
    const auto& acc = sep::accuracy_classes();
    CHECK(acc[0].sigma == 1.9);
    CHECK(acc[1].sigma == 3.5);
    CHECK(acc[2].sigma == 4.85);
    CHECK(acc[3].sigma == 10.0);
    CHECK(acc[3].three_sigma() == 30.0);

    const auto& cats = sep::speed_categories();
    CHECK(cats[2].v_cruise == 15.4);
    CHECK(cats[2].v_max == 30.7);
    // Category 3 sigma_v is exactly (30.7 - 15.4) / 3 = 5.1.
    CHECK(cats[2].sigma_v() == doctest::Approx(5.1).epsilon(1e-12));
}

TEST_CASE("triangular airframe density") {
    CHECK(sep::triangular_mac_pdf(0.0, 7.5) == 0.0);
    CHECK(sep::triangular_mac_pdf(-1.0, 7.5) == 0.0);
    CHECK(sep::triangular_mac_pdf(7.5, 7.5) == 0.0);
    // Peak at the mode af_max/2 is 2/af_max.
    CHECK(sep::triangular_mac_pdf(3.75, 7.5) == doctest::Approx(2.0 / 7.5).epsilon(1e-12));
    CHECK_THROWS_AS(sep::triangular_mac_pdf(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sep::triangular_mac_pdf(1.0, -2.0), std::invalid_argument);

    // Generic support variant used for fleet airframes.
    CHECK(sep::triangular_pdf(3.8, 0.1, 7.5) == doctest::Approx(2.0 / 7.4).epsilon(1e-12));
    CHECK(sep::triangular_pdf(0.05, 0.1, 7.5) == 0.0);

    const double mass =
        num::integrate([](double x) { return sep::triangular_mac_pdf(x, 7.5); }, 0.0, 7.5);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("half-normal density") {
    CHECK(sep::half_normal_pdf(0.0, 1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK(sep::half_normal_pdf(-0.5, 1.0) == 0.0);
    CHECK_THROWS_AS(sep::half_normal_pdf(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sep::half_normal_pdf(1.0, -1.0), std::invalid_argument);

    const double mass =
        num::integrate([](double x) { return sep::half_normal_pdf(x, 10.0); }, 0.0, 140.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    // Mean by quadrature: 10 * sqrt(2/pi) = 7.98 m.
    const double mean = num::integrate(
        [](double x) { return x * sep::half_normal_pdf(x, 10.0); }, 0.0, 140.0);
    CHECK(mean == doctest::Approx(7.978845608).epsilon(1e-8));
    CHECK(sep::half_normal_mean(10.0) == doctest::Approx(mean).epsilon(1e-8));
}

TEST_CASE("localization error sum density") {
    for (double s : {1.9, 3.5, 4.85, 10.0}) {
        CHECK(sep::loc_error_sum_pdf(0.0, s, s) == 0.0);
    }
    CHECK(sep::loc_error_sum_pdf(-1.0, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(sep::loc_error_sum_pdf(1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sep::loc_error_sum_pdf(1.0, 1.0, -1.0), std::invalid_argument);

    // Normalization for an unequal pair.
    const double mass = num::integrate(
        [](double x) { return sep::loc_error_sum_pdf(x, 3.5, 4.85); }, 0.0, 90.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));

    // Mean equals the sum of the half-normal means.
    CHECK(sep::loc_error_sum_mean(1.9, 1.9) == doctest::Approx(3.031961).epsilon(1e-5));
    CHECK(sep::loc_error_sum_mean(3.5, 4.85) ==
          doctest::Approx((3.5 + 4.85) * std::sqrt(2.0 / M_PI)).epsilon(1e-6));
}

TEST_CASE("localization error sum quantile vs closed-form oracle") {
    for (double s : {1.9, 10.0}) {
        for (double p : {0.5, 0.9, 0.999}) {
            const double expected = equal_sigma_sum_quantile(p, s);
            const double got = sep::loc_error_sum_quantile(p, s, s);
            CHECK(got == doctest::Approx(expected).epsilon(1e-4));
            // And the CDF at the returned point is p.
            CHECK(equal_sigma_sum_cdf(got, s) == doctest::Approx(p).epsilon(1e-4));
        }
    }
    CHECK(sep::loc_error_sum_quantile(0.5, 3.5, 3.5) <
          sep::loc_error_sum_quantile(0.999, 3.5, 3.5));
    CHECK_THROWS_AS(sep::loc_error_sum_quantile(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sep::loc_error_sum_quantile(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("quantiles and means for the four accuracy classes") {
    // 99.9% levels: 9.34 / 17.3 / 23.94 / 49.5 m within 3%.
    const double expected_q[] = {9.34, 17.3, 23.94, 49.5};
    const double sigmas[] = {1.9, 3.5, 4.85, 10.0};
    for (int i = 0; i < 4; ++i) {
        const double q = sep::loc_error_sum_quantile(0.999, sigmas[i], sigmas[i]);
        CHECK(std::abs(q - expected_q[i]) / expected_q[i] < 0.03);
    }
}

TEST_CASE("empirical half-normal pair sums reproduce the sum density") {
    // 1e6 sampled pairs, histogram vs quadrature bin masses; the maximum bin
    // deviation relative to the peak bin must stay below 2%.
    const double sigma = 1.9;
    const int n = 1000000;
    const int bins = 40;
    const double hi = sep::loc_error_sum_quantile(0.999, sigma, sigma);
    std::vector<int> counts(bins, 0);
    num::Rng rng(2024);
    for (int i = 0; i < n; ++i) {
        const double z = rng.half_normal(sigma) + rng.half_normal(sigma);
        if (z < hi) ++counts[static_cast<int>(z / hi * bins)];
    }
    double peak = 0.0;
    std::vector<double> exact(bins);
    for (int b = 0; b < bins; ++b) {
        exact[b] = num::integrate(
            [&](double x) { return sep::loc_error_sum_pdf(x, sigma, sigma); },
            hi * b / bins, hi * (b + 1) / bins, 1e-10);
        peak = std::max(peak, exact[b]);
    }
    double worst = 0.0;
    for (int b = 0; b < bins; ++b) {
        worst = std::max(worst, std::abs(static_cast<double>(counts[b]) / n - exact[b]));
    }
    CHECK(worst / peak < 0.02);
}

TEST_CASE("relative displacement quantile") {
    const auto& cats = sep::speed_categories();
    const auto cat3 = cats[2];
    const auto cat1 = cats[0];

    // Category 3 pair, dt = 0.1: 0.1*30.8 + 3*0.1*sqrt(2)*5.1 = 5.2437 m.
    CHECK(sep::relative_displacement_quantile(0.997, cat3, cat3, 0.1) ==
          doctest::Approx(5.243747).epsilon(1e-6));
    // Category 1 pair, dt = 1: 25.8 + 3*sqrt(2*(7.7/3)^2) = 36.689 m.
    CHECK(sep::relative_displacement_quantile(0.997, cat1, cat1, 1.0) ==
          doctest::Approx(36.689444).epsilon(1e-6));

    // Doubling dt doubles the mean term exactly.
    const double m1 = sep::relative_displacement_quantile(0.5, cat3, cat1, 0.2);
    const double m2 = sep::relative_displacement_quantile(0.5, cat3, cat1, 0.4);
    CHECK(m2 == 2.0 * m1);
    CHECK(sep::relative_displacement_mean(cat3, cat1, 0.2) == m1);

    CHECK_THROWS_AS(sep::relative_displacement_quantile(0.997, cat3, cat3, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sep::relative_displacement_quantile(1.5, cat3, cat3, 0.1),
                    std::invalid_argument);
}

TEST_CASE("unknown-direction uncertainty diameter") {
    CHECK(sep::unmac_diameter_unknown_dir(2.0, 5.0, 10.0, 0.1) == doctest::Approx(14.0));
    CHECK(sep::unmac_diameter_unknown_dir(3.3, 0.0, 0.0, 0.5) == doctest::Approx(3.3));
    CHECK(sep::unmac_diameter_unknown_dir(7.5, 30.0, 30.7, 0.1) == doctest::Approx(73.64));
    CHECK_THROWS_AS(sep::unmac_diameter_unknown_dir(-1.0, 0.0, 0.0, 0.1),
                    std::invalid_argument);
}

TEST_CASE("known-direction stadium region") {
    const auto still = sep::unmac_known_direction(2.0, 5.0, Vec2{0, 0}, 0.1);
    CHECK(still.max_extent() == doctest::Approx(12.0));  // collapses to the disk
    CHECK(still.width() == doctest::Approx(12.0));

    const auto moving = sep::unmac_known_direction(2.0, 5.0, Vec2{10, 0}, 0.1);
    CHECK(moving.length() == doctest::Approx(13.0));
    CHECK(moving.width() == doctest::Approx(12.0));
    CHECK(moving.sweep.x == doctest::Approx(1.0));

    // The known-direction extent never exceeds the unknown-direction diameter.
    CHECK(moving.max_extent() <= sep::unmac_diameter_unknown_dir(2.0, 5.0, 10.0, 0.1));
    CHECK_THROWS_AS(sep::unmac_known_direction(2.0, -1.0, Vec2{1, 0}, 0.1),
                    std::invalid_argument);
}

TEST_CASE("pairwise separation breakdown") {
    sep::UavSpec a, b;
    a.airframe_diameter = 2.0;
    b.airframe_diameter = 2.0;
    auto r = sep::pairwise_unmac(a, b, 5.0, 5.0, 10.0, 10.0, 0.1);
    CHECK(r.mac_radius == doctest::Approx(2.0));
    CHECK(r.unmac_radius == doctest::Approx(14.0));
    CHECK(r.unmac_radius ==
          doctest::Approx(r.mac_radius + r.loc_term + r.mobility_term).epsilon(1e-12));

    a.airframe_diameter = 3.0;
    b.airframe_diameter = 5.0;
    r = sep::pairwise_unmac(a, b, 0.0, 0.0, 0.0, 0.0, 0.1);
    CHECK(r.unmac_radius == doctest::Approx(4.0));
    CHECK(r.unmac_radius == r.mac_radius);

    a.airframe_diameter = 7.5;
    b.airframe_diameter = 7.5;
    r = sep::pairwise_unmac(a, b, 30.0, 30.0, 30.7, 30.7, 0.1);
    CHECK(r.unmac_radius == doctest::Approx(73.64).epsilon(1e-9));
    CHECK(r.mac_radius == doctest::Approx(7.5));
    CHECK_THROWS_AS(sep::pairwise_unmac(a, b, -1.0, 0.0, 0.0, 0.0, 0.1),
                    std::invalid_argument);
}

TEST_CASE("unmac radius is monotone in every argument") {
    num::Rng rng(99);
    sep::UavSpec a, b;
    for (int it = 0; it < 200; ++it) {
        a.airframe_diameter = rng.uniform(0.1, 7.5);
        b.airframe_diameter = rng.uniform(0.1, 7.5);
        const double e1 = rng.uniform(0.0, 40.0), e2 = rng.uniform(0.0, 40.0);
        const double v1 = rng.uniform(0.0, 30.0), v2 = rng.uniform(0.0, 30.0);
        const double dt = rng.uniform(0.01, 1.0);
        const double base = sep::pairwise_unmac(a, b, e1, e2, v1, v2, dt).unmac_radius;
        CHECK(base >= sep::pairwise_unmac(a, b, e1, e2, v1, v2, dt).mac_radius);

        sep::UavSpec a2 = a;
        a2.airframe_diameter += 0.5;
        CHECK(sep::pairwise_unmac(a2, b, e1, e2, v1, v2, dt).unmac_radius >= base);
        CHECK(sep::pairwise_unmac(a, b, e1 + 1.0, e2, v1, v2, dt).unmac_radius >= base);
        CHECK(sep::pairwise_unmac(a, b, e1, e2, v1 + 1.0, v2, dt).unmac_radius >= base);
        CHECK(sep::pairwise_unmac(a, b, e1, e2, v1, v2, dt * 1.5).unmac_radius >= base);
    }
}

} // TEST_SUITE
