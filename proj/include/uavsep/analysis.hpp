#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavsep/separation.hpp"

// Tables behind the `analyze` subcommand: per-component contributions to the
// pairwise separation radius.

namespace uavsep::analysis {

struct LocErrorRow {
    double sigma_i = 0.0;
    double sigma_j = 0.0;
    double mean = 0.0;  // m
    double q999 = 0.0;  // m, 99.9% quantile
};

// Equal-sigma pairs, one row per sigma.
std::vector<LocErrorRow> loc_error_table(std::span<const double> sigmas);

struct PdfPoint {
    double sigma = 0.0;
    double x = 0.0;        // m
    double density = 0.0;  // 1/m
};

std::vector<PdfPoint> loc_error_pdf_curves(std::span<const double> sigmas, int points_per_curve);

struct MobilityRow {
    int category = 0;  // 1-based
    double dt = 0.0;   // s
    double mean = 0.0;  // m
    double q997 = 0.0;  // m
};

// Equal-category pairs for each dt.
std::vector<MobilityRow> mobility_table(std::span<const int> categories,
                                        std::span<const double> dts);

struct UnmacRow {
    double sigma = 0.0;
    double dt = 0.0;
    double mean = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    double p999 = 0.0;
};

// Monte Carlo distribution of the pairwise uNMAC radius for two random
// vehicles: airframes triangular on [af_lo, af_hi], error magnitudes
// half-normal(sigma), speeds Gaussian (category 3) truncated to (0, v_max].
std::vector<UnmacRow> unmac_distribution_table(std::span<const double> sigmas,
                                               std::span<const double> dts, int samples,
                                               std::uint64_t seed, double af_lo = 0.1,
                                               double af_hi = 7.5);

} // namespace uavsep::analysis
