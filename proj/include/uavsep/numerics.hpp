#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>

#include "uavsep/vec2.hpp"

namespace uavsep::num {

namespace detail {

template <class F>
double adaptive_simpson(F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature of f over [a, b], absolute tolerance tol.
template <class F>
double integrate(F f, double a, double b, double tol = 1e-10) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Smallest x in [lo, hi] with g(x) >= 0 for non-decreasing g, to absolute
// tolerance xtol. Requires g(lo) < 0 <= g(hi).
template <class G>
double bisect_nondecreasing(G g, double lo, double hi, double xtol) {
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double normal_cdf(double x);
// Inverse standard normal CDF (Acklam approximation plus one Halley step).
double normal_quantile(double p);
double erf_inv(double y);

// SplitMix64 step; used to derive independent per-run stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

// Deterministic RNG helper around mt19937_64. Gaussians come from Box-Muller
// on explicit uniforms so seeded sequences do not depend on the standard
// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }
    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    // |N(0, sigma^2)|: the radial localization-error magnitude model.
    double half_normal(double sigma) { return std::abs(sigma * normal()); }

    // Half-normal magnitude with uniformly random direction.
    Vec2 radial_error(double sigma) {
        const double r = half_normal(sigma);
        const double a = 2.0 * M_PI * uniform();
        return {r * std::cos(a), r * std::sin(a)};
    }

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace uavsep::num
