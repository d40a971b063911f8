#include <doctest.h>

#include <cmath>

#include "uavsep/numerics.hpp"

using namespace uavsep;

TEST_SUITE("numerics") {

TEST_CASE("adaptive simpson reproduces known integrals") {
    CHECK(num::integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-10));
    CHECK(num::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-10));
    // Gaussian mass over +-8 sigma.
    const double g = num::integrate(
        [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }, -8.0, 8.0);
    CHECK(g == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(num::integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(num::integrate([](double) { return 1.0; }, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("bisection finds the smallest non-negative point") {
    const double root = num::bisect_nondecreasing([](double x) { return x - 1.25; }, 0.0,
                                                  10.0, 1e-9);
    CHECK(root == doctest::Approx(1.25).epsilon(1e-7));
}

TEST_CASE("normal quantile matches reference values") {
    CHECK(num::normal_quantile(0.5) == 0.0);
    CHECK(num::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(num::normal_quantile(0.997) == doctest::Approx(2.7477813854449926).epsilon(1e-9));
    CHECK(num::normal_quantile(0.001) == doctest::Approx(-3.090232306167814).epsilon(1e-9));
    CHECK_THROWS_AS(num::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(num::normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("erf_inv inverts erf") {
    for (double y : {-0.9, -0.5, 0.0, 0.3, 0.99, 0.9995}) {
        CHECK(std::erf(num::erf_inv(y)) == doctest::Approx(y).epsilon(1e-10));
    }
}

TEST_CASE("rng is deterministic per seed and gaussian moments check out") {
    num::Rng a(42), b(42), c(43);
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(c.uniform() != b.uniform());

    num::Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("radial error magnitude is half-normal, direction uniform") {
    num::Rng rng(11);
    const double sigma = 10.0;
    const int n = 100000;
    double mag_sum = 0.0;
    Vec2 vec_sum;
    for (int i = 0; i < n; ++i) {
        const Vec2 e = rng.radial_error(sigma);
        mag_sum += e.norm();
        vec_sum += e;
    }
    // Half-normal mean sigma*sqrt(2/pi) = 7.9788; vector mean ~ 0 by symmetry.
    CHECK(mag_sum / n == doctest::Approx(7.978845608).epsilon(0.01));
    CHECK(vec_sum.norm() / n < 0.1);
}

TEST_CASE("seed mixing separates streams") {
    CHECK(num::mix_seed(1, 0) != num::mix_seed(1, 1));
    CHECK(num::mix_seed(1, 0) != num::mix_seed(2, 0));
    CHECK(num::mix_seed(5, 9) == num::mix_seed(5, 9));
}

} // TEST_SUITE
