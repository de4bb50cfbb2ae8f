#include <doctest.h>

#include <cmath>

#include "cellda/errors.hpp"
#include "cellda/stats.hpp"
#include "oracles.hpp"

using namespace cellda;

TEST_CASE("chi2 quantile known values") {
    // Exponential median: chi2 with 2 df is Exp(1/2).
    CHECK(chi2_quantile(0.5, 2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    // Frozen from the quadrature + bisection oracle.
    CHECK(chi2_quantile(0.99, 1) == doctest::Approx(6.6348966010).epsilon(1e-9));
    CHECK(chi2_quantile(0.99, 1) ==
          doctest::Approx(oracles::chi2_quantile_bisect(0.99, 1)).epsilon(1e-8));
}

TEST_CASE("chi2 quantile round-trips its CDF") {
    for (int k : {1, 2, 3, 5, 9, 20, 50}) {
        for (double p : {0.001, 0.01, 0.1, 0.5, 0.9, 0.975, 0.99, 0.999}) {
            double x = chi2_quantile(p, k);
            CHECK(chi2_cdf(x, k) == doctest::Approx(p).epsilon(0).scale(1).epsilon(1e-9));
        }
    }
}

TEST_CASE("chi2 CDF matches quadrature oracle") {
    for (int k : {1, 2, 5, 9}) {
        for (double x : {0.1, 1.0, 3.0, 8.0, 15.0}) {
            CHECK(chi2_cdf(x, k) ==
                  doctest::Approx(oracles::chi2_cdf_quadrature(x, k)).epsilon(1e-8));
        }
    }
}

TEST_CASE("chi2 quantile domain errors") {
    CHECK_THROWS_AS(chi2_quantile(0.0, 1), numeric_error);
    CHECK_THROWS_AS(chi2_quantile(1.0, 1), numeric_error);
    CHECK_THROWS_AS(chi2_quantile(0.5, 0), numeric_error);
}

TEST_CASE("normal quantile inverts the CDF") {
    for (double p : {1e-6, 0.001, 0.025, 0.5, 0.975, 0.995, 0.999999}) {
        double z = normal_quantile(p);
        CHECK(normal_cdf(z) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.995) == doctest::Approx(2.447746830680816 + 0.128082472868084)
                                        .epsilon(1e-9));  // 2.5758293035489
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).scale(1).epsilon(1e-14));
}

TEST_CASE("median and MAD") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
    CHECK(mad_scale({1.0, 2.0, 3.0, 4.0, 100.0}, 3.0) == doctest::Approx(1.4826));
    CHECK_THROWS_AS(median({}), numeric_error);
}
