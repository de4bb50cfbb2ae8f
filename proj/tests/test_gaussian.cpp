#include <doctest.h>

#include <random>

#include "cellda/errors.hpp"
#include "cellda/gaussian.hpp"
#include "oracles.hpp"

using namespace cellda;

TEST_CASE("partial_md2 basic cases") {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
    FlagVector w(2);

    Eigen::VectorXd x(2);
    x << 3, 4;
    CHECK(partial_md2(x, w, mu, eye) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(partial_md2(mu, w, mu, eye) == 0.0);

    Eigen::MatrixXd sigma(2, 2);
    sigma << 1, 0.9, 0.9, 1;
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
    // Direct 2x2 inverse: 2 (1 - rho) / (1 - rho^2).
    CHECK(partial_md2(ones, w, mu, sigma) ==
          doctest::Approx(2.0 * 0.1 / 0.19).epsilon(1e-12));
}

TEST_CASE("partial_md2 is invariant to subset order and empty by convention") {
    std::mt19937_64 rng(7);
    Eigen::MatrixXd sigma = oracles::random_spd(5, rng);
    Eigen::VectorXd mu = oracles::random_vec(5, rng);
    Eigen::VectorXd x = oracles::random_vec(5, rng);
    double a = partial_md2(x, std::vector<int>{0, 2, 4}, mu, sigma);
    double b = partial_md2(x, std::vector<int>{4, 0, 2}, mu, sigma);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(partial_md2(x, std::vector<int>{}, mu, sigma) == 0.0);
}

TEST_CASE("subset_logdet") {
    CHECK(subset_logdet(Eigen::MatrixXd::Identity(4, 4), {0, 2}) == doctest::Approx(0.0));
    Eigen::MatrixXd diag = Eigen::Vector2d(2, 3).asDiagonal();
    CHECK(subset_logdet(diag, {0, 1}) == doctest::Approx(std::log(6.0)).epsilon(1e-14));

    std::mt19937_64 rng(11);
    Eigen::MatrixXd sigma = oracles::random_spd(5, rng);
    std::vector<int> o{0, 2, 3};
    CHECK(subset_logdet(sigma, o) ==
          doctest::Approx(oracles::logdet_eigen(oracles::take(sigma, o))).epsilon(1e-10));
}

TEST_CASE("subset_logdet rejects non-SPD input") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;  // indefinite
    CHECK_THROWS_AS(subset_logdet(bad, std::vector<int>{0, 1}), numeric_error);
}

TEST_CASE("conditional_moments identities") {
    std::mt19937_64 rng(3);
    Eigen::VectorXd mu = oracles::random_vec(3, rng);
    Eigen::VectorXd x = oracles::random_vec(3, rng);

    // Independence: identity sigma conditions to the marginal.
    auto cm = conditional_moments(0, {1, 2}, mu, Eigen::MatrixXd::Identity(3, 3), x);
    CHECK(cm.xhat == doctest::Approx(mu[0]).epsilon(1e-14));
    CHECK(cm.cvar == doctest::Approx(1.0).epsilon(1e-14));

    // Bivariate normal identity.
    double rho = 0.7;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1, rho, rho, 1;
    Eigen::VectorXd mu2(2), x2(2);
    mu2 << 0.5, -1.0;
    x2 << 0.0, 2.0;
    auto cm2 = conditional_moments(0, {1}, mu2, sigma, x2);
    CHECK(cm2.xhat == doctest::Approx(mu2[0] + rho * (x2[1] - mu2[1])).epsilon(1e-14));
    CHECK(cm2.cvar == doctest::Approx(1.0 - rho * rho).epsilon(1e-14));

    // Empty conditioning set.
    auto cm3 = conditional_moments(1, {}, mu, Eigen::MatrixXd::Identity(3, 3) * 2.5, x);
    CHECK(cm3.xhat == mu[1]);
    CHECK(cm3.cvar == 2.5);
}

TEST_CASE("conditional_moments matches the Schur complement oracle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXd sigma = oracles::random_spd(4, rng);
        Eigen::VectorXd mu = oracles::random_vec(4, rng);
        Eigen::VectorXd x = oracles::random_vec(4, rng);
        std::vector<int> cond{1, 3};
        auto cm = conditional_moments(0, cond, mu, sigma, x);
        auto [xhat, cvar] = oracles::conditional_schur(0, cond, mu, sigma, x);
        CHECK(cm.xhat == doctest::Approx(xhat).epsilon(1e-10));
        CHECK(cm.cvar == doctest::Approx(cvar).epsilon(1e-10));
    }
}

TEST_CASE("conditional variance is positive and never above the marginal") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd sigma = oracles::random_spd(5, rng);
        Eigen::VectorXd mu = oracles::random_vec(5, rng);
        Eigen::VectorXd x = oracles::random_vec(5, rng);
        auto cm = conditional_moments(2, {0, 1, 3, 4}, mu, sigma, x);
        CHECK(cm.cvar > 0.0);
        CHECK(cm.cvar <= sigma(2, 2) + 1e-12);
    }
}

TEST_CASE("conditional_moments_all agrees with the per-index route") {
    std::mt19937_64 rng(41);
    Eigen::MatrixXd sigma = oracles::random_spd(6, rng);
    Eigen::VectorXd mu = oracles::random_vec(6, rng);
    Eigen::VectorXd x = oracles::random_vec(6, rng);
    std::vector<int> o{0, 2, 3, 5};
    auto all = conditional_moments_all(o, mu, sigma, x);
    for (size_t k = 0; k < o.size(); ++k) {
        std::vector<int> rest;
        for (int j : o)
            if (j != o[k]) rest.push_back(j);
        auto cm = conditional_moments(o[k], rest, mu, sigma, x);
        CHECK(all[k].xhat == doctest::Approx(cm.xhat).epsilon(1e-10));
        CHECK(all[k].cvar == doctest::Approx(cm.cvar).epsilon(1e-10));
    }
}

TEST_CASE("subset_normal_logpdf") {
    // Empty subset convention.
    FlagVector empty(3);
    empty.w.setZero();
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
    CHECK(subset_normal_logpdf(mu, empty, mu, Eigen::MatrixXd::Identity(3, 3)) == 0.0);

    // Univariate standard normal at the mean.
    FlagVector w1(1);
    Eigen::VectorXd z1 = Eigen::VectorXd::Zero(1);
    CHECK(subset_normal_logpdf(z1, w1, z1, Eigen::MatrixXd::Identity(1, 1)) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-12));

    // Full-subset case against the dense oracle.
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXd sigma = oracles::random_spd(3, rng);
        Eigen::VectorXd mu3 = oracles::random_vec(3, rng);
        Eigen::VectorXd x3 = oracles::random_vec(3, rng);
        FlagVector w3(3);
        CHECK(subset_normal_logpdf(x3, w3, mu3, sigma) ==
              doctest::Approx(oracles::mvn_logpdf_dense(x3, mu3, sigma)).epsilon(1e-10));
    }
}

TEST_CASE("univariate logpdf integrates to one on a grid") {
    FlagVector w(1);
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(1, 0.3);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(1, 1, 1.7);
    double sum = 0.0;
    double h = 1e-3;
    for (double x = -15.0; x <= 15.0; x += h) {
        Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
        sum += std::exp(subset_normal_logpdf(xv, w, mu, sigma)) * h;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
}
