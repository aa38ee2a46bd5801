#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <cmath>
#include <numbers>

#include "iltlab/constants.hpp"
#include "iltlab/errors.hpp"

using namespace iltlab;
const double pi = std::numbers::pi;

TEST_CASE("phi against the hypergeometric form and direct quadrature") {
    for (double beta : {1.2, 1.5, 1.8}) {
        double lam = beta / 2;
        for (double rho : {0.1, 0.4, 0.7, 0.9}) {
            double hyp = -pi * lam * rho *
                         boost::math::hypergeometric_pFq({lam, lam + 1}, {2.0}, rho * rho);
            auto f = [&](double t) { return std::pow(1 + rho * rho + 2 * rho * std::cos(t), -beta / 2) * std::cos(t); };
            double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0, pi, 30, 1e-14);
            CHECK(stable_phi(beta, rho) == doctest::Approx(hyp).epsilon(1e-10));
            CHECK(stable_phi(beta, rho) == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("phi near rho = 1 stays finite and follows the (1-rho)^{1-beta} blow-up") {
    double beta = 1.5;
    double a = stable_phi(beta, 1 - 1e-6, 1e-6), b = stable_phi(beta, 1 - 1e-7, 1e-7);
    CHECK(std::isfinite(a));
    CHECK(std::log(b / a) / std::log(10.0) == doctest::Approx(beta - 1).epsilon(1e-3));
}

TEST_CASE("k identities") {
    auto k = k_brownian();
    CHECK(k.pass);
    CHECK(k.value == doctest::Approx(0.074815).epsilon(1e-5));
    // (8 2^{1/4})^2 = 64 sqrt2, so the two written forms differ by sqrt2
    CHECK(k_brownian_abstract_form() * std::sqrt(2.0) == doctest::Approx(k.value).epsilon(1e-15));
    CHECK(std::fabs(k.value * k.value - 10 / (128 * std::sqrt(2.0) * pi * pi)) < 1e-15);
}

TEST_CASE("J1 quadrature against Monte Carlo") {
    double q = j1_quadrature(1.3, constants_default_config());
    CHECK(q == doctest::Approx(-5.59973333809).epsilon(1e-8));
    mc_estimate mc = j1_monte_carlo(1.3, 1000000, 17);
    CHECK(std::fabs(mc.value - q) < 5 * mc.se);
    mc_estimate again = j1_monte_carlo(1.3, 1000000, 17);
    CHECK(again.value == mc.value);
}

TEST_CASE("J1 near beta = 2 scales like -3 pi^2 / (2 delta^2)") {
    double beta = 1.999, d = 6 / beta - 3;
    CHECK(d * d * j1_quadrature(beta, constants_default_config()) == doctest::Approx(-1.5 * pi * pi).epsilon(5e-3));
}

TEST_CASE("power extrapolation recovers a synthetic limit") {
    std::vector<double> eps = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, v;
    for (double e : eps) v.push_back(-3 + 2 * std::pow(e, 0.4));
    extrapolation x = extrapolate_power(eps, v);
    CHECK(x.limit == doctest::Approx(-3).epsilon(1e-6));
    CHECK(x.kappa == doctest::Approx(0.4).epsilon(1e-4));
    CHECK(x.cauchy);
    std::vector<double> wild = {1, 2, 1.5, 4, 0};
    CHECK_FALSE(extrapolate_power(eps, wild).cauchy);
    CHECK_THROWS_AS(extrapolate_power(eps, v, 2), parameter_error);
}

TEST_CASE("tail extrapolation is less biased by a subleading power") {
    std::vector<double> eps, v;
    for (int k = 2; k <= 12; ++k) {
        double e = std::pow(10.0, -0.5 * k);
        eps.push_back(e);
        v.push_back(-3 + 2 * std::pow(e, 0.5) + 20 * e);
    }
    extrapolation tail = extrapolate_power(eps, v);
    extrapolation all = extrapolate_power(eps, v, eps.size());
    CHECK(tail.fit_points == 4);
    CHECK(std::fabs(tail.limit + 3) < 0.1 * std::fabs(all.limit + 3));
    CHECK(tail.kappa == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("regularized J2 respects the uniform bound and the direct value") {
    quad_config q = constants_default_config();
    q.rel_tol = 1e-8;
    double bound = j2_uniform_bound(1.5);
    double a = j2_regularized(1.5, 0.1, q);
    CHECK(std::fabs(a) <= bound);
    double a2 = j2_regularized(1.5, 1e-3, q);
    double direct = j2_direct(1.5, q);
    // A(eps) decreases toward the direct value
    CHECK(a2 < a);
    CHECK(std::fabs(a2 - direct) < std::fabs(a - direct));
}

TEST_CASE("c(beta) formula and validation") {
    CHECK(c_beta_from_sum(2 * std::sqrt(2.0) * pi * pi) == doctest::Approx(1.0));
    CHECK_THROWS_AS(j1_quadrature(2.0, constants_default_config()), parameter_error);
    CHECK_THROWS_AS(j2_regularized(1.5, -1.0, constants_default_config()), parameter_error);
}
