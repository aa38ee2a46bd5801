#include "doctest.h"

#include <cmath>

#include "iltlab/errors.hpp"
#include "iltlab/moments.hpp"
#include "iltlab/quadlab.hpp"

using namespace iltlab;

namespace {
moment_table synthetic(const std::vector<double>& eps, double (*m2)(double)) {
    moment_table t;
    for (double e : eps) {
        moment_row r;
        r.epsilon = e;
        r.m[1] = m2(e);
        t.rows.push_back(r);
    }
    return t;
}
}

TEST_CASE("log fit recovers an exact linear law") {
    auto t = synthetic({0.02, 0.01, 0.005, 0.0025}, [](double e) { return std::pow(0.1 * std::log(1 / e), 2); });
    scaling_fit f = fit_log_scaling(t);
    CHECK(f.a == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::fabs(f.b) < 1e-12);
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_log_scaling(synthetic({0.1, 0.01}, [](double) { return 1.0; })), parameter_error);
}

TEST_CASE("power fit recovers the exponent") {
    auto t = synthetic({0.02, 0.01, 0.005}, [](double e) { return 3.0 / e; });
    t.spec = process_spec::stable(1.5);
    CHECK(fit_power_scaling(t, 1.5).a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample moments against direct sums") {
    std::vector<double> v;
    for (int i = 0; i < 400; ++i) v.push_back(std::sin(0.37 * i) + 0.1);
    double m[4], se[4];
    sample_moments(v, 100, m, se);
    for (int k = 0; k < 4; ++k) {
        double s = 0;
        for (double x : v) s += std::pow(x, k + 1);
        CHECK(m[k] == doctest::Approx(s / 400).epsilon(1e-12));
        CHECK(se[k] > 0);
    }
}

TEST_CASE("brownian second moment against the exact Gaussian-kernel integral") {
    epsilon_ladder lad;
    lad.eps = {0.04, 0.02, 0.01};
    lad.n_paths = 1000;
    moment_table t = estimate_moments(process_spec::brownian(), lad, rng_policy{99});
    moment_table u = estimate_moments(process_spec::brownian(), lad, rng_policy{99});
    CHECK(t.to_csv() == u.to_csv());
    CHECK(t.to_csv().rfind("epsilon,n_paths,n_steps,m1,m1_se,m2,m2_se,m3,m3_se,m4,m4_se,scaled_m2\n", 0) == 0);
    for (const auto& r : t.rows) {
        double exact = brownian_second_moment_exact(1.0, r.epsilon);
        CHECK(std::fabs(r.m[1] - exact) < 4 * r.se[1]);
        CHECK(std::fabs(r.m[0]) < 4 * r.se[0]);
        CHECK(r.n_paths == 1000);
    }
}

TEST_CASE("scaling law, exact in law") {
    scaling_report s = scaling_law_check(process_spec::brownian(), 2.0, 0.02, rng_policy{4}, 1000);
    CHECK(s.predicted == 2.0);
    CHECK(std::fabs(s.z) < 4);
    CHECK_THROWS_AS(scaling_law_check(process_spec::brownian(), 1.0, 0.02, rng_policy{4}, 100), parameter_error);
}

TEST_CASE("ladder validation") {
    epsilon_ladder lad;
    lad.eps = {0.01, 0.02, 0.005};
    CHECK_THROWS_AS(lad.validate(), parameter_error);
    lad.eps = {0.02, 0.01, -0.005};
    CHECK_THROWS_AS(lad.validate(), parameter_error);
}
