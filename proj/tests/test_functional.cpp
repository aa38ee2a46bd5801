#include "doctest.h"

#include <cmath>
#include <numbers>

#include "iltlab/errors.hpp"
#include "iltlab/functional.hpp"

using namespace iltlab;

TEST_CASE("short path by hand, left-node Riemann sum") {
    path2d p;
    p.T = 1.0;
    p.n_steps = 3;
    p.x1 = {0.0, 0.1, 0.3, 0.2};
    p.x2 = {0.0, 0.0, 0.1, 0.4};
    double eps = 0.05;
    auto fp = [&](double y1, double y2) {
        return -(y1 / (2 * eps)) * std::exp(-(y1 * y1 + y2 * y2) / (4 * eps)) / (4 * std::numbers::pi * eps);
    };
    // cells start at 0, 1/3, 2/3; pairs of left nodes i < j
    double w = 1.0 / 9.0;
    double expect = (fp(0.1, 0.0) + fp(0.3, 0.1) + fp(0.2, 0.1)) * w;
    auto r = alpha_prime(p, process_spec::brownian(), eps, region_spec::triangle(1.0));
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-14));
    auto rect = alpha_prime(p, process_spec::brownian(), eps, region_spec::rectangle(0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0));
    CHECK(rect.value == doctest::Approx((fp(0.1, 0.0) + fp(0.3, 0.1)) * w).epsilon(1e-14));
}

TEST_CASE("tiled parallel sum matches the serial reference") {
    rng_policy rp{21};
    for (process_spec spec : {process_spec::brownian(), process_spec::stable(1.5)}) {
        path2d p = sample_path(spec, 1.0, 1024, rp, 3);
        dx1_kernel k = dx1_kernel::make(spec, 0.01);
        for (region_spec reg : {region_spec::triangle(1.0), region_spec::triangle(0.25, 0.75),
                                region_spec::rectangle(0.0, 0.5, 0.5, 1.0)}) {
            double a = alpha_prime(p, 0.01, reg, k).value;
            double b = alpha_prime_serial(p, 0.01, reg, k).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-11));
        }
    }
}

TEST_CASE("reflection x1 -> -x1 negates the functional") {
    rng_policy rp{8};
    path2d p = sample_path(process_spec::brownian(), 1.0, 256, rp, 0);
    path2d q = p;
    for (auto& v : q.x1) v = -v;
    double a = alpha_prime(p, process_spec::brownian(), 0.02, region_spec::triangle(1.0)).value;
    double b = alpha_prime(q, process_spec::brownian(), 0.02, region_spec::triangle(1.0)).value;
    CHECK(b == doctest::Approx(-a).epsilon(1e-12));
}

TEST_CASE("grid helpers and validation") {
    CHECK(steps_for(1.0, 0.02) == 128);
    CHECK(steps_for(1.0, 0.0025) == 1024);
    CHECK(steps_for(2.0, 0.02) == 256);
    CHECK_THROWS_AS(steps_for(1.0, 0.0), parameter_error);
    rng_policy rp{1};
    path2d p = sample_path(process_spec::brownian(), 1.0, 8, rp, 0);
    CHECK_THROWS_AS(alpha_prime(p, process_spec::brownian(), 0.01, region_spec::triangle(0.3)), parameter_error);
    CHECK_THROWS_AS(alpha_prime(p, process_spec::brownian(), 0.01, region_spec::rectangle(0.5, 0.75, 0.25, 1.0)),
                    parameter_error);
    CHECK(alpha_prime(p, process_spec::brownian(), 0.01, region_spec::triangle(1.0)).under_resolved);
    path2d odd = sample_path(process_spec::brownian(), 1.0, 7, rp, 0);
    CHECK_THROWS_AS(discretization_bias({odd}, process_spec::brownian(), 0.05), parameter_error);
    double v[5] = {1, 2, 3, 4, 5};
    CHECK(pairwise_sum(v, 5) == 15.0);
}

TEST_CASE("discretization self-check at eps = 0.01, 2048 vs 1024 steps") {
    auto b = discretization_self_check(process_spec::brownian(), 1.0, 0.01, 2048, rng_policy{5}, 40);
    CHECK(b.n_paths == 40);
    CHECK(b.relative < 0.05);
}
