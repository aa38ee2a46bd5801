#include "doctest.h"

#include <cmath>
#include <vector>

#include "iltlab/errors.hpp"
#include "iltlab/process.hpp"

using namespace iltlab;

TEST_CASE("process_spec validation") {
    CHECK_THROWS_AS(process_spec::stable(1.0).validate(), parameter_error);
    CHECK_THROWS_AS(process_spec::stable(2.5).validate(), parameter_error);
    CHECK_NOTHROW(process_spec::stable(1.5).validate());
    process_spec bad{process_kind::brownian, 1.5};
    CHECK_THROWS_AS(bad.validate(), parameter_error);
}

TEST_CASE("positive stable Laplace transform") {
    // E exp(-lambda S) = exp(-lambda^alpha)
    rng_stream r(5);
    const int n = 200000;
    for (double alpha : {0.6, 0.75}) {
        for (double lam : {0.5, 1.0, 2.0}) {
            double s = 0, s2 = 0;
            for (int i = 0; i < n; ++i) {
                double v = std::exp(-lam * positive_stable(r, alpha));
                s += v;
                s2 += v * v;
            }
            double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
            CHECK(std::fabs(m - std::exp(-std::pow(lam, alpha))) < 5 * se);
        }
    }
}

TEST_CASE("brownian increments have per-coordinate variance 2t") {
    rng_policy p{77};
    const int n = 4000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        path2d path = sample_path(process_spec::brownian(), 0.5, 4, p, i);
        s1 += path.x1.back() * path.x1.back();
        s2 += path.x2.back() * path.x2.back();
    }
    double target = 2 * 0.5;
    double se = target * std::sqrt(2.0 / n);
    CHECK(std::fabs(s1 / n - target) < 5 * se);
    CHECK(std::fabs(s2 / n - target) < 5 * se);
}

TEST_CASE("empirical characteristic function matches exp(-t|p|^beta)") {
    rng_policy p{11};
    for (double beta : {1.3, 2.0}) {
        process_spec spec = beta == 2.0 ? process_spec::brownian() : process_spec::stable(beta);
        std::vector<path2d> paths;
        for (int i = 0; i < 1000; ++i) paths.push_back(sample_path(spec, 1.0, 64, p, i));
        double t = 8.0 / 64.0;
        for (double q : {0.7, 2.0}) {
            char_estimate ce = empirical_char_function(paths, q * 0.6, q * 0.8, 8);
            CHECK(std::fabs(ce.value.real() - std::exp(-t * std::pow(q, beta))) < 4 * ce.se_re);
            CHECK(std::fabs(ce.value.imag()) < 4 * ce.se_im);
        }
    }
}

TEST_CASE("paths are deterministic and coarsen keeps the same points") {
    rng_policy p{3};
    path2d a = sample_path(process_spec::stable(1.5), 1.0, 16, p, 4);
    path2d b = sample_path(process_spec::stable(1.5), 1.0, 16, p, 4);
    CHECK(a.x1 == b.x1);
    CHECK(a.x2 == b.x2);
    CHECK(a.x1.front() == 0.0);
    path2d c = coarsen(a, 4);
    REQUIRE(c.n_steps == 4);
    for (std::size_t i = 0; i <= 4; ++i) CHECK(c.x1[i] == a.x1[4 * i]);
    CHECK_THROWS_AS(sample_path(process_spec::brownian(), -1.0, 4, p, 0), parameter_error);
}
