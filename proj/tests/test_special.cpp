#include "doctest.h"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "iltlab/special.hpp"

using namespace iltlab;

TEST_CASE("bessel I1 and scaled I1 against boost") {
    for (double z : {1e-6, 0.01, 0.5, 1.0, 5.0, 19.9, 20.1, 35.0, 100.0, 600.0}) {
        double ref = boost::math::cyl_bessel_i(1, z);
        if (z < 500) CHECK(bessel_i1(z) == doctest::Approx(ref).epsilon(1e-13));
        CHECK(bessel_i1e(z) == doctest::Approx(std::exp(-z) * ref).epsilon(1e-12));
    }
    CHECK(bessel_i1(0.0) == 0.0);
}

TEST_CASE("bessel J0 and J1 against boost") {
    for (double x : {0.0, 0.3, 1.0, 2.404825557695773, 7.0, 25.0, 80.0}) {
        CHECK(bessel_j0(x) == doctest::Approx(boost::math::cyl_bessel_j(0, x)).epsilon(1e-12).scale(1.0));
        CHECK(bessel_j1(x) == doctest::Approx(boost::math::cyl_bessel_j(1, x)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("McMahon zero estimates are close to the true zeros") {
    for (int k = 1; k <= 10; ++k) {
        CHECK(std::fabs(bessel_j_zero_estimate(0, k) - boost::math::cyl_bessel_j_zero(0.0, k)) < 2e-2);
        CHECK(std::fabs(bessel_j_zero_estimate(1, k) - boost::math::cyl_bessel_j_zero(1.0, k)) < 5e-2);
    }
}
