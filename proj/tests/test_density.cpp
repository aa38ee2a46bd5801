#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "iltlab/density.hpp"
#include "iltlab/errors.hpp"
#include "iltlab/io.hpp"

using namespace iltlab;
using boost::math::quadrature::gauss_kronrod;
const double pi = std::numbers::pi;

TEST_CASE("gaussian mollifier is the heat kernel with variance 2 eps") {
    process_spec b = process_spec::brownian();
    double eps = 0.3;
    auto radial = [&](double r) { return 2 * pi * r * density(b, eps, r, 0.0); };
    double mass = gauss_kronrod<double, 61>::integrate(radial, 0.0, 20.0, 15, 1e-13);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    double h = 1e-5;
    double fd = (density(b, eps, 0.4 + h, 0.2) - density(b, eps, 0.4 - h, 0.2)) / (2 * h);
    CHECK(density_dx1(b, eps, 0.4, 0.2) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("stable radial density against the Hankel integral") {
    for (double beta : {1.2, 1.5, 1.8}) {
        for (double rho : {0.0, 0.5, 1.0, 3.0}) {
            auto f = [&](double r) { return r * boost::math::cyl_bessel_j(0, r * rho) * std::exp(-std::pow(r, beta)); };
            double ref = gauss_kronrod<double, 61>::integrate(f, 0.0, 60.0, 20, 1e-13) / (2 * pi);
            CHECK(stable_radial::f(beta, rho) == doctest::Approx(ref).epsilon(1e-8));
        }
    }
}

TEST_CASE("disk mass matches the Hankel form of P(|X| < R), and g = -f'") {
    // P(|X_1| < R) = R int_0^inf J1(k R) e^{-k^beta} dk
    for (double beta : {1.3, 1.7}) {
        for (double R : {0.5, 3.0}) {
            auto radial = [&](double r) { return 2 * pi * r * stable_radial::f(beta, r); };
            double mass = gauss_kronrod<double, 61>::integrate(radial, 0.0, R, 15, 1e-12);
            auto h = [&](double k) { return boost::math::cyl_bessel_j(1, k * R) * std::exp(-std::pow(k, beta)); };
            double ref = R * gauss_kronrod<double, 61>::integrate(h, 0.0, 80.0, 25, 1e-13);
            CHECK(mass == doctest::Approx(ref).epsilon(1e-8));
        }
        for (double rho : {0.3, 2.0, 12.0}) {
            double h = 1e-4 * rho;
            double fd = -(stable_radial::f(beta, rho + h) - stable_radial::f(beta, rho - h)) / (2 * h);
            CHECK(stable_radial::g(beta, rho) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("series, quadrature and asymptotic branches agree where they overlap") {
    double beta = 1.5;
    for (double rho : {2.0, 4.0}) {
        CHECK(stable_radial::f_series(beta, rho) == doctest::Approx(stable_radial::f_quad(beta, rho).value).epsilon(1e-8));
        CHECK(stable_radial::g_series(beta, rho) == doctest::Approx(stable_radial::g_quad(beta, rho).value).epsilon(1e-8));
    }
    double out = 0.0;
    if (stable_radial::f_asymptotic(beta, 30.0, out))
        CHECK(out == doctest::Approx(stable_radial::f_quad(beta, 30.0).value).epsilon(1e-6));
}

TEST_CASE("beta close to 2 approaches the gaussian linearly") {
    double beta = 1.999;
    for (double rho : {0.0, 0.7, 1.5, 3.0}) {
        double gauss = std::exp(-rho * rho / 4) / (4 * pi);
        CHECK(std::fabs(stable_radial::f(beta, rho) - gauss) < 20 * (2 - beta) * (1.0 / (4 * pi)));
    }
}

TEST_CASE("stable dx1 kernel matches the derivative of the density") {
    process_spec s = process_spec::stable(1.5);
    double eps = 0.02;
    dx1_kernel k = dx1_kernel::make(s, eps);
    for (auto [y1, y2] : {std::pair{0.01, 0.02}, std::pair{0.1, -0.05}, std::pair{0.5, 0.3}}) {
        double h = 1e-4 * std::hypot(y1, y2);
        double fd = (density(s, eps, y1 + h, y2) - density(s, eps, y1 - h, y2)) / (2 * h);
        CHECK(k(y1, y2) == doctest::Approx(fd).epsilon(1e-4));
        CHECK(k(-y1, y2) == doctest::Approx(-k(y1, y2)));
    }
}

TEST_CASE("profile cache round trip and corruption") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "iltlab_test_profile";
    fs::remove_all(dir);
    profile_grid g;
    radial_profile a = cached_radial_profile(1.4, 1e-6, g, dir.string());
    radial_profile b = cached_radial_profile(1.4, 1e-6, g, dir.string());
    CHECK(a.log_values == b.log_values);
    std::string file = (dir / profile_cache_name(1.4, g)).string();
    REQUIRE(file_exists(file));
    std::string body = read_file(file);
    body[body.size() / 2] ^= 0x5a;
    write_file_atomic(file, body);
    CHECK_THROWS(load_radial_profile(file));
    radial_profile c = cached_radial_profile(1.4, 1e-6, g, dir.string());
    CHECK(c.log_values == a.log_values);
    fs::remove_all(dir);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(density(process_spec::brownian(), 0.0, 1, 1), parameter_error);
    CHECK_THROWS_AS(build_radial_profile(2.0, 1e-6), parameter_error);
    mollifier_params m{-1.0, 1.5};
    CHECK_THROWS_AS(m.validate(), parameter_error);
}
