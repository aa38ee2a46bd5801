#include "doctest.h"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "iltlab/errors.hpp"
#include "iltlab/quadlab.hpp"

using namespace iltlab;
using boost::math::quadrature::gauss_kronrod;
const double pi = std::numbers::pi;

namespace {

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    return gauss_kronrod<double, 31>::integrate(f, a, b, 25, tol);
}

// dilogarithm for x <= 0
double li2_neg(double x) {
    double z = -x;
    if (z <= 0.5) {
        double s = 0, p = 1;
        for (int k = 1; k < 200; ++k) {
            p *= x;
            s += p / (double(k) * k);
        }
        return s;
    }
    if (z <= 1.0) {
        // Li2(x) + Li2(x/(x-1)) = -log^2(1-x)/2, x/(x-1) in [0, 1/2]
        double y = x / (x - 1), s = 0, p = 1;
        for (int k = 1; k < 200; ++k) {
            p *= y;
            s += p / (double(k) * k);
        }
        return -0.5 * std::log1p(-x) * std::log1p(-x) - s;
    }
    return -pi * pi / 6 - 0.5 * std::log(z) * std::log(z) - li2_neg(-1 / z);
}

}

TEST_CASE("angular Bessel identity") {
    for (double z : {0.1, 1.0, 10.0}) CHECK(bessel_angular_identity_error(z) < 1e-10);
}

TEST_CASE("half-order Bessel identity: quadrature equals the G&R and corrected forms") {
    auto r = bessel_i_half_identity(0.7, 1.3, 0.4);
    CHECK(r.quadrature == doctest::Approx(0.1972188).epsilon(1e-6));
    CHECK(r.err_gr < 1e-10);
    CHECK(r.err_corrected < 1e-10);
    CHECK(r.stated / r.corrected == doctest::Approx(std::sqrt(2.0)));
    // small sx: the integral is sx / (2 (x + y + 1)) to leading order
    auto small = bessel_i_half_identity(1e-3, 1e-2, 0.5);
    CHECK(small.quadrature == doctest::Approx(1e-5 / (2 * 1.51)).epsilon(1e-6));
}

TEST_CASE("case1 integrals against two-dimensional brute force") {
    const double M = 50;
    auto inner = [&](double x) {
        return gk([&](double y) { return x / ((x + 1) * ((x + 1) * y + 2 * x + 1)); }, 0, M);
    };
    CHECK(case1_inner_integral(M) == doctest::Approx(gk(inner, 0, M, 1e-11)).epsilon(1e-9));
    auto second = [&](double x) {
        double B = 2 * x + 1 + M * (x + 1);
        return gk([&](double y) { return x / ((x + 1) * ((x + 1) * y + B)); }, 0, M);
    };
    CHECK(case1_second_integral(M) == doctest::Approx(gk(second, 0, M, 1e-11)).epsilon(1e-9));
}

TEST_CASE("derivatives against finite differences and the closed form") {
    for (double M : {10.0, 1e3}) {
        double h = 1e-4 * M;
        double d1 = (case1_inner_integral(M + h) - case1_inner_integral(M - h)) / (2 * h);
        CHECK(case1_inner_derivative(M) == doctest::Approx(d1).epsilon(1e-6));
        CHECK(case1_inner_derivative_closed(M) == doctest::Approx(case1_inner_derivative(M)).epsilon(1e-10));
        double d2 = (case1_second_integral(M + h) - case1_second_integral(M - h)) / (2 * h);
        CHECK(case1_second_derivative(M) == doctest::Approx(d2).epsilon(1e-6));
        double d3 = (case2_integral(M + h) - case2_integral(M - h)) / (2 * h);
        CHECK(case2_integral_derivative(M) == doctest::Approx(d3).epsilon(1e-6));
    }
}

TEST_CASE("case2 integral equals -2 Li2(-M) + Li2(-2M)") {
    for (double M : {0.5, 10.0, 1e4}) CHECK(case2_integral(M) == doctest::Approx(-2 * li2_neg(-M) + li2_neg(-2 * M)).epsilon(1e-10));
}

TEST_CASE("order-2 kernel factorizes into two 2-D Gaussian integrals") {
    double a = 0.3, b = 0.5, c = 0.2, eps = 0.1;
    // case1 exponent: p^2 (a + c + eps) + |p+q|^2 b + q^2 eps per coordinate
    double A = a + c + eps, C = eps;
    auto quad = [&](double p, double q) { return A * p * p + b * (p + q) * (p + q) + C * q * q; };
    auto coord = [&](bool with_pq) {
        return gk([&](double p) {
            return gk([&](double q) { return std::exp(-quad(p, q)) * (with_pq ? p * q : 1.0); }, -40, 40, 1e-13);
        }, -40, 40, 1e-13);
    };
    double ref = coord(true) * coord(false);
    CHECK(order2_kernel(order2_case::case1, a, b, c, eps) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("exact brownian second moment against a 3-D brute force of the kernel") {
    const double T = 1.0, eps = 0.2;
    auto f = [&](double a, double b, double c) {
        double w = T - a - b - c;
        return w * (order2_kernel(order2_case::case1, a, b, c, eps) + order2_kernel(order2_case::case2, a, b, c, eps));
    };
    // fixed tensor Gauss-Legendre over the simplex a + b + c < T
    using gl = boost::math::quadrature::gauss<double, 40>;
    double tri = gl::integrate([&](double b) {
        return gl::integrate([&](double a) {
            return gl::integrate([&](double c) { return f(a, b, c); }, 0.0, T - a - b);
        }, 0.0, T - b);
    }, 0.0, T);
    double ref = -2.0 / std::pow(2 * pi, 4) * tri;
    CHECK(brownian_second_moment_exact(T, eps) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("rectangle second moment against a direct 4-D sum over both interval pairs") {
    const double S = 0.3, T = 1.0, eps = 0.2;
    using gl = boost::math::quadrature::gauss<double, 30>;
    auto kern = [&](double s, double t, double sp, double tp) {
        double C = std::min(t, tp) - std::max(s, sp);
        double D = (t - s + eps) * (tp - sp + eps) - C * C;
        return C / (32 * pi * pi * D * D);
    };
    double v = gl::integrate([&](double s) {
        return gl::integrate([&](double t) {
            // split at the kinks of min/max
            auto in_sp = [&](double sp) {
                auto f = [&](double tp) { return kern(s, t, sp, tp); };
                return gl::integrate(f, S, t) + gl::integrate(f, t, T);
            };
            return gl::integrate(in_sp, 0.0, s) + gl::integrate(in_sp, s, S);
        }, S, T);
    }, 0.0, S);
    CHECK(brownian_rectangle_second_moment_exact(S, T, eps) == doctest::Approx(v).epsilon(1e-6));
    CHECK_THROWS_AS(brownian_rectangle_second_moment_exact(1.0, 1.0, eps), parameter_error);
}

TEST_CASE("log-asymptotic fits recover exact coefficients") {
    std::vector<double> M = {1e3, 1e4, 1e5, 1e6}, v;
    for (double m : M) v.push_back(0.5 * std::log(m) * std::log(m) - 2 * std::log(m) + 3);
    auto f = fit_log_asymptotics(M, v);
    CHECK(f.a == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(f.b == doctest::Approx(-2).epsilon(1e-8));
    CHECK(f.c == doctest::Approx(3).epsilon(1e-7));
    CHECK_THROWS_AS(fit_log_asymptotics({1, 10, 100}, {1, 2, 3}), parameter_error);
}

TEST_CASE("tail elasticity separates bounded ratios from a missing log factor") {
    std::vector<probe_point> bounded, growing;
    for (double e : {1e-2, 1e-4, 1e-6, 1e-8}) {
        double L = std::log(1 / e);
        bounded.push_back({{{"eps", e}}, 0.0, 1.0 - 1.0 / L});
        growing.push_back({{{"eps", e}}, 0.0, L});
    }
    CHECK(scaled_tail_elasticity(bounded, 0, true, INFINITY) < 0.5);
    CHECK(scaled_tail_elasticity(growing, 0, true, INFINITY) == doctest::Approx(1.0));
}

TEST_CASE("lemma probes") {
    double s = (bnd1_value(1e-7) - bnd1_value(1e-6)) / std::log(10.0);
    CHECK(s == doctest::Approx(pi).epsilon(0.05));
    CHECK(bnd3_value(1e-3, 0.0, 1.0, 0.5) == 0.0);
    // bnd3 closed form at k = 0: pi k1 (log((eps + a)/eps) + eps/(eps + a) - 1)
    double eps = 1e-3, a = 0.5, k1 = 1e-9;
    double closed = pi * k1 * (std::log((eps + a) / eps) + eps / (eps + a) - 1);
    CHECK(bnd3_value(eps, k1, 0.0, a) == doctest::Approx(closed).epsilon(1e-6));
    auto p = lemma_bound_probe(lemma_id::bnd3, default_probe_params(lemma_id::bnd3));
    CHECK(p.zero_case_exact);
    CHECK(p.bounded);
}

TEST_CASE("sign property of the reduced integrands") {
    auto r = sign_property_check(1e-3);
    CHECK(r.samples > 100);
    CHECK(r.violations == 0);
}

TEST_CASE("frequency-space second moment equals the time-domain cube integral") {
    for (order2_case c : {order2_case::case1, order2_case::case2}) {
        double f = fourier_second_moment(1e-2, c);
        double t = order2_region_integral(c, 1e-2, time_region::cube, 1.0);
        CHECK(f == doctest::Approx(t).epsilon(1e-6));
    }
}
