#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iltlab/quadrature.hpp"

namespace iltlab {

// |quadrature of int_0^{2pi} e^{-z cos t} cos t dt - (-2 pi I1(z))|
double bessel_angular_identity_error(double z);

struct i_half_report {
    double quadrature = 0.0;  // int_0^inf e^{-r^2 c} I1(2 r s x) dr, c = x+y+1
    double stated = 0.0;      // (e^{s^2x^2/c} - 1)/(sqrt2 s x)
    double gr_form = 0.0;     // sqrt(pi)/(2 sqrt c) e^z I_{1/2}(z), z = s^2x^2/(2c)
    double corrected = 0.0;   // (e^{s^2x^2/c} - 1)/(2 s x)
    double err_stated = 0.0, err_gr = 0.0, err_corrected = 0.0;
};

i_half_report bessel_i_half_identity(double s, double x, double y);
// error against the stated closed form
double bessel_i_half_identity_error(double s, double x, double y);

double case1_inner_integral(double M);
// d/dM of case1_inner_integral through the boundary terms, quadrature and closed form
double case1_inner_derivative(double M);
double case1_inner_derivative_closed(double M);
double case1_second_integral(double M);
// total derivative of case1_second_integral, three-term form
double case1_second_derivative(double M);
double case2_integral(double M);
double case2_integral_derivative(double M);
std::pair<double, double> case2_correction_integrals(double M);

enum class order2_case { case1, case2 };
std::string case_name(order2_case c);

// polar-reduced frequency integral over (r, s, x), angular prefactor -2 pi^2
double fourier_second_moment(double eps, order2_case c);

// int int exp(-quadratic form) p1 q1 dp dq in closed form, -pi^2 b / (2 D^2)
double order2_kernel(order2_case c, double a, double b, double cc, double eps);
enum class time_region { cube, simplex };
// integral of order2_kernel over {a,b,c < side} or {a+b+c < side}
double order2_region_integral(order2_case c, double eps, time_region region, double side);

// E[alpha'_eps(T)^2] for brownian motion from the exact Gaussian kernel
double brownian_second_moment_exact(double T, double eps);
// E[alpha'_eps^2] over the rectangle [0,S]x[S,T], 4-D tensor quadrature of C / (32 pi^2 D^2)
double brownian_rectangle_second_moment_exact(double S, double T, double eps);

struct asymptotic_fit {
    double a = 0.0, b = 0.0, c = 0.0;
    double residual = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::string to_json(const std::string& target, double stated_constant, bool pass) const;
};

// least squares a log^2 M + b log M + c
asymptotic_fit fit_log_asymptotics(const std::vector<double>& grid, const std::vector<double>& values);
// a log^2 M + b log M, for short grids
asymptotic_fit fit_log_leading(const std::vector<double>& grid, const std::vector<double>& values);

enum class lemma_id { bnd1, bnd2, bnd3, bnd4, bnd11 };
std::string lemma_name(lemma_id l);

struct probe_point {
    std::vector<std::pair<std::string, double>> params;
    double value = 0.0;
    double scaled = 0.0;
};

struct probe_report {
    lemma_id lemma = lemma_id::bnd1;
    std::vector<probe_point> points;
    double max_scaled = 0.0;
    double reference_max = 0.0;   // max scaled over the finest eps slice
    double tail_elasticity = 0.0; // max d log(scaled) / d log(driver) at the asymptotic end
    bool bounded = false;
    double slope = 0.0;         // bnd1
    bool zero_case_exact = false; // bnd3
    double uniform_bound = 0.0; // bnd2
    std::string to_json() const;
};

struct probe_params {
    std::vector<double> eps;
    std::vector<double> k;     // |k| or |a| or |p|
    std::vector<double> a;     // bnd3/bnd11 time parameter
    std::vector<int> n;        // bnd2 n, bnd4 m
    double beta = 1.5;
    double T = 1.0;
};

// worst tail elasticity of `scaled` along parameter `driver`, grouped by the other parameters
double scaled_tail_elasticity(const std::vector<probe_point>& pts, std::size_t driver, bool toward_zero, double cap);

probe_params default_probe_params(lemma_id l);
probe_report lemma_bound_probe(lemma_id l, const probe_params& p);

// individual lemma integrands, exposed for tests
double bnd1_value(double eps);
double bnd2_value(double eps, double a, int n);
double bnd3_value(double eps, double k1, double k2, double a);
double bnd4_value(double eps, double k, int m);
double bnd11_value(double beta, double eps, double a, double p);

struct sign_report {
    std::size_t samples = 0;
    std::size_t violations = 0;
};
// the (r,s,x)-reduced integrands are nonnegative, the Gaussian kernel is nonpositive
sign_report sign_property_check(double eps);

}
