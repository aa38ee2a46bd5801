#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iltlab/quadrature.hpp"

namespace iltlab {

struct constant_report {
    std::string name;
    double value = 0.0;
    double uncertainty = 0.0;
    std::string method;
    double cross_check = 0.0;
    std::string cross_method;
    bool pass = false;
    std::string to_json() const;
};

// sqrt5 / (8 2^{1/4} pi), cross-checked against 10/(128 sqrt2 pi^2)
constant_report k_brownian();
// the same constant written as sqrt5 / (pi sqrt(128 sqrt2))
double k_brownian_abstract_form();

// int_0^pi (1 + rho^2 + 2 rho cos t)^{-beta/2} cos t dt, u = 1 - rho passed separately for accuracy near 1
double stable_phi(double beta, double rho, double u);
double stable_phi(double beta, double rho);
double stable_phi_quadrature(double beta, double rho, double u);

quad_config constants_default_config();

// int int |p|^-b |q|^-b |p+q|^-b e^{-(|p|^b+|q|^b)} p1 q1 dp dq
double j1_quadrature(double beta, const quad_config& cfg, double* error = nullptr);

struct mc_estimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
};
// importance sampling in R^4
mc_estimate j1_monte_carlo(double beta, std::size_t samples, std::uint64_t seed);

constant_report j1_stable(double beta, const quad_config& cfg, std::size_t mc_samples = 8000000, std::uint64_t seed = 20240917);

// A(eps) by (r, s, theta) quadrature
double j2_regularized(double beta, double eps, const quad_config& cfg, double* error = nullptr);
// angle-first iterated integral without regularization; absolutely convergent only for beta < 3/2
double j2_direct(double beta, const quad_config& cfg, double* error = nullptr);

// |A(eps)| <= K int |p|^{2-2b} e^{-|p|^b} dp, K = sup |inner q integral| / |p|
double j2_uniform_bound(double beta);

struct extrapolation {
    std::vector<double> eps;
    std::vector<double> values;
    std::vector<double> gaps;
    double limit = 0.0;
    double c1 = 0.0;
    double kappa = 0.0;
    double spread = 0.0;  // |last value - limit|
    std::size_t fit_points = 0;  // smallest-eps points used by the fit
    bool cauchy = false;  // each gap at most twice the previous one
    std::string to_json() const;
};

// fit A = J2 + c1 eps^kappa with kappa free, over the last tail points of the ladder
extrapolation extrapolate_power(const std::vector<double>& eps, const std::vector<double>& values, std::size_t tail = 4);
extrapolation j2_ladder(double beta, const std::vector<double>& eps, const quad_config& cfg);
std::vector<double> default_j2_ladder();

struct c_beta_report {
    constant_report c;         // (J1 + J2) / (2 sqrt2 pi^2)
    constant_report j1;
    constant_report j2;
    extrapolation ladder;
    double variance_rate = 0.0;  // -(J1 + J2) / (8 pi^4)
    std::string to_json() const;
};

// throws instability_error when the ladder is not Cauchy
c_beta_report c_beta(double beta, const quad_config& cfg, const std::vector<double>& ladder = default_j2_ladder(),
                     std::size_t mc_samples = 8000000, std::uint64_t seed = 20240917);
double c_beta_from_sum(double j_sum);

}
