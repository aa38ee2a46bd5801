#pragma once

#include <memory>
#include <string>
#include <vector>

#include "iltlab/process.hpp"
#include "iltlab/quadrature.hpp"

namespace iltlab {

struct mollifier_params {
    double epsilon = 0.01;
    double beta = 2.0;
    void validate() const;
};

// unit-time radial functions of the isotropic stable law:
// f(rho) = (1/2pi) int r J0(r rho) e^{-r^beta} dr, g(rho) = -f'(rho) = (1/2pi) int r^2 J1(r rho) e^{-r^beta} dr
namespace stable_radial {

double f_series(double beta, double rho);
double g_series(double beta, double rho);
quad_result f_quad(double beta, double rho);
quad_result g_quad(double beta, double rho);
// false when the truncated series is not accurate enough at this rho
bool f_asymptotic(double beta, double rho, double& out);
bool g_asymptotic(double beta, double rho, double& out);
double f(double beta, double rho);
double g(double beta, double rho);
double g_slope_at_zero(double beta);

}

struct profile_grid {
    double rho_min = 1e-3;
    double rho_max = 200.0;
    int per_decade = 100;
    double rho_cut = 1e5;
};

// g on log-spaced radii, cubic interpolation of log g in log rho
class radial_profile {
public:
    double beta = 1.5;
    profile_grid grid;
    std::vector<double> log_values;
    double tail_coeff = 0.0;
    double slope0 = 0.0;
    double achieved = 0.0;

    double operator()(double rho) const;
    std::size_t size() const { return log_values.size(); }
    double node(std::size_t i) const;
private:
    friend radial_profile build_radial_profile(double, double, const profile_grid&);
    friend radial_profile load_radial_profile(const std::string&);
    double log_lo_ = 0.0, h_ = 1.0;
    void finish();
};

radial_profile build_radial_profile(double beta, double tolerance, const profile_grid& grid = {});

std::string profile_cache_name(double beta, const profile_grid& grid);
void save_radial_profile(const radial_profile& p, const std::string& file);
radial_profile load_radial_profile(const std::string& file);
// loads from dir when a matching file exists, else builds and stores it
radial_profile cached_radial_profile(double beta, double tolerance, const profile_grid& grid, const std::string& dir);

// process-wide registry used by density_dx1 for stable specs
const radial_profile& shared_profile(double beta);
void set_profile_cache_dir(const std::string& dir);

double density(const process_spec& spec, double eps, double x1, double x2);
double density_dx1(const process_spec& spec, double eps, double x1, double x2);

// evaluation object for f'_eps used in the pair loop
struct dx1_kernel {
    bool gaussian = true;
    double eps = 0.01;
    // gaussian
    double inv4eps = 0.0, pref = 0.0;
    // stable
    const radial_profile* profile = nullptr;
    double scale = 1.0, amp = 1.0, cut2 = 0.0;

    static dx1_kernel make(const process_spec& spec, double eps);
    double operator()(double y1, double y2) const;
};

}
