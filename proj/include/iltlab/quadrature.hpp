#pragma once

#include <functional>
#include <string>
#include <vector>

namespace iltlab {

struct quad_config {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    bool bessel_zero_panels = true;
    void validate() const;
};

struct quad_result {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

using integrand = std::function<double(double)>;

// global adaptive Gauss-Kronrod 21 over the panels between consecutive breakpoints
quad_result integrate_panels(const integrand& f, const std::vector<double>& points, const quad_config& cfg);
quad_result integrate(const integrand& f, double a, double b, const quad_config& cfg);
// [a, inf) through x = a + t/(1-t)
quad_result integrate_to_infinity(const integrand& f, double a, const quad_config& cfg);

// value or quadrature_error carrying the achieved estimate
double checked(const quad_result& r, const std::string& what);

// log-spaced breakpoints lo*10^k up to hi, plus 0 when lo_zero
std::vector<double> decade_points(double lo, double hi, bool lo_zero);

}
