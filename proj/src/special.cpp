#include "iltlab/special.hpp"

#include <cmath>
#include <numbers>

namespace iltlab {

namespace {

double i1_series(double z) {
    double h = 0.5 * z;
    double h2 = h * h;
    double term = h;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-z} I1(z) ~ (2 pi z)^{-1/2} sum (-1)^k a_k / z^k
double i1e_asymptotic(double z) {
    const double mu = 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        double odd = 2.0 * k - 1.0;
        double next = -term * (mu - odd * odd) / (8.0 * k * z);
        if (std::fabs(next) > std::fabs(term)) break;
        term = next;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

const double switch_point = 20.0;

}

double bessel_i1(double z) {
    if (z < 0) return -bessel_i1(-z);
    if (z <= switch_point) return i1_series(z);
    return i1e_asymptotic(z) * std::exp(z);
}

double bessel_i1e(double z) {
    if (z < 0) return -bessel_i1e(-z);
    if (z <= switch_point) return i1_series(z) * std::exp(-z);
    return i1e_asymptotic(z);
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::fabs(x)); }

double bessel_j1(double x) { return x < 0 ? -std::cyl_bessel_j(1.0, -x) : std::cyl_bessel_j(1.0, x); }

double bessel_j_zero_estimate(double nu, int k) {
    double mu = 4.0 * nu * nu;
    double b = (k + 0.5 * nu - 0.25) * std::numbers::pi;
    double e = 8.0 * b;
    return b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

}
