#pragma once

namespace iltlab {

// modified Bessel I1 by power series (z <= 20) and large-z asymptotic series
double bessel_i1(double z);
// exp(-z) I1(z)
double bessel_i1e(double z);

double bessel_j0(double x);
double bessel_j1(double x);

// McMahon estimate of the k-th positive zero of J_nu (k >= 1)
double bessel_j_zero_estimate(double nu, int k);

}
