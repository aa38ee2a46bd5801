#include "iltlab/quadlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "json.hpp"

#include "iltlab/errors.hpp"
#include "iltlab/special.hpp"

namespace iltlab {

using nlohmann::json;

namespace {

const double pi = std::numbers::pi;

quad_config tight() {
    quad_config c;
    c.rel_tol = 1e-12;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 20000;
    return c;
}

quad_config with_tol(double rel) {
    quad_config c;
    c.rel_tol = rel;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 20000;
    return c;
}

std::vector<double> merge_points(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::vector<double> out;
    for (double p : pts)
        if (p >= lo && p <= hi && std::isfinite(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> decades_between(double lo, double hi, double start) {
    std::vector<double> pts;
    for (double x = start; x < hi; x *= 10.0)
        if (x > lo) pts.push_back(x);
    return pts;
}

}

double bessel_angular_identity_error(double z) {
    if (!(z > 0.0)) throw parameter_error("z must be positive");
    auto f = [z](double t) { return std::exp(-z * std::cos(t)) * std::cos(t); };
    std::vector<double> pts = {0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi};
    double q = checked(integrate_panels(f, pts, tight()), "angular identity");
    return std::fabs(q - (-2.0 * pi * bessel_i1(z)));
}

i_half_report bessel_i_half_identity(double s, double x, double y) {
    if (!(s > 0.0 && x > 0.0 && y >= 0.0)) throw parameter_error("requires s, x > 0 and y >= 0");
    const double c = x + y + 1.0;
    const double k = 2.0 * s * x;
    // e^{-r^2 c} I1(k r) = e^{-r^2 c + k r} i1e(k r); peak at k/(2c), gaussian width 1/sqrt(c)
    auto f = [=](double r) { return std::exp(-r * r * c + k * r) * bessel_i1e(k * r); };
    double peak = k / (2.0 * c), w = 1.0 / std::sqrt(c);
    double rmax = peak + 40.0 * w;
    std::vector<double> pts = merge_points({peak - 10 * w, peak - 3 * w, peak, peak + 3 * w, peak + 10 * w}, 0.0, rmax);
    i_half_report r;
    r.quadrature = checked(integrate_panels(f, pts, tight()), "i_half quadrature");
    double e = s * s * x * x / c;
    r.stated = std::expm1(e) / (std::sqrt(2.0) * s * x);
    r.corrected = std::expm1(e) / (2.0 * s * x);
    double zz = 0.5 * e;
    r.gr_form = std::sqrt(pi) / (2.0 * std::sqrt(c)) * std::exp(zz) * boost::math::cyl_bessel_i(0.5, zz);
    r.err_stated = std::fabs(r.quadrature - r.stated);
    r.err_gr = std::fabs(r.quadrature - r.gr_form);
    r.err_corrected = std::fabs(r.quadrature - r.corrected);
    return r;
}

double bessel_i_half_identity_error(double s, double x, double y) { return bessel_i_half_identity(s, x, y).err_stated; }

namespace {

double x_integral(const std::function<double(double)>& f, double M) {
    std::vector<double> pts = {0.0};
    for (double p = 0.1; p < M; p *= 10.0) pts.push_back(p);
    pts.push_back(M);
    return checked(integrate_panels(f, pts, tight()), "x integral");
}

}

double case1_inner_integral(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto f = [M](double x) { return x / ((x + 1) * (x + 1)) * std::log1p((x + 1) * M / (2 * x + 1)); };
    return x_integral(f, M);
}

double case1_inner_derivative(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto fy = [M](double y) { return 1.0 / ((M + 1) * y + 2 * M + 1); };
    auto fx = [M](double x) { return x / ((x + 1) * ((M + 2) * x + M + 1)); };
    return M / (M + 1) * x_integral(fy, M) + x_integral(fx, M);
}

double case1_inner_derivative_closed(double M) {
    return M / ((M + 1) * (M + 1)) * std::log(((M + 1) * M + 2 * M + 1) / (2 * M + 1)) + std::log(M + 1) -
           (M + 1) / (M + 2) * std::log(((M + 2) * M + M + 1) / (M + 1));
}

double case1_second_integral(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto f = [M](double x) {
        double B = 2 * x + 1 + M * (x + 1);
        return x / ((x + 1) * (x + 1)) * std::log1p((x + 1) * M / B);
    };
    return x_integral(f, M);
}

double case1_second_derivative(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto f1 = [M](double y) { return 1.0 / ((M + 1) * y + 2 * M + 1 + M * (M + 1)); };
    auto f2 = [M](double x) { return x / ((x + 1) * ((2 * M + 2) * x + 2 * M + 1)); };
    // inner y integral of x / ((x+1) y + B)^2 in closed form
    auto f3 = [M](double x) {
        double B = 2 * x + 1 + M * (x + 1);
        return x * M / (B * ((x + 1) * M + B));
    };
    return M / (M + 1) * x_integral(f1, M) + x_integral(f2, M) - x_integral(f3, M);
}

double case2_integral(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto f = [](double x) { return x == 0.0 ? 0.0 : std::log1p(x * x / (2 * x + 1)) / x; };
    return x_integral(f, M);
}

double case2_integral_derivative(double M) { return std::log((M + 1) / (M + 1 - M * M / (M + 1))) / M; }

std::pair<double, double> case2_correction_integrals(double M) {
    if (!(M > 0.0)) throw parameter_error("M must be positive");
    auto fa = [M](double x) {
        if (x == 0.0) return 0.0;
        double d = x + 1 + M;
        return std::log1p(-x * x / (d * d)) / x;
    };
    auto fb = [M](double x) {
        if (x == 0.0) return 0.0;
        return std::log1p(-x * x / ((x + 1) * (x + 1 + M))) / x;
    };
    return {x_integral(fa, M), x_integral(fb, M)};
}

std::string case_name(order2_case c) { return c == order2_case::case1 ? "case1" : "case2"; }

double fourier_second_moment(double eps, order2_case cs) {
    if (!(eps > 0.0 && eps <= 0.1)) throw parameter_error("fourier_second_moment requires eps in (0, 0.1]");
    const double M = 1.0 / eps;
    const double sm = std::sqrt(eps);
    const double s2 = std::sqrt(2.0);
    auto weight = [=](double r, double s) {
        if (cs == order2_case::case1) {
            double g = -std::expm1(-r * r * M);
            double q = r > 0 ? g * g / (r * r) : 0.0;
            return q * s * s;
        }
        return std::expm1(-r * r * M) * std::expm1(-s * s * M);
    };
    // rotated coordinates u = (r+s)/sqrt2, v = (r-s)/sqrt2
    std::vector<double> upts = {0.0};
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0})
        if (f * sm < 8.0) upts.push_back(f * sm);
    for (double u : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) upts.push_back(u);
    upts = merge_points(upts, 0.0, 8.0);
    auto F = [&](double x) {
        const double sig = 1.0 / std::sqrt(2.0 * x + 1.0);
        auto inner_u = [&](double u) {
            auto fv = [&](double v) {
                double r = (u + v) / s2, s = (u - v) / s2;
                if (r <= 0.0 || s <= 0.0) return 0.0;
                double w = weight(r, s);
                if (w == 0.0) return 0.0;
                return w * std::exp(-(u * u + v * v) - 2.0 * v * v * x) * bessel_i1e((u * u - v * v) * x);
            };
            std::vector<double> vp = {-u, u, 0.0};
            for (double k : {1.0, 3.0, 8.0}) {
                vp.push_back(k * sig);
                vp.push_back(-k * sig);
            }
            for (double k : {1.0, 4.0}) {
                vp.push_back(-u + s2 * k * sm);
                vp.push_back(u - s2 * k * sm);
            }
            return integrate_panels(fv, merge_points(vp, -u, u), with_tol(1e-9)).value;
        };
        return integrate_panels(inner_u, upts, with_tol(1e-8)).value;
    };
    std::vector<double> xp = {0.0};
    for (double p = 1e-2; p < M; p *= 10.0) xp.push_back(p);
    for (double p = 3e-2; p < M; p *= 10.0) xp.push_back(p);
    xp = merge_points(xp, 0.0, M);
    quad_result r = integrate_panels(F, xp, with_tol(1e-7));
    return -2.0 * pi * pi * checked(r, "fourier_second_moment");
}

double order2_kernel(order2_case c, double a, double b, double cc, double eps) {
    double D = c == order2_case::case1 ? (a + b + cc + eps) * (b + eps) - b * b : (b + cc + eps) * (a + b + eps) - b * b;
    return -pi * pi * b / (2.0 * D * D);
}

double order2_region_integral(order2_case cs, double eps, time_region region, double side) {
    if (!(eps > 0.0 && side > 0.0)) throw parameter_error("eps and side must be positive");
    // D = alpha c + beta, c integrated in closed form
    auto fab = [=](double a, double b) {
        double alpha = cs == order2_case::case1 ? b + eps : a + b + eps;
        double beta = a * (b + eps) + eps * (2.0 * b + eps);
        double R = region == time_region::cube ? side : side - a - b;
        if (R <= 0.0) return 0.0;
        return -pi * pi * b / 2.0 * R / (beta * (alpha * R + beta));
    };
    std::vector<double> pts = decades_between(0.0, side, eps * 1e-2);
    pts = merge_points(pts, 0.0, side);
    auto fb = [&](double b) {
        double hi = region == time_region::cube ? side : side - b;
        if (hi <= 0.0) return 0.0;
        auto fa = [&](double a) { return fab(a, b); };
        std::vector<double> ap = merge_points(decades_between(0.0, hi, eps * 1e-2), 0.0, hi);
        ap.push_back(std::min(hi, b));
        ap = merge_points(ap, 0.0, hi);
        return integrate_panels(fa, ap, with_tol(1e-11)).value;
    };
    return checked(integrate_panels(fb, pts, with_tol(1e-10)), "order2 region integral");
}

double brownian_second_moment_exact(double T, double eps) {
    if (!(eps > 0.0 && T > 0.0)) throw parameter_error("T and eps must be positive");
    auto zlog = [](double z) {
        if (z < 1e-4) return z * z * (0.5 - z * (1.0 / 3.0 - z * (0.25 - z / 5.0)));
        return z - std::log1p(z);
    };
    auto fab = [=](double a, double b) {
        double R = T - a - b;
        if (R <= 0.0) return 0.0;
        double beta = a * (b + eps) + eps * (2.0 * b + eps);
        double a1 = b + eps, a2 = a + b + eps;
        return b * (zlog(a1 * R / beta) / (a1 * a1) + zlog(a2 * R / beta) / (a2 * a2));
    };
    auto fb = [&](double b) {
        double hi = T - b;
        if (hi <= 0.0) return 0.0;
        auto fa = [&](double a) { return fab(a, b); };
        std::vector<double> ap = decades_between(0.0, hi, eps * 1e-2);
        ap.push_back(std::min(hi, b));
        return integrate_panels(fa, merge_points(ap, 0.0, hi), with_tol(1e-11)).value;
    };
    std::vector<double> bp = merge_points(decades_between(0.0, T, eps * 1e-2), 0.0, T);
    double v = checked(integrate_panels(fb, bp, with_tol(1e-10)), "exact second moment");
    return v / (16.0 * pi * pi);
}

namespace {

// Gauss-Legendre on geometric panels L 10^-12 .. L, refined toward 0
struct geo_rule {
    std::vector<double> x, w;
    geo_rule(double L) {
        static const auto& ab = boost::math::quadrature::gauss<double, 8>::abscissa();
        static const auto& wt = boost::math::quadrature::gauss<double, 8>::weights();
        double lo = 0.0;
        for (int j = 12; j >= 0; --j) {
            double hi = L * std::pow(10.0, -j);
            double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
            for (std::size_t i = 0; i < ab.size(); ++i) {
                x.push_back(m + h * ab[i]);
                w.push_back(h * wt[i]);
                if (ab[i] != 0.0) {
                    x.push_back(m - h * ab[i]);
                    w.push_back(h * wt[i]);
                }
            }
            lo = hi;
        }
    }
};

}

double brownian_rectangle_second_moment_exact(double S, double T, double eps) {
    if (!(eps > 0.0 && S > 0.0 && T > S)) throw parameter_error("need eps > 0 and 0 < S < T");
    const double R = T - S;
    // x = S - s, y = t - S for both pairs; x < x' by symmetry, y order split into two kernels
    geo_rule rx(S), ry(R);
    auto pair = [eps](double A, double B, double C) {
        double D = (A + eps) * (B + eps) - C * C;
        return C / (D * D);
    };
    std::vector<double> part(rx.x.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < rx.x.size(); ++i) {
        double x = rx.x[i];
        geo_rule ru(S - x);
        double acc = 0.0;
        for (std::size_t j = 0; j < ru.x.size(); ++j) {
            double xp = x + ru.x[j];
            for (std::size_t k = 0; k < ry.x.size(); ++k) {
                double y = ry.x[k];
                geo_rule rv(R - y);
                double inner = 0.0;
                for (std::size_t l = 0; l < rv.x.size(); ++l) {
                    double yp = y + rv.x[l];
                    inner += rv.w[l] * (pair(x + y, xp + yp, x + y) + pair(x + yp, xp + y, x + y));
                }
                acc += ru.w[j] * ry.w[k] * inner;
            }
        }
        part[i] = rx.w[i] * acc;
    }
    double tot = 0.0;
    for (double v : part) tot += v;
    return 2.0 * tot / (32.0 * pi * pi);
}

std::string asymptotic_fit::to_json(const std::string& target, double stated_constant, bool pass) const {
    json j;
    j["target"] = target;
    j["grid"] = grid;
    j["values"] = values;
    j["a"] = a;
    j["b"] = b;
    j["c"] = c;
    j["residual"] = residual;
    j["stated_constant"] = stated_constant;
    j["pass"] = pass;
    return j.dump(2);
}

namespace {

asymptotic_fit fit_columns(const std::vector<double>& grid, const std::vector<double>& values, int cols) {
    const std::size_t n = grid.size();
    Eigen::MatrixXd A(n, cols);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(grid[i] > 0.0)) throw parameter_error("grid values must be positive");
        double L = std::log(grid[i]);
        A(i, 0) = L * L;
        A(i, 1) = L;
        if (cols > 2) A(i, 2) = 1.0;
        y(i) = values[i];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    asymptotic_fit f;
    f.a = c(0);
    f.b = c(1);
    f.c = cols > 2 ? c(2) : 0.0;
    f.residual = (A * c - y).norm();
    f.grid = grid;
    f.values = values;
    return f;
}

}

asymptotic_fit fit_log_asymptotics(const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size()) throw parameter_error("grid and values differ in length");
    if (grid.size() < 4) throw parameter_error("fit needs at least 4 grid points");
    double lo = *std::min_element(grid.begin(), grid.end()), hi = *std::max_element(grid.begin(), grid.end());
    if (!(lo > 0.0) || hi / lo < 1e3 * (1.0 - 1e-12)) throw parameter_error("grid must span at least 3 decades");
    return fit_columns(grid, values, 3);
}

asymptotic_fit fit_log_leading(const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size()) throw parameter_error("grid and values differ in length");
    if (grid.size() < 2) throw parameter_error("fit needs at least 2 grid points");
    return fit_columns(grid, values, 2);
}

std::string lemma_name(lemma_id l) {
    switch (l) {
    case lemma_id::bnd1: return "bnd1";
    case lemma_id::bnd2: return "bnd2";
    case lemma_id::bnd3: return "bnd3";
    case lemma_id::bnd4: return "bnd4";
    case lemma_id::bnd11: return "bnd11";
    }
    return "?";
}

double bnd1_value(double eps) {
    if (!(eps > 0.0)) throw parameter_error("eps must be positive");
    double top = 9.0 / std::sqrt(eps);
    auto f = [eps](double r) { return std::exp(-eps * r * r) * r / ((1 + r) * (1 + r)); };
    std::vector<double> pts = merge_points(decades_between(0.0, top, 1.0), 0.0, top);
    return 2.0 * pi * checked(integrate_panels(f, pts, with_tol(1e-11)), "bnd1");
}

namespace {

// int_0^inf rho^pw e^{-eps rho^2} (1+rho)^{-q} * 2 int_0^pi (1 + |rho e + A|)^{-n} dtheta drho
double polar_probe(double eps, double A, int n, int pw, int q) {
    double top = 9.0 / std::sqrt(eps);
    auto ang = [=](double rho) {
        auto g = [=](double t) {
            double d = std::sqrt(std::max(0.0, rho * rho + A * A + 2.0 * rho * A * std::cos(t)));
            return std::pow(1.0 + d, -n);
        };
        std::vector<double> tp = {0.0, pi};
        if (A > 0.0)
            for (double h : {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001}) tp.push_back(pi - h);
        return 2.0 * integrate_panels(g, merge_points(tp, 0.0, pi), with_tol(1e-10)).value;
    };
    auto f = [=](double rho) {
        return std::pow(rho, pw) * std::exp(-eps * rho * rho) * std::pow(1.0 + rho, -q) * ang(rho);
    };
    std::vector<double> pts = decades_between(0.0, top, 1.0);
    if (A > 0.0)
        for (double h : {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0}) pts.push_back(A + h);
    return checked(integrate_panels(f, merge_points(pts, 0.0, top), with_tol(1e-9)), "polar probe");
}

}

double bnd2_value(double eps, double a, int n) {
    if (!(eps > 0.0) || n < 1) throw parameter_error("bnd2 requires eps > 0, n >= 1");
    return polar_probe(eps, std::fabs(a), n, 1, 2);
}

double bnd4_value(double eps, double k, int m) {
    if (!(eps > 0.0) || m < 3) throw parameter_error("bnd4 requires eps > 0, m >= 3");
    return polar_probe(eps, std::fabs(k), m, 2, 0);
}

double bnd3_value(double eps, double k1, double k2, double a) {
    if (!(eps > 0.0 && a > 0.0)) throw parameter_error("bnd3 requires eps, a > 0");
    if (k1 == 0.0) return 0.0;
    double kk = k1 * k1 + k2 * k2;
    // the p integral of e^{-eps p^2} p1 e^{-|p+k|^2 t} is -pi k1 t/(eps+t)^2 e^{-|k|^2 eps t/(eps+t)}
    auto f = [=](double t) { return t / ((eps + t) * (eps + t)) * std::exp(-kk * eps * t / (eps + t)); };
    std::vector<double> pts = merge_points(decades_between(0.0, a, eps * 1e-2), 0.0, a);
    return std::fabs(pi * k1 * checked(integrate_panels(f, pts, with_tol(1e-11)), "bnd3"));
}

double bnd11_value(double beta, double eps, double a, double P) {
    if (!(beta > 1.0 && beta <= 2.0) || !(eps > 0.0 && a > 0.0 && P >= 0.0))
        throw parameter_error("bnd11 parameters out of range");
    double top = P + 2.0 * std::pow(60.0, 1.0 / beta);
    auto ang = [=](double rho) {
        auto g = [=](double t) {
            double d2 = rho * rho + P * P - 2.0 * rho * P * std::cos(t);
            return std::exp(-std::pow(std::max(d2, 0.0), beta / 2.0)) * (rho * std::cos(t) - P);
        };
        std::vector<double> tp = {0.0, 1e-3, 1e-2, 0.1, 0.3, 1.0, pi};
        return 2.0 * integrate_panels(g, tp, with_tol(1e-11)).value;
    };
    auto f = [=](double rho) {
        if (rho == 0.0) return 0.0;
        double reg = -std::expm1(-std::pow(rho, beta) * a / eps);
        return std::pow(rho, 1.0 - beta) * reg * ang(rho);
    };
    double rc = std::pow(eps / a, 1.0 / beta);
    std::vector<double> pts = decades_between(0.0, top, 1e-6);
    for (double h : {0.1, 1.0, 10.0}) pts.push_back(rc * h);
    for (double h : {0.9, 0.99, 1.0, 1.01, 1.1}) pts.push_back(P * h);
    pts.push_back(P + 1.0);
    return std::fabs(checked(integrate_panels(f, merge_points(pts, 0.0, top), with_tol(1e-9)), "bnd11"));
}

probe_params default_probe_params(lemma_id l) {
    probe_params p;
    switch (l) {
    case lemma_id::bnd1: p.eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}; break;
    case lemma_id::bnd2:
        p.eps = {1e-1, 1e-3, 1e-5, 1e-7};
        p.k = {0.0, 1.0, 10.0, 100.0};
        p.n = {1, 2, 3, 6};
        break;
    case lemma_id::bnd3:
        p.eps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        p.k = {0.1, 1.0, 10.0};
        p.a = {0.1, 0.5, 1.0};
        break;
    case lemma_id::bnd4:
        p.eps = {1e-1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
        p.k = {0.0, 1.0, 10.0, 100.0};
        p.n = {3, 4, 5};
        break;
    case lemma_id::bnd11:
        p.eps = {1e-2, 1e-4, 1e-6, 1e-8};
        p.k = {1e-3, 1e-2, 0.1, 1.0, 10.0};
        p.a = {0.1, 0.5, 1.0};
        p.beta = 1.5;
        break;
    }
    return p;
}

// series of points sharing every parameter except the one at index `driver`
// series whose tail sits below 1% of the grid maximum are ignored
double scaled_tail_elasticity(const std::vector<probe_point>& pts, std::size_t driver, bool toward_zero, double cap) {
    double top = 0.0;
    for (const auto& pt : pts) top = std::max(top, pt.scaled);
    std::map<std::vector<double>, std::vector<std::pair<double, double>>> groups;
    for (const auto& pt : pts) {
        std::vector<double> key;
        for (std::size_t i = 0; i < pt.params.size(); ++i)
            if (i != driver) key.push_back(pt.params[i].second);
        double d = pt.params[driver].second;
        if (d <= 0.0 || d > cap) continue;
        groups[key].push_back({toward_zero ? std::log(1.0 / d) : std::log(d), pt.scaled});
    }
    double worst = 0.0;
    for (auto& [key, ser] : groups) {
        std::sort(ser.begin(), ser.end());
        if (ser.size() < 2) continue;
        auto [x1, s1] = ser[ser.size() - 2];
        auto [x2, s2] = ser.back();
        if (!(s1 > 0.0 && s2 > 0.01 * top) || !(x1 > 0.0)) continue;
        worst = std::max(worst, std::log(s2 / s1) / std::log(x2 / x1));
    }
    return worst;
}

probe_report lemma_bound_probe(lemma_id l, const probe_params& p) {
    probe_report rep;
    rep.lemma = l;
    if (p.eps.empty()) throw parameter_error("probe needs an eps grid");
    for (double e : p.eps)
        if (!(e > 0.0 && e < 1.0)) throw parameter_error("probe eps must lie in (0, 1)");
    const double eps_fine = *std::min_element(p.eps.begin(), p.eps.end());
    auto finish = [&](double elasticity) {
        rep.max_scaled = 0.0;
        rep.reference_max = 0.0;
        for (const auto& pt : rep.points) {
            rep.max_scaled = std::max(rep.max_scaled, pt.scaled);
            if (pt.params[0].second == eps_fine) rep.reference_max = std::max(rep.reference_max, pt.scaled);
        }
        rep.tail_elasticity = elasticity;
        // elasticity tends to 0 for a bounded ratio and to 1 when a log factor is missing
        rep.bounded = std::isfinite(rep.max_scaled) && elasticity <= 0.5;
    };
    switch (l) {
    case lemma_id::bnd1: {
        std::vector<double> x, y;
        for (double e : p.eps) {
            probe_point pt;
            pt.params = {{"eps", e}};
            pt.value = bnd1_value(e);
            pt.scaled = pt.value / std::log(1.0 / e);
            rep.points.push_back(pt);
            x.push_back(std::log(1.0 / e));
            y.push_back(pt.value);
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= x.size();
        my /= y.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        rep.slope = sxx > 0 ? sxy / sxx : 0.0;
        finish(scaled_tail_elasticity(rep.points, 0, true, 1.0));
        rep.bounded = std::fabs(rep.slope / pi - 1.0) <= 0.05;
        break;
    }
    case lemma_id::bnd2: {
        rep.uniform_bound = pi;  // Holder bound at n = 1, decreasing in n
        bool below = true;
        for (double e : p.eps)
            for (double a : p.k)
                for (int n : p.n) {
                    probe_point pt;
                    pt.params = {{"eps", e}, {"a", a}, {"n", static_cast<double>(n)}};
                    pt.value = bnd2_value(e, a, n);
                    double holder = std::cbrt(pi * pi * 2.0 * pi / ((3.0 * n - 1.0) * (3.0 * n - 2.0)));
                    if (!(pt.value < holder)) below = false;
                    pt.scaled = pt.value / rep.uniform_bound;
                    rep.points.push_back(pt);
                }
        finish(scaled_tail_elasticity(rep.points, 0, true, 1.0));
        rep.bounded = rep.bounded && below;
        break;
    }
    case lemma_id::bnd3: {
        for (double e : p.eps)
            for (double k : p.k)
                for (int dir = 0; dir < 2; ++dir)
                    for (double a : p.a) {
                        double k1 = dir == 0 ? k : k / std::sqrt(2.0), k2 = dir == 0 ? 0.0 : k / std::sqrt(2.0);
                        probe_point pt;
                        pt.params = {{"eps", e}, {"k1", k1}, {"k2", k2}, {"a", a}};
                        pt.value = bnd3_value(e, k1, k2, a);
                        pt.scaled = pt.value / (k * std::log(1.0 / e));
                        rep.points.push_back(pt);
                    }
        finish(scaled_tail_elasticity(rep.points, 0, true, 1.0));
        rep.zero_case_exact = true;
        for (double e : p.eps)
            for (double k : p.k)
                for (double a : p.a)
                    if (bnd3_value(e, 0.0, k, a) != 0.0) rep.zero_case_exact = false;
        break;
    }
    case lemma_id::bnd4: {
        for (double e : p.eps)
            for (double k : p.k)
                for (int m : p.n) {
                    probe_point pt;
                    pt.params = {{"eps", e}, {"k", k}, {"m", static_cast<double>(m)}};
                    pt.value = bnd4_value(e, k, m);
                    pt.scaled = m == 3 ? pt.value / ((1.0 + k) + std::log(1.0 / e)) : pt.value / (1.0 + k);
                    rep.points.push_back(pt);
                }
        finish(std::max(scaled_tail_elasticity(rep.points, 0, true, 1.0), scaled_tail_elasticity(rep.points, 1, false, 1e300)));
        break;
    }
    case lemma_id::bnd11: {
        for (double e : p.eps)
            for (double pp : p.k)
                for (double a : p.a) {
                    probe_point pt;
                    pt.params = {{"eps", e}, {"p", pp}, {"a", a * p.T}};
                    pt.value = bnd11_value(p.beta, e, a * p.T, pp);
                    pt.scaled = pt.value / pp;
                    rep.points.push_back(pt);
                }
        finish(std::max(scaled_tail_elasticity(rep.points, 0, true, 1.0), scaled_tail_elasticity(rep.points, 1, true, 1.0)));
        break;
    }
    }
    return rep;
}

std::string probe_report::to_json() const {
    json j;
    j["lemma"] = lemma_name(lemma);
    j["max_scaled"] = max_scaled;
    j["reference_max"] = reference_max;
    j["tail_elasticity"] = tail_elasticity;
    j["bounded"] = bounded;
    if (lemma == lemma_id::bnd1) j["slope"] = slope;
    if (lemma == lemma_id::bnd2) j["uniform_bound"] = uniform_bound;
    if (lemma == lemma_id::bnd3) j["zero_case_exact"] = zero_case_exact;
    json pts = json::array();
    for (const auto& p : points) {
        json q;
        for (const auto& kv : p.params) q[kv.first] = kv.second;
        q["value"] = p.value;
        q["scaled"] = p.scaled;
        pts.push_back(q);
    }
    j["points"] = pts;
    return j.dump(2);
}

sign_report sign_property_check(double eps) {
    sign_report rep;
    const double M = 1.0 / eps;
    for (double r : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0})
        for (double s : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0})
            for (double x : {0.0, 0.01, 1.0, 10.0, 0.5 * M, M}) {
                double base = std::exp(-(r * r + s * s) * (x + 1)) * bessel_i1(2 * r * s * x);
                double g = -std::expm1(-r * r * M);
                double c1 = g * g / (r * r) * s * s * base;
                double c2 = g * (-std::expm1(-s * s * M)) * base;
                rep.samples += 2;
                if (c1 < 0.0) ++rep.violations;
                if (c2 < 0.0) ++rep.violations;
            }
    for (double a : {0.0, 1e-3, 0.1, 1.0})
        for (double b : {1e-3, 0.1, 1.0})
            for (double c : {0.0, 1e-3, 0.1, 1.0}) {
                rep.samples += 2;
                if (!(order2_kernel(order2_case::case1, a, b, c, eps) < 0.0)) ++rep.violations;
                if (!(order2_kernel(order2_case::case2, a, b, c, eps) < 0.0)) ++rep.violations;
            }
    return rep;
}

}
