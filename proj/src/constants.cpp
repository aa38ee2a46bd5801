#include "iltlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "json.hpp"

#include "iltlab/errors.hpp"
#include "iltlab/quadlab.hpp"
#include "iltlab/rng.hpp"

namespace iltlab {

using nlohmann::json;

namespace {

const double pi = std::numbers::pi;

void check_beta(double beta) {
    if (!(beta > 1.0 && beta < 2.0)) throw parameter_error("beta must lie in (1, 2)");
}

std::vector<double> clip_sorted(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(hi);
    std::vector<double> out;
    for (double p : pts)
        if (std::isfinite(p) && p >= lo && p <= hi) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

quad_config loosened(const quad_config& cfg, double factor) {
    quad_config c = cfg;
    c.rel_tol = std::min(1e-3, cfg.rel_tol * factor);
    return c;
}

// int_0^1 g(rho) phi(rho) drho; the (1-rho)^{1-beta} edge is flattened by u = tau^k
double rho_integral(double beta, const std::function<double(double)>& g, double small_power, const quad_config& cfg,
                    double* err) {
    const double m = std::max(1.0, 1.0 / small_power);
    auto lower = [&](double sig) {
        double rho = std::pow(sig, m);
        if (rho == 0.0) return 0.0;
        return g(rho) * stable_phi(beta, rho, 1.0 - rho) * m * std::pow(sig, m - 1.0);
    };
    const double k = 1.0 / (2.0 - beta);
    // phi ~ -C u^{1-beta} as u -> 0, so the substituted integrand tends to -C k g(1)
    const double C = 0.5 * std::sqrt(pi) * std::tgamma(0.5 * (beta - 1.0)) / std::tgamma(0.5 * beta);
    const double u_edge = std::pow(10.0, -14.0 / (beta - 1.0));
    auto upper = [&](double tau) {
        double u = std::pow(tau, k);
        if (u < u_edge) return -C * k * g(1.0);
        double rho = 1.0 - u;
        return g(rho) * stable_phi(beta, rho, u) * k * std::pow(tau, k - 1.0);
    };
    double sig_hi = std::pow(0.5, 1.0 / m);
    double tau_hi = std::pow(0.5, 1.0 / k);
    std::vector<double> lp = clip_sorted({1e-3 * sig_hi, 1e-2 * sig_hi, 0.1 * sig_hi, 0.5 * sig_hi}, 0.0, sig_hi);
    std::vector<double> up = clip_sorted({1e-3 * tau_hi, 1e-2 * tau_hi, 0.1 * tau_hi, 0.5 * tau_hi}, 0.0, tau_hi);
    quad_result a = integrate_panels(lower, lp, cfg);
    quad_result b = integrate_panels(upper, up, cfg);
    if (err) *err = a.error + b.error;
    if (!a.converged || !b.converged)
        throw quadrature_error("rho integral did not converge", a.value + b.value, a.error + b.error);
    return a.value + b.value;
}

}

std::string constant_report::to_json() const {
    json j;
    j["name"] = name;
    j["value"] = value;
    j["uncertainty"] = uncertainty;
    j["method"] = method;
    j["cross_check"] = cross_check;
    j["cross_method"] = cross_method;
    j["pass"] = pass;
    return j.dump(2);
}

constant_report k_brownian() {
    constant_report r;
    r.name = "k";
    r.value = std::sqrt(5.0) / (8.0 * std::pow(2.0, 0.25) * pi);
    r.method = "closed form sqrt5/(8 2^{1/4} pi)";
    r.cross_check = 10.0 / (128.0 * std::sqrt(2.0) * pi * pi);
    r.cross_method = "variance rate 10/(128 sqrt2 pi^2) compared with k^2";
    double rel = std::fabs(r.value * r.value - r.cross_check) / r.cross_check;
    r.uncertainty = rel * r.value;
    r.pass = rel < 1e-12;
    return r;
}

double k_brownian_abstract_form() { return std::sqrt(5.0) / (pi * std::sqrt(128.0 * std::sqrt(2.0))); }

double stable_phi_quadrature(double beta, double rho, double u) {
    if (!(rho >= 0.0 && u > 0.0)) throw parameter_error("stable_phi requires rho >= 0 and 1 - rho > 0");
    if (rho == 0.0) return 0.0;
    // t = pi - theta: base = u^2 + 4 rho sin^2(t/2), integrand -cos t base^{-beta/2}
    auto f = [=](double t) {
        double sn = std::sin(0.5 * t);
        double base = u * u + 4.0 * rho * sn * sn;
        return -std::cos(t) * std::pow(base, -0.5 * beta);
    };
    double w = u / std::sqrt(rho);
    std::vector<double> pts = {3 * w, 0.5 * pi};
    for (double x = w; x < 1.0; x *= 10.0) pts.push_back(x);
    pts = clip_sorted(pts, 0.0, pi);
    quad_config c;
    c.rel_tol = 1e-13;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 4000;
    quad_result r = integrate_panels(f, pts, c);
    return checked(r, "stable_phi");
}

double stable_phi(double beta, double rho, double u) {
    if (!(beta > 0.0)) throw parameter_error("beta must be positive");
    if (rho <= 0.5) {
        // -pi lam rho 2F1(lam, lam+1; 2; rho^2)
        const double lam = 0.5 * beta, z = rho * rho;
        double term = 1.0, sum = 1.0;
        for (int n = 0; n < 200; ++n) {
            term *= (lam + n) * (lam + 1 + n) / ((2.0 + n) * (1.0 + n)) * z;
            sum += term;
            if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        }
        return -pi * lam * rho * sum;
    }
    return stable_phi_quadrature(beta, rho, u);
}

double stable_phi(double beta, double rho) { return stable_phi(beta, rho, 1.0 - rho); }

quad_config constants_default_config() {
    quad_config c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-300;
    c.max_subdivisions = 4000;
    return c;
}

double j1_quadrature(double beta, const quad_config& cfg, double* error) {
    check_beta(beta);
    cfg.validate();
    const double e = 3.0 - 6.0 / beta;
    auto g = [=](double rho) { return std::pow(rho, 2.0 - beta) * std::pow(1.0 + std::pow(rho, beta), e); };
    double err = 0.0;
    double v = rho_integral(beta, g, 1.0, cfg, &err);
    double pref = 4.0 * pi * std::tgamma(6.0 / beta - 3.0) / beta;
    if (error) *error = std::fabs(pref) * err;
    return pref * v;
}

mc_estimate j1_monte_carlo(double beta, std::size_t samples, std::uint64_t seed) {
    check_beta(beta);
    if (samples < 1000) throw parameter_error("j1_monte_carlo needs at least 1000 samples");
    const double np = 2.0 * pi * std::tgamma(2.0 / beta) * std::pow(2.0, 2.0 / beta) / beta;
    const double nw = 2.0 * pi * std::tgamma(2.0 / beta - 1.0) * std::pow(4.0, (2.0 - beta) / beta) / beta;
    const std::size_t chunk = 1 << 16;
    const std::size_t nchunks = (samples + chunk - 1) / chunk;
    std::vector<double> s1(nchunks, 0.0), s2(nchunks, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t c = 0; c < nchunks; ++c) {
        rng_stream rng(mix_seed(seed, c));
        std::gamma_distribution<double> gp(2.0 / beta, 1.0), gw(2.0 / beta - 1.0, 1.0);
        std::size_t n = std::min(chunk, samples - c * chunk);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double G = gp(rng), U = gw(rng);
            double rp = std::pow(2.0 * G, 1.0 / beta), rw = std::pow(4.0 * U, 1.0 / beta);
            double ap = 2.0 * pi * rng.uniform(), aw = 2.0 * pi * rng.uniform();
            double p1 = rp * std::cos(ap), p2 = rp * std::sin(ap);
            double q1 = rw * std::cos(aw) - p1, q2 = rw * std::sin(aw) - p2;
            double rq2 = q1 * q1 + q2 * q2;
            double w = 0.0;
            if (rq2 > 0.0) {
                double qb = std::pow(rq2, 0.5 * beta);
                w = np * nw * std::exp(-G - qb + U) / (std::pow(rp, beta) * qb) * 0.5 * (p1 * q1 + p2 * q2);
            }
            a += w;
            b += w * w;
        }
        s1[c] = a;
        s2[c] = b;
    }
    double a = 0.0, b = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        a += s1[c];
        b += s2[c];
    }
    mc_estimate r;
    r.samples = samples;
    r.value = a / samples;
    double var = std::max(0.0, b / samples - r.value * r.value);
    r.se = std::sqrt(var / (samples - 1));
    return r;
}

constant_report j1_stable(double beta, const quad_config& cfg, std::size_t mc_samples, std::uint64_t seed) {
    constant_report r;
    r.name = "J1";
    double err = 0.0;
    r.value = j1_quadrature(beta, cfg, &err);
    r.uncertainty = std::max(err, std::fabs(r.value) * cfg.rel_tol);
    r.method = "r integral in closed form, relative angle by quadrature, ratio rho = s/r by adaptive Gauss-Kronrod";
    mc_estimate mc = j1_monte_carlo(beta, mc_samples, seed);
    r.cross_check = mc.value;
    r.cross_method = "importance-sampled Monte Carlo in R^4, se " + std::to_string(mc.se);
    r.pass = std::fabs(r.value - mc.value) <= 0.01 * std::fabs(r.value);
    return r;
}

double j2_regularized(double beta, double eps, const quad_config& cfg, double* error) {
    check_beta(beta);
    cfg.validate();
    if (!(eps > 0.0)) throw parameter_error("eps must be positive");
    const double h = 0.5 * beta;
    const double top = std::pow(50.0, 1.0 / beta);
    const double ell = std::pow(eps, 1.0 / beta);
    quad_config c_in = loosened(cfg, 10.0), c_mid = loosened(cfg, 100.0), c_out = loosened(cfg, 1000.0);
    auto psi = [&](double r, double s) {
        double d = r - s;
        auto f = [&](double t) {
            double sn = std::sin(0.5 * t);
            double R2 = d * d + 4.0 * r * s * sn * sn;
            if (R2 <= 0.0) return 0.0;
            double Rb = std::pow(R2, h);
            return -std::cos(t) * (-std::expm1(-Rb / eps)) / Rb;
        };
        double g = std::sqrt(r * s);
        double w = std::fabs(d) / g, e = ell / g;
        std::vector<double> tp = clip_sorted({w, 10 * w, e, 10 * e, 0.1, 1.0, 0.5 * pi}, 0.0, pi);
        return integrate_panels(f, tp, c_in).value;
    };
    auto inner_s = [&](double r) {
        auto f = [&](double s) { return s * s * std::exp(-std::pow(s, beta)) * psi(r, s); };
        std::vector<double> sp = {1.0, 2.0, 4.0, 8.0, 0.5 * ell, ell, 10 * ell};
        for (double q : {0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5}) {
            sp.push_back(r * (1 - q));
            sp.push_back(r * (1 + q));
        }
        for (double q : {1.0, 10.0}) {
            sp.push_back(r - q * ell);
            sp.push_back(r + q * ell);
        }
        return integrate_panels(f, clip_sorted(sp, 0.0, top), c_mid).value;
    };
    auto outer = [&](double r) {
        if (r == 0.0) return 0.0;
        double reg = -std::expm1(-std::pow(r, beta) / eps);
        return reg * reg * std::pow(r, 2.0 - 2.0 * beta) * std::exp(-std::pow(r, beta)) * inner_s(r);
    };
    std::vector<double> rp = {0.1 * ell, ell, 10 * ell, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0};
    quad_result res = integrate_panels(outer, clip_sorted(rp, 0.0, top), c_out);
    if (error) *error = 2.0 * pi * res.error;
    return 2.0 * pi * checked(res, "j2_regularized");
}

double j2_direct(double beta, const quad_config& cfg, double* error) {
    check_beta(beta);
    cfg.validate();
    const double e = 3.0 - 6.0 / beta;
    auto g = [=](double rho) {
        return (rho * rho + std::pow(rho, 2.0 - 2.0 * beta)) * std::pow(1.0 + std::pow(rho, beta), e);
    };
    double err = 0.0;
    double v = rho_integral(beta, g, 4.0 - 2.0 * beta, cfg, &err);
    double pref = 2.0 * pi * std::tgamma(6.0 / beta - 3.0) / beta;
    if (error) *error = std::fabs(pref) * err;
    return pref * v;
}

double j2_uniform_bound(double beta) {
    check_beta(beta);
    double K = 0.0;
    for (double eps : {0.1, 0.05, 0.02, 0.01})
        for (double p = 1e-3; p < 40.0; p *= std::sqrt(10.0)) K = std::max(K, bnd11_value(beta, eps, 1.0, p) / p);
    return K * 2.0 * pi * std::tgamma(4.0 / beta - 2.0) / beta;
}

std::string extrapolation::to_json() const {
    json j;
    j["eps"] = eps;
    j["values"] = values;
    j["gaps"] = gaps;
    j["limit"] = limit;
    j["c1"] = c1;
    j["kappa"] = kappa;
    j["spread"] = spread;
    j["fit_points"] = fit_points;
    j["cauchy"] = cauchy;
    return j.dump(2);
}

extrapolation extrapolate_power(const std::vector<double>& eps, const std::vector<double>& values, std::size_t tail) {
    if (eps.size() != values.size() || eps.size() < 3) throw parameter_error("extrapolation needs at least 3 points");
    if (tail < 3) throw parameter_error("extrapolation tail needs at least 3 points");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw parameter_error("eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw parameter_error("eps ladder must be decreasing");
    }
    extrapolation x;
    x.eps = eps;
    x.values = values;
    const std::size_t n = eps.size();
    const std::size_t i0 = n - std::min(n, tail);
    x.fit_points = n - i0;
    // subleading terms at the coarse end bias a global kappa
    auto solve = [&](double kap, double& j, double& c) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = double(n - i0);
        for (std::size_t i = i0; i < n; ++i) {
            double t = std::pow(eps[i], kap);
            sx += t;
            sy += values[i];
            sxx += t * t;
            sxy += t * values[i];
        }
        double det = m * sxx - sx * sx;
        c = (m * sxy - sx * sy) / det;
        j = (sy - c * sx) / m;
        double ss = 0;
        for (std::size_t i = i0; i < n; ++i) {
            double r = j + c * std::pow(eps[i], kap) - values[i];
            ss += r * r;
        }
        return ss;
    };
    auto obj = [&](double kap) {
        double j, c;
        return solve(kap, j, c);
    };
    auto best = boost::math::tools::brent_find_minima(obj, 0.05, 4.0, 40);
    x.kappa = best.first;
    solve(x.kappa, x.limit, x.c1);
    x.spread = std::fabs(values.back() - x.limit);
    x.cauchy = true;
    for (std::size_t i = 1; i < n; ++i) {
        x.gaps.push_back(std::fabs(values[i] - values[i - 1]));
        if (x.gaps.size() >= 2 && x.gaps.back() > 2.0 * x.gaps[x.gaps.size() - 2]) x.cauchy = false;
    }
    return x;
}

std::vector<double> default_j2_ladder() {
    std::vector<double> e;
    for (int k = 4; k <= 13; ++k) e.push_back(std::pow(10.0, -0.5 * k));
    return e;
}

extrapolation j2_ladder(double beta, const std::vector<double>& eps, const quad_config& cfg) {
    std::vector<double> v(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) v[i] = j2_regularized(beta, eps[i], cfg);
    return extrapolate_power(eps, v);
}

double c_beta_from_sum(double j_sum) { return j_sum / (2.0 * std::sqrt(2.0) * pi * pi); }

std::string c_beta_report::to_json() const {
    json j;
    j["c_beta"] = json::parse(c.to_json());
    j["J1"] = json::parse(j1.to_json());
    j["J2"] = json::parse(j2.to_json());
    j["ladder"] = json::parse(ladder.to_json());
    j["variance_rate"] = variance_rate;
    j["sqrt_variance_rate"] = variance_rate > 0 ? std::sqrt(variance_rate) : 0.0;
    return j.dump(2);
}

c_beta_report c_beta(double beta, const quad_config& cfg, const std::vector<double>& ladder, std::size_t mc_samples,
                     std::uint64_t seed) {
    check_beta(beta);
    c_beta_report rep;
    rep.j1 = j1_stable(beta, cfg, mc_samples, seed);
    rep.ladder = j2_ladder(beta, ladder, cfg);
    if (!rep.ladder.cauchy) throw instability_error("A(eps) ladder gaps are not decreasing");
    rep.j2.name = "J2";
    rep.j2.value = rep.ladder.limit;
    rep.j2.uncertainty = rep.ladder.spread;
    rep.j2.method = "A(eps) ladder extrapolated with A = J2 + c1 eps^kappa, kappa free";
    double derr = 0.0;
    rep.j2.cross_check = j2_direct(beta, cfg, &derr);
    rep.j2.cross_method = "angle-first iterated integral without regularization";
    rep.j2.pass = std::fabs(rep.j2.value - rep.j2.cross_check) <= rep.j2.uncertainty + derr + 1e-6 * std::fabs(rep.j2.value);
    double u1 = rep.j1.uncertainty + std::fabs(rep.j1.value - rep.j1.cross_check);
    double sum = rep.j1.value + rep.j2.value;
    rep.c.name = "c_beta";
    rep.c.value = c_beta_from_sum(sum);
    rep.c.uncertainty = std::fabs(c_beta_from_sum(u1 + rep.j2.uncertainty));
    rep.c.method = "(J1 + J2) / (2 sqrt2 pi^2)";
    rep.c.cross_check = c_beta_from_sum(rep.j1.cross_check + rep.j2.cross_check);
    rep.c.cross_method = "Monte Carlo J1 plus direct J2";
    rep.c.pass = rep.c.uncertainty < 0.02 * std::fabs(rep.c.value);
    rep.variance_rate = -sum / (8.0 * std::pow(pi, 4));
    return rep;
}

}
