#include "iltlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "iltlab/errors.hpp"

namespace iltlab {

namespace {

struct gk21 {
    std::array<double, 11> x, wk;
    std::array<double, 5> wg;
    gk21() {
        auto a = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
        auto w = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
        auto g = boost::math::quadrature::gauss<double, 10>::weights();
        for (int i = 0; i < 11; ++i) {
            x[i] = a[i];
            wk[i] = w[i];
        }
        for (int i = 0; i < 5; ++i) wg[i] = g[i];
    }
};

const gk21& rule() {
    static const gk21 r;
    return r;
}

struct segment {
    double a, b, value, error;
    bool operator<(const segment& o) const { return error < o.error; }
};

segment apply(const integrand& f, double a, double b, long& evals) {
    const gk21& r = rule();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double k = r.wk[0] * fc, g = 0.0;
    for (int i = 1; i < 11; ++i) {
        double dx = h * r.x[i];
        double s = f(c - dx) + f(c + dx);
        k += r.wk[i] * s;
        if (i % 2 == 1) g += r.wg[i / 2] * s;
    }
    evals += 21;
    k *= h;
    g *= h;
    double err = std::fabs(k - g);
    if (!std::isfinite(k)) err = std::numeric_limits<double>::infinity();
    return {a, b, k, err};
}

}

void quad_config::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw parameter_error("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw parameter_error("max_subdivisions must be positive");
}

quad_result integrate_panels(const integrand& f, const std::vector<double>& points, const quad_config& cfg) {
    quad_result res;
    if (points.size() < 2) return res;
    std::priority_queue<segment> heap;
    std::vector<segment> done;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        segment s = apply(f, points[i], points[i + 1], res.evaluations);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    int splits = 0;
    auto tol = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total)); };
    while (!heap.empty() && err > tol() && splits < cfg.max_subdivisions) {
        segment s = heap.top();
        heap.pop();
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            done.push_back(s);
            continue;
        }
        segment l = apply(f, s.a, m, res.evaluations);
        segment r = apply(f, m, s.b, res.evaluations);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    // resum in position order so the result does not depend on heap history
    std::sort(done.begin(), done.end(), [](const segment& x, const segment& y) { return x.a < y.a; });
    double v = 0.0, e = 0.0;
    for (const auto& s : done) {
        v += s.value;
        e += s.error;
    }
    res.value = v;
    res.error = e;
    res.converged = std::isfinite(v) && e <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(v));
    return res;
}

quad_result integrate(const integrand& f, double a, double b, const quad_config& cfg) {
    return integrate_panels(f, {a, b}, cfg);
}

quad_result integrate_to_infinity(const integrand& f, double a, const quad_config& cfg) {
    auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        double u = 1.0 - t;
        double v = f(a + t / u) / (u * u);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate_panels(g, {0.0, 0.5, 0.9, 0.99, 0.999, 1.0}, cfg);
}

double checked(const quad_result& r, const std::string& what) {
    if (!r.converged)
        throw quadrature_error(what + ": tolerance not reached (estimate " + std::to_string(r.value) + ", error " +
                                   std::to_string(r.error) + ")",
                               r.value, r.error);
    return r.value;
}

std::vector<double> decade_points(double lo, double hi, bool lo_zero) {
    std::vector<double> pts;
    if (lo_zero) pts.push_back(0.0);
    for (double x = lo; x < hi; x *= 10.0) pts.push_back(x);
    pts.push_back(hi);
    return pts;
}

}
