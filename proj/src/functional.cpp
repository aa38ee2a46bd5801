#include "iltlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

#include "iltlab/errors.hpp"
#include "iltlab/io.hpp"

namespace iltlab {

std::string region_spec::describe() const {
    if (kind == shape::triangle) return "triangle[" + format_double(a) + "," + format_double(b) + "]";
    return "rectangle[" + format_double(a) + "," + format_double(b) + "]x[" + format_double(c) + "," +
           format_double(d) + "]";
}

namespace {

const std::size_t tile = 256;

std::size_t grid_index(double t, const path2d& path) {
    double u = t / path.dt();
    double r = std::round(u);
    if (std::fabs(u - r) > 1e-9 * std::max(1.0, u)) throw parameter_error("region time is not grid-aligned");
    if (r < 0.0 || r > static_cast<double>(path.n_steps)) throw parameter_error("region out of path range");
    return static_cast<std::size_t>(r);
}

struct index_region {
    bool triangle;
    std::size_t i0, i1, j0, j1;  // rows [i0,i1), cols [j0,j1)
};

index_region resolve(const path2d& path, const region_spec& region) {
    if (path.n_steps == 0) throw parameter_error("empty path");
    index_region r{};
    if (region.kind == region_spec::shape::triangle) {
        if (!(region.a <= region.b)) throw parameter_error("triangle requires lo <= hi");
        r.triangle = true;
        r.i0 = r.j0 = grid_index(region.a, path);
        r.i1 = r.j1 = grid_index(region.b, path);
    } else {
        if (!(region.a <= region.b && region.b <= region.c && region.c <= region.d))
            throw parameter_error("rectangle requires a <= b <= c <= d");
        r.triangle = false;
        r.i0 = grid_index(region.a, path);
        r.i1 = grid_index(region.b, path);
        r.j0 = grid_index(region.c, path);
        r.j1 = grid_index(region.d, path);
    }
    return r;
}

template <class K>
double tile_sum(const path2d& p, const K& k, std::size_t ib, std::size_t ie, std::size_t jb, std::size_t je,
                bool strict) {
    const double* x1 = p.x1.data();
    const double* x2 = p.x2.data();
    double acc = 0.0;
    for (std::size_t i = ib; i < ie; ++i) {
        const double a1 = x1[i], a2 = x2[i];
        std::size_t js = strict ? std::max(jb, i + 1) : jb;
        double row = 0.0;
        for (std::size_t j = js; j < je; ++j) row += k(x1[j] - a1, x2[j] - a2);
        acc += row;
    }
    return acc;
}

struct gauss_k {
    double inv4eps, pref;
    double operator()(double y1, double y2) const {
        double e = (y1 * y1 + y2 * y2) * inv4eps;
        if (e > 80.0) return 0.0;
        return -pref * y1 * std::exp(-e);
    }
};

struct generic_k {
    const dx1_kernel* k;
    double operator()(double y1, double y2) const { return (*k)(y1, y2); }
};

template <class K>
double tiled(const path2d& p, const K& k, const index_region& r) {
    struct tile_t {
        std::size_t ib, ie, jb, je;
    };
    std::vector<tile_t> tiles;
    for (std::size_t ib = r.i0; ib < r.i1; ib += tile) {
        std::size_t ie = std::min(ib + tile, r.i1);
        for (std::size_t jb = r.j0; jb < r.j1; jb += tile) {
            std::size_t je = std::min(jb + tile, r.j1);
            if (r.triangle && je <= ib + 1) continue;
            tiles.push_back({ib, ie, jb, je});
        }
    }
    std::vector<double> partial(tiles.size(), 0.0);
    const long nt = static_cast<long>(tiles.size());
#pragma omp parallel for schedule(dynamic, 1) if (nt > 1 && !omp_in_parallel())
    for (long t = 0; t < nt; ++t) {
        const tile_t& tl = tiles[static_cast<std::size_t>(t)];
        partial[static_cast<std::size_t>(t)] = tile_sum(p, k, tl.ib, tl.ie, tl.jb, tl.je, r.triangle);
    }
    return pairwise_sum(partial.data(), partial.size());
}

functional_result make_result(const path2d& path, double eps, const region_spec& region) {
    functional_result res;
    res.epsilon = eps;
    res.n_steps = path.n_steps;
    res.region = region;
    res.master_seed = path.master_seed;
    res.path_index = path.path_index;
    res.under_resolved = path.dt() > eps / 2.0 * (1.0 + 1e-12);
    return res;
}

}

double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

functional_result alpha_prime(const path2d& path, double eps, const region_spec& region, const dx1_kernel& kernel) {
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    index_region r = resolve(path, region);
    functional_result res = make_result(path, eps, region);
    double dt = path.dt();
    double s = kernel.gaussian ? tiled(path, gauss_k{kernel.inv4eps, kernel.pref}, r) : tiled(path, generic_k{&kernel}, r);
    res.value = s * dt * dt;
    return res;
}

functional_result alpha_prime(const path2d& path, const process_spec& spec, double eps, const region_spec& region) {
    return alpha_prime(path, eps, region, dx1_kernel::make(spec, eps));
}

functional_result alpha_prime_serial(const path2d& path, double eps, const region_spec& region,
                                     const dx1_kernel& kernel) {
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    index_region r = resolve(path, region);
    functional_result res = make_result(path, eps, region);
    double s = 0.0;
    for (std::size_t i = r.i0; i < r.i1; ++i) {
        std::size_t js = r.triangle ? i + 1 : r.j0;
        for (std::size_t j = js; j < r.j1; ++j) s += kernel(path.x1[j] - path.x1[i], path.x2[j] - path.x2[i]);
    }
    double dt = path.dt();
    res.value = s * dt * dt;
    return res;
}

std::size_t steps_for(double T, double eps) {
    if (!(T > 0.0) || !(eps > 0.0)) throw parameter_error("T and epsilon must be positive");
    std::size_t n = 1;
    while (T / static_cast<double>(n) > eps / 2.0) {
        n *= 2;
        if (n > (std::size_t(1) << 40)) throw parameter_error("epsilon too small for the grid");
    }
    return n;
}

bias_report discretization_bias(const std::vector<path2d>& fine_paths, const process_spec& spec, double eps) {
    bias_report rep;
    rep.n_paths = fine_paths.size();
    if (fine_paths.empty()) return rep;
    dx1_kernel k = dx1_kernel::make(spec, eps);
    std::vector<double> diff(fine_paths.size()), fine(fine_paths.size());
    for (const auto& p : fine_paths)
        if (p.n_steps % 2 != 0) throw parameter_error("n_steps must be even");
    const long n = static_cast<long>(fine_paths.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
        const path2d& p = fine_paths[static_cast<std::size_t>(i)];
        path2d c = coarsen(p, 2);
        double vf = alpha_prime(p, eps, region_spec::triangle(p.T), k).value;
        double vc = alpha_prime(c, eps, region_spec::triangle(c.T), k).value;
        diff[static_cast<std::size_t>(i)] = std::fabs(vf - vc);
        fine[static_cast<std::size_t>(i)] = std::fabs(vf);
    }
    rep.mean_abs_diff = pairwise_sum(diff.data(), diff.size()) / static_cast<double>(n);
    rep.mean_abs_fine = pairwise_sum(fine.data(), fine.size()) / static_cast<double>(n);
    rep.relative = rep.mean_abs_fine > 0.0 ? rep.mean_abs_diff / rep.mean_abs_fine : 0.0;
    return rep;
}

bias_report discretization_self_check(const process_spec& spec, double T, double eps, std::size_t n_steps,
                                      const rng_policy& rng, std::size_t n_paths) {
    spec.validate();
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    if (n_steps < 2 || n_steps % 2 != 0) throw parameter_error("n_steps must be even");
    if (n_paths == 0) throw parameter_error("n_paths must be positive");
    std::vector<path2d> paths(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) paths[i] = sample_path(spec, T, n_steps, rng, i);
    return discretization_bias(paths, spec, eps);
}

}
