#include "iltlab/moments.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "iltlab/errors.hpp"
#include "iltlab/io.hpp"

namespace iltlab {

using nlohmann::json;

void epsilon_ladder::validate() const {
    if (eps.empty()) throw parameter_error("ladder must contain at least one epsilon");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw parameter_error("ladder epsilon must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw parameter_error("ladder epsilon must be strictly decreasing");
    }
    if (!(T > 0.0)) throw parameter_error("T must be positive");
    if (n_paths < 2) throw parameter_error("n_paths must be at least 2");
    if (batch < 1) throw parameter_error("batch size must be positive");
}

std::vector<std::size_t> epsilon_ladder::n_steps() const {
    std::vector<std::size_t> n;
    for (double e : eps) n.push_back(steps_for(T, e));
    return n;
}

std::vector<std::vector<std::vector<double>>> functional_samples(const process_spec& spec, double T,
                                                                 const std::vector<double>& eps,
                                                                 const std::vector<region_spec>& regions,
                                                                 std::size_t n_paths, const rng_policy& rng,
                                                                 std::uint64_t first_index) {
    spec.validate();
    std::vector<std::size_t> steps;
    std::size_t nmax = 1;
    for (double e : eps) {
        steps.push_back(steps_for(T, e));
        nmax = std::max(nmax, steps.back());
    }
    std::vector<dx1_kernel> kernels;
    for (double e : eps) kernels.push_back(dx1_kernel::make(spec, e));
    // validate region alignment once on a dummy path of each resolution
    for (std::size_t e = 0; e < eps.size(); ++e) {
        path2d probe;
        probe.T = T;
        probe.n_steps = steps[e];
        probe.x1.assign(steps[e] + 1, 0.0);
        probe.x2.assign(steps[e] + 1, 0.0);
        for (const auto& r : regions) alpha_prime_serial(probe, eps[e], r, kernels[e]);
    }
    std::vector<std::vector<std::vector<double>>> out(
        eps.size(), std::vector<std::vector<double>>(regions.size(), std::vector<double>(n_paths, 0.0)));
    const long np = static_cast<long>(n_paths);
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < np; ++k) {
        path2d fine = sample_path(spec, T, nmax, rng, first_index + static_cast<std::uint64_t>(k));
        for (std::size_t e = 0; e < eps.size(); ++e) {
            path2d p = steps[e] == nmax ? fine : coarsen(fine, nmax / steps[e]);
            for (std::size_t r = 0; r < regions.size(); ++r)
                out[e][r][static_cast<std::size_t>(k)] = alpha_prime(p, eps[e], regions[r], kernels[e]).value;
        }
    }
    return out;
}

void sample_moments(const std::vector<double>& v, std::size_t batch, double m[4], double se[4]) {
    const std::size_t n = v.size();
    if (n < 2) throw parameter_error("need at least two samples");
    if (batch * 2 > n) batch = std::max<std::size_t>(1, n / 10);
    std::size_t K = n / batch;
    std::vector<double> pw(n);
    for (int p = 0; p < 4; ++p) {
        for (std::size_t i = 0; i < n; ++i) pw[i] = std::pow(v[i], p + 1);
        m[p] = pairwise_sum(pw.data(), n) / static_cast<double>(n);
        std::vector<double> bm(K);
        for (std::size_t b = 0; b < K; ++b) {
            std::size_t lo = b * batch, hi = (b + 1 == K) ? n : lo + batch;
            bm[b] = pairwise_sum(pw.data() + lo, hi - lo) / static_cast<double>(hi - lo);
        }
        double mean = pairwise_sum(bm.data(), K) / static_cast<double>(K);
        double ss = 0.0;
        for (double x : bm) ss += (x - mean) * (x - mean);
        se[p] = std::sqrt(ss / static_cast<double>(K - 1) / static_cast<double>(K));
    }
}

double scaled_second_moment(const process_spec& spec, double T, double eps, double m2) {
    if (spec.kind == process_kind::brownian || spec.beta == 2.0) {
        double l = std::log(1.0 / eps);
        return m2 / (T * l * l);
    }
    return m2 * std::pow(eps, 6.0 / spec.beta - 3.0) / T;
}

moment_table moments_from_samples(const process_spec& spec, const epsilon_ladder& ladder,
                                  const std::vector<std::vector<double>>& values) {
    moment_table t;
    t.spec = spec;
    t.T = ladder.T;
    auto steps = ladder.n_steps();
    for (std::size_t e = 0; e < ladder.eps.size(); ++e) {
        moment_row row;
        row.epsilon = ladder.eps[e];
        row.n_paths = values[e].size();
        row.n_steps = steps[e];
        sample_moments(values[e], ladder.batch, row.m, row.se);
        row.scaled_m2 = scaled_second_moment(spec, ladder.T, row.epsilon, row.m[1]);
        t.rows.push_back(row);
    }
    return t;
}

moment_table estimate_moments(const process_spec& spec, const epsilon_ladder& ladder, const rng_policy& rng) {
    spec.validate();
    ladder.validate();
    auto s = functional_samples(spec, ladder.T, ladder.eps, {region_spec::triangle(ladder.T)}, ladder.n_paths, rng);
    std::vector<std::vector<double>> v;
    for (auto& e : s) v.push_back(std::move(e[0]));
    return moments_from_samples(spec, ladder, v);
}

std::string moment_table::to_csv() const {
    std::string s = "epsilon,n_paths,n_steps,m1,m1_se,m2,m2_se,m3,m3_se,m4,m4_se,scaled_m2\n";
    for (const auto& r : rows) {
        s += format_double(r.epsilon) + "," + std::to_string(r.n_paths) + "," + std::to_string(r.n_steps);
        for (int p = 0; p < 4; ++p) s += "," + format_double(r.m[p]) + "," + format_double(r.se[p]);
        s += "," + format_double(r.scaled_m2) + "\n";
    }
    return s;
}

namespace {

scaling_fit linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::string& model) {
    const std::size_t n = x.size();
    if (n < 3) throw parameter_error("scaling fit needs at least 3 rows");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    scaling_fit f;
    f.model = model;
    f.a = sxy / sxx;
    f.b = my - f.a * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.a * x[i] + f.b);
        f.residuals.push_back(r);
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

}

scaling_fit fit_log_scaling(const moment_table& table) {
    std::vector<double> x, y;
    for (const auto& r : table.rows) {
        if (!(r.m[1] >= 0.0)) throw parameter_error("negative second moment");
        x.push_back(std::log(1.0 / r.epsilon));
        y.push_back(std::sqrt(r.m[1]));
    }
    return linear_fit(x, y, "log_linear");
}

scaling_fit fit_power_scaling(const moment_table& table, double beta) {
    if (!(beta > 1.0 && beta < 2.0)) throw parameter_error("fit_power_scaling requires 1 < beta < 2");
    std::vector<double> x, y;
    for (const auto& r : table.rows) {
        if (!(r.m[1] > 0.0)) throw parameter_error("nonpositive second moment");
        x.push_back(std::log(1.0 / r.epsilon));
        y.push_back(std::log(r.m[1]));
    }
    return linear_fit(x, y, "power");
}

std::string scaling_fit::to_json() const {
    json j;
    j["model"] = model;
    j["a"] = a;
    j["b"] = b;
    j["r2"] = r2;
    j["residuals"] = residuals;
    return j.dump(2);
}

scaling_report scaling_law_check(const process_spec& spec, double T, double eps, const rng_policy& rng,
                                 std::size_t n_paths) {
    spec.validate();
    if (T == 1.0) throw parameter_error("scaling_law_check requires T != 1");
    if (!(T > 0.0) || !(eps > 0.0)) throw parameter_error("T and epsilon must be positive");
    if (n_paths < 2) throw parameter_error("n_paths must be at least 2");
    scaling_report rep;
    rep.T = T;
    rep.eps = eps;
    // same grid size on both sides: steps_for(T, eps) == steps_for(1, eps/T)
    auto a = functional_samples(spec, T, {eps}, {region_spec::triangle(T)}, n_paths, rng, 0);
    auto b = functional_samples(spec, 1.0, {eps / T}, {region_spec::triangle(1.0)}, n_paths, rng, n_paths);
    double m[4], se[4];
    sample_moments(a[0][0], 100, m, se);
    rep.m2_T = m[1];
    rep.se_T = se[1];
    sample_moments(b[0][0], 100, m, se);
    rep.m2_1 = m[1];
    rep.se_1 = se[1];
    rep.ratio = rep.m2_T / rep.m2_1;
    rep.ratio_se = rep.ratio * std::sqrt(std::pow(rep.se_T / rep.m2_T, 2) + std::pow(rep.se_1 / rep.m2_1, 2));
    rep.predicted = std::pow(T, 4.0 - 6.0 / spec.beta);
    rep.z = (rep.ratio - rep.predicted) / rep.ratio_se;
    rep.pass = std::fabs(rep.z) <= 3.0;
    return rep;
}

std::string scaling_report::to_json() const {
    json j;
    j["T"] = T;
    j["epsilon"] = eps;
    j["m2_T"] = m2_T;
    j["m2_T_se"] = se_T;
    j["m2_unit"] = m2_1;
    j["m2_unit_se"] = se_1;
    j["ratio"] = ratio;
    j["ratio_se"] = ratio_se;
    j["predicted"] = predicted;
    j["z"] = z;
    j["pass"] = pass;
    return j.dump(2);
}

independence_report increment_independence_check(const process_spec& spec, double T, double S,
                                                  const std::vector<double>& eps, const rng_policy& rng,
                                                  std::size_t n_paths) {
    spec.validate();
    if (!(S > 0.0 && S < T)) throw parameter_error("increment check requires 0 < S < T");
    if (n_paths < 4) throw parameter_error("n_paths must be at least 4");
    std::vector<region_spec> regions = {region_spec::triangle(0.0, S), region_spec::triangle(S, T),
                                        region_spec::rectangle(0.0, S, S, T)};
    auto v = functional_samples(spec, T, eps, regions, n_paths, rng);
    independence_report rep;
    rep.T = T;
    rep.S = S;
    rep.correlation_ok = true;
    rep.rect_non_increasing = true;
    rep.halves_equal = true;
    const double n = static_cast<double>(n_paths);
    for (std::size_t e = 0; e < eps.size(); ++e) {
        independence_row row;
        row.eps = eps[e];
        const auto& x = v[e][0];
        const auto& y = v[e][1];
        double mx = 0, my = 0;
        for (std::size_t k = 0; k < n_paths; ++k) {
            mx += x[k];
            my += y[k];
        }
        mx /= n;
        my /= n;
        double sxx = 0, syy = 0, sxy = 0;
        for (std::size_t k = 0; k < n_paths; ++k) {
            sxx += (x[k] - mx) * (x[k] - mx);
            syy += (y[k] - my) * (y[k] - my);
            sxy += (x[k] - mx) * (y[k] - my);
        }
        row.correlation = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
        row.correlation_se = 1.0 / std::sqrt(n);
        double m[4], se[4];
        sample_moments(x, 100, m, se);
        row.m2_first = m[1];
        row.se_first = se[1];
        sample_moments(y, 100, m, se);
        row.m2_second = m[1];
        row.se_second = se[1];
        sample_moments(v[e][2], 100, m, se);
        row.rect_m2 = m[1];
        row.rect_se = se[1];
        row.rect_scaled = scaled_second_moment(spec, T, eps[e], m[1]);
        if (std::fabs(row.correlation) > 3.0 * row.correlation_se) rep.correlation_ok = false;
        if (std::fabs(S - T / 2.0) < 1e-12 * T &&
            std::fabs(row.m2_first - row.m2_second) > 3.0 * std::hypot(row.se_first, row.se_second))
            rep.halves_equal = false;
        if (!rep.rows.empty() && row.rect_scaled > rep.rows.back().rect_scaled) rep.rect_non_increasing = false;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string independence_report::to_json() const {
    json j;
    j["T"] = T;
    j["S"] = S;
    j["correlation_ok"] = correlation_ok;
    j["rect_non_increasing"] = rect_non_increasing;
    j["halves_equal"] = halves_equal;
    json rs = json::array();
    for (const auto& r : rows) {
        rs.push_back({{"epsilon", r.eps},
                      {"correlation", r.correlation},
                      {"correlation_se", r.correlation_se},
                      {"m2_first", r.m2_first},
                      {"m2_first_se", r.se_first},
                      {"m2_second", r.m2_second},
                      {"m2_second_se", r.se_second},
                      {"rect_m2", r.rect_m2},
                      {"rect_m2_se", r.rect_se},
                      {"rect_scaled", r.rect_scaled}});
    }
    j["rows"] = rs;
    return j.dump(2);
}

}
