#include "iltlab/process.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "iltlab/errors.hpp"
#include "iltlab/io.hpp"

namespace iltlab {

void process_spec::validate() const {
    if (!(beta > 1.0 && beta <= 2.0)) throw parameter_error("beta must lie in (1,2], got " + std::to_string(beta));
    if (kind == process_kind::brownian && beta != 2.0) throw parameter_error("brownian process requires beta = 2");
}

std::string process_spec::name() const {
    return kind == process_kind::brownian ? std::string("brownian") : "stable(" + format_double(beta) + ")";
}

double positive_stable(rng_stream& rng, double alpha) {
    if (alpha == 1.0) return 1.0;
    const double pi = std::numbers::pi;
    double u = pi * rng.uniform();
    double w = rng.exponential();
    double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
    double b = std::pow(std::sin((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha);
    return a * b;
}

path2d sample_path(const process_spec& spec, double T, std::size_t n_steps, const rng_policy& rng,
                   std::uint64_t path_index) {
    spec.validate();
    require(T > 0.0, "T must be positive");
    require(n_steps >= 1, "n_steps must be at least 1");
    path2d path;
    path.T = T;
    path.n_steps = n_steps;
    path.master_seed = rng.master_seed;
    path.path_index = path_index;
    path.x1.assign(n_steps + 1, 0.0);
    path.x2.assign(n_steps + 1, 0.0);
    rng_stream r = rng.stream(path_index);
    const double dt = T / static_cast<double>(n_steps);
    if (spec.kind == process_kind::brownian || spec.beta == 2.0) {
        const double sd = std::sqrt(2.0 * dt);
        for (std::size_t i = 0; i < n_steps; ++i) {
            double z1 = r.normal();
            double z2 = r.normal();
            path.x1[i + 1] = path.x1[i] + sd * z1;
            path.x2[i + 1] = path.x2[i] + sd * z2;
        }
    } else {
        // subordinated brownian motion: X = B_{2S}, S a (beta/2)-stable subordinator
        const double alpha = spec.beta / 2.0;
        const double scale = std::pow(dt, 1.0 / alpha);
        for (std::size_t i = 0; i < n_steps; ++i) {
            double ds = scale * positive_stable(r, alpha);
            double sd = std::sqrt(2.0 * ds);
            double z1 = r.normal();
            double z2 = r.normal();
            path.x1[i + 1] = path.x1[i] + sd * z1;
            path.x2[i + 1] = path.x2[i] + sd * z2;
        }
    }
    return path;
}

path2d coarsen(const path2d& path, std::size_t stride) {
    require(stride >= 1 && path.n_steps % stride == 0, "stride must divide n_steps");
    path2d out;
    out.T = path.T;
    out.n_steps = path.n_steps / stride;
    out.master_seed = path.master_seed;
    out.path_index = path.path_index;
    out.x1.resize(out.n_steps + 1);
    out.x2.resize(out.n_steps + 1);
    for (std::size_t i = 0; i <= out.n_steps; ++i) {
        out.x1[i] = path.x1[i * stride];
        out.x2[i] = path.x2[i * stride];
    }
    return out;
}

char_estimate empirical_char_function(const std::vector<path2d>& paths, double p1, double p2, std::size_t lag) {
    require(!paths.empty(), "paths must be nonempty");
    require(lag >= 1, "lag must be at least 1");
    // per-unit sums; units are paths, or time blocks when only one path is given
    std::vector<double> sr, si, cnt;
    const std::size_t blocks_single = 20;
    for (const auto& path : paths) {
        if (lag > path.n_steps) throw parameter_error("lag exceeds grid length");
        std::size_t n = path.n_steps + 1 - lag;
        std::size_t units = paths.size() == 1 ? std::min(blocks_single, n) : 1;
        for (std::size_t u = 0; u < units; ++u) {
            std::size_t lo = n * u / units, hi = n * (u + 1) / units;
            double re = 0.0, im = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                double ph = p1 * (path.x1[i + lag] - path.x1[i]) + p2 * (path.x2[i + lag] - path.x2[i]);
                re += std::cos(ph);
                im += std::sin(ph);
            }
            sr.push_back(re);
            si.push_back(im);
            cnt.push_back(static_cast<double>(hi - lo));
        }
    }
    double Sr = 0.0, Si = 0.0, C = 0.0;
    for (std::size_t k = 0; k < sr.size(); ++k) {
        Sr += sr[k];
        Si += si[k];
        C += cnt[k];
    }
    char_estimate est;
    est.value = {Sr / C, Si / C};
    est.count = static_cast<std::size_t>(C);
    const std::size_t K = sr.size();
    if (K >= 2) {
        std::vector<double> jr(K), ji(K);
        double mr = 0.0, mi = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            jr[k] = (Sr - sr[k]) / (C - cnt[k]);
            ji[k] = (Si - si[k]) / (C - cnt[k]);
            mr += jr[k];
            mi += ji[k];
        }
        mr /= K;
        mi /= K;
        double vr = 0.0, vi = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            vr += (jr[k] - mr) * (jr[k] - mr);
            vi += (ji[k] - mi) * (ji[k] - mi);
        }
        double f = static_cast<double>(K - 1) / static_cast<double>(K);
        est.se_re = std::sqrt(f * vr);
        est.se_im = std::sqrt(f * vi);
    }
    return est;
}

void write_path_csv(const path2d& path, const std::string& filename) {
    std::string body = "t,x1,x2\n";
    for (std::size_t i = 0; i <= path.n_steps; ++i)
        body += format_double(path.time(i)) + "," + format_double(path.x1[i]) + "," + format_double(path.x2[i]) + "\n";
    write_file_atomic(filename, body);
}

}
