#include "iltlab/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>

#include "iltlab/errors.hpp"
#include "iltlab/io.hpp"
#include "iltlab/special.hpp"

namespace iltlab {

namespace {
const double pi = std::numbers::pi;
}

void mollifier_params::validate() const {
    if (!(epsilon > 0.0)) throw parameter_error("epsilon must be positive");
    if (!(beta > 1.0 && beta <= 2.0)) throw parameter_error("beta must lie in (1,2]");
}

namespace stable_radial {

double f_series(double beta, double rho) {
    double h = 0.5 * rho, h2 = h * h;
    double sum = 0.0, pw = 1.0, fact = 1.0;
    for (int m = 0; m < 400; ++m) {
        if (m > 0) {
            pw *= h2;
            fact *= static_cast<double>(m) * static_cast<double>(m);
        }
        double t = pw / fact * std::exp(std::lgamma((2.0 * m + 2.0) / beta));
        sum += (m % 2 == 0) ? t : -t;
        if (m > 2 && t < 1e-18 * std::fabs(sum)) break;
    }
    return sum / (2.0 * pi * beta);
}

double g_series(double beta, double rho) {
    double h = 0.5 * rho, h2 = h * h;
    double sum = 0.0, pw = h, fact = 1.0;
    for (int m = 0; m < 400; ++m) {
        if (m > 0) {
            pw *= h2;
            fact *= static_cast<double>(m) * static_cast<double>(m + 1);
        }
        double t = pw / fact * std::exp(std::lgamma((2.0 * m + 4.0) / beta));
        sum += (m % 2 == 0) ? t : -t;
        if (m > 2 && t < 1e-18 * std::fabs(sum)) break;
    }
    return sum / (2.0 * pi * beta);
}

namespace {

std::vector<double> zero_panels(double nu, double rho, double rmax) {
    std::vector<double> pts = {0.0};
    for (double b : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
        if (b < rmax) pts.push_back(b);
    for (int k = 1;; ++k) {
        double z = bessel_j_zero_estimate(nu, k) / rho;
        if (z >= rmax) break;
        pts.push_back(z);
    }
    pts.push_back(rmax);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

quad_result radial_quad(double beta, double rho, int power, int order) {
    double rmax = std::pow(80.0, 1.0 / beta);
    quad_config cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-19;
    cfg.max_subdivisions = 20000;
    auto fn = [=](double r) {
        double j = order == 0 ? bessel_j0(r * rho) : bessel_j1(r * rho);
        return std::pow(r, power) * j * std::exp(-std::pow(r, beta));
    };
    quad_result q = integrate_panels(fn, zero_panels(order, rho, rmax), cfg);
    q.value /= 2.0 * pi;
    q.error /= 2.0 * pi;
    return q;
}

bool asymptotic(double beta, double rho, bool deriv, double& out) {
    if (beta >= 2.0 || rho <= 0.0) return false;
    double lr = std::log(rho);
    double sum = 0.0;
    double prev_mag = INFINITY;
    for (int k = 1; k < 400; ++k) {
        double lm = k * beta * std::log(2.0) + 2.0 * std::lgamma(1.0 + 0.5 * k * beta) - std::lgamma(k + 1.0) -
                    (2.0 + k * beta) * lr;
        double w = 1.0;
        if (deriv) {
            w = 2.0 + k * beta;
            lm -= lr;
        }
        double mag = w * std::exp(lm);
        if (mag > prev_mag) return false;
        double t = mag * std::sin(pi * k * beta / 2.0);
        sum += (k % 2 == 1) ? t : -t;
        if (mag < 1e-15 * std::fabs(sum)) {
            out = sum / (pi * pi);
            return true;
        }
        prev_mag = mag;
    }
    return false;
}

}

quad_result f_quad(double beta, double rho) { return radial_quad(beta, rho, 1, 0); }
quad_result g_quad(double beta, double rho) { return radial_quad(beta, rho, 2, 1); }

bool f_asymptotic(double beta, double rho, double& out) { return asymptotic(beta, rho, false, out); }
bool g_asymptotic(double beta, double rho, double& out) { return asymptotic(beta, rho, true, out); }

double f(double beta, double rho) {
    rho = std::fabs(rho);
    if (rho <= 1.0) return f_series(beta, rho);
    double v;
    if (rho >= 3.0 && f_asymptotic(beta, rho, v)) return v;
    return f_quad(beta, rho).value;
}

double g(double beta, double rho) {
    rho = std::fabs(rho);
    if (rho <= 1.0) return g_series(beta, rho);
    double v;
    if (rho >= 3.0 && g_asymptotic(beta, rho, v)) return v;
    return g_quad(beta, rho).value;
}

double g_slope_at_zero(double beta) { return std::tgamma(4.0 / beta) / (4.0 * pi * beta); }

}

double radial_profile::node(std::size_t i) const { return std::exp(log_lo_ + h_ * static_cast<double>(i)); }

void radial_profile::finish() {
    log_lo_ = std::log(grid.rho_min);
    std::size_t n = log_values.size();
    h_ = (std::log(grid.rho_max) - log_lo_) / static_cast<double>(n - 1);
    slope0 = stable_radial::g_slope_at_zero(beta);
    tail_coeff = std::exp(log_values.back()) * std::pow(grid.rho_max, 3.0 + beta);
}

double radial_profile::operator()(double rho) const {
    if (rho <= 0.0) return 0.0;
    if (rho < grid.rho_min) return slope0 * rho;
    if (rho > grid.rho_max) return rho > grid.rho_cut ? 0.0 : tail_coeff * std::pow(rho, -(3.0 + beta));
    const std::size_t n = log_values.size();
    double u = (std::log(rho) - log_lo_) / h_;
    long i = static_cast<long>(u) - 1;
    i = std::clamp(i, 0L, static_cast<long>(n) - 4);
    double t = u - static_cast<double>(i);
    const double* y = &log_values[static_cast<std::size_t>(i)];
    // cubic lagrange through nodes 0..3 at offset t
    double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
    double v = -y[0] * t1 * t2 * t3 / 6.0 + y[1] * t0 * t2 * t3 / 2.0 - y[2] * t0 * t1 * t3 / 2.0 +
               y[3] * t0 * t1 * t2 / 6.0;
    return std::exp(v);
}

radial_profile build_radial_profile(double beta, double tolerance, const profile_grid& grid) {
    if (!(beta > 1.0 && beta < 2.0)) throw parameter_error("build_radial_profile requires 1 < beta < 2");
    if (!(tolerance > 0.0)) throw parameter_error("tolerance must be positive");
    if (!(grid.rho_min > 0.0 && grid.rho_max > grid.rho_min * 10.0 && grid.per_decade >= 4 &&
          grid.rho_cut > grid.rho_max))
        throw parameter_error("invalid profile grid");
    radial_profile p;
    p.beta = beta;
    p.grid = grid;
    double decades = std::log10(grid.rho_max / grid.rho_min);
    std::size_t n = static_cast<std::size_t>(std::ceil(decades * grid.per_decade)) + 1;
    p.log_values.resize(n);
    double llo = std::log(grid.rho_min), h = (std::log(grid.rho_max) - llo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double gv = stable_radial::g(beta, std::exp(llo + h * static_cast<double>(i)));
        if (!(gv > 0.0) || !std::isfinite(gv))
            throw build_error("radial profile evaluation failed at node " + std::to_string(i), INFINITY);
        p.log_values[i] = std::log(gv);
    }
    p.finish();
    // interpolation error at cell midpoints
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double rho = std::exp(llo + h * (static_cast<double>(i) + 0.5));
        double exact = stable_radial::g(beta, rho);
        worst = std::max(worst, std::fabs(p(rho) - exact) / exact);
    }
    p.achieved = worst;
    if (worst > tolerance)
        throw build_error("radial profile tolerance " + format_double(tolerance) + " not reached, achieved " +
                              format_double(worst),
                          worst);
    return p;
}

namespace {
const char profile_magic[8] = {'I', 'L', 'T', 'P', 'R', 'O', 'F', '1'};

template <class T>
void put(std::string& s, const T& v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    s.append(b, sizeof(T));
}

template <class T>
T get(const std::string& s, std::size_t& pos) {
    if (pos + sizeof(T) > s.size()) throw std::runtime_error("truncated profile file");
    T v;
    std::memcpy(&v, s.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}
}

std::string profile_cache_name(double beta, const profile_grid& grid) {
    std::string key = ILTLAB_VERSION_TAG;
    key += "|" + format_double(beta) + "|" + format_double(grid.rho_min) + "|" + format_double(grid.rho_max) + "|" +
           std::to_string(grid.per_decade) + "|" + format_double(grid.rho_cut);
    return "profile-" + hex64(fnv1a64(key)) + ".bin";
}

void save_radial_profile(const radial_profile& p, const std::string& file) {
    std::string s(profile_magic, 8);
    std::string tag = ILTLAB_VERSION_TAG;
    put<std::uint32_t>(s, static_cast<std::uint32_t>(tag.size()));
    s += tag;
    put(s, p.beta);
    put(s, p.grid.rho_min);
    put(s, p.grid.rho_max);
    put<std::int32_t>(s, p.grid.per_decade);
    put(s, p.grid.rho_cut);
    put(s, p.achieved);
    put<std::uint64_t>(s, p.log_values.size());
    for (double v : p.log_values) put(s, v);
    put<std::uint64_t>(s, fnv1a64(s));
    write_file_atomic(file, s);
}

radial_profile load_radial_profile(const std::string& file) {
    std::string s = read_file(file);
    if (s.size() < 16 || std::memcmp(s.data(), profile_magic, 8) != 0) throw std::runtime_error("bad profile magic");
    std::size_t body = s.size() - sizeof(std::uint64_t);
    std::size_t pos = body;
    if (get<std::uint64_t>(s, pos) != fnv1a64(s.substr(0, body))) throw std::runtime_error("profile checksum mismatch");
    pos = 8;
    auto len = get<std::uint32_t>(s, pos);
    if (pos + len > body) throw std::runtime_error("truncated profile file");
    std::string tag = s.substr(pos, len);
    pos += len;
    if (tag != ILTLAB_VERSION_TAG) throw std::runtime_error("profile version mismatch");
    radial_profile p;
    p.beta = get<double>(s, pos);
    p.grid.rho_min = get<double>(s, pos);
    p.grid.rho_max = get<double>(s, pos);
    p.grid.per_decade = get<std::int32_t>(s, pos);
    p.grid.rho_cut = get<double>(s, pos);
    p.achieved = get<double>(s, pos);
    auto n = get<std::uint64_t>(s, pos);
    if (n < 4 || pos + n * sizeof(double) > body) throw std::runtime_error("truncated profile file");
    p.log_values.resize(n);
    for (auto& v : p.log_values) v = get<double>(s, pos);
    p.finish();
    return p;
}

radial_profile cached_radial_profile(double beta, double tolerance, const profile_grid& grid, const std::string& dir) {
    std::string file = (std::filesystem::path(dir) / profile_cache_name(beta, grid)).string();
    if (file_exists(file)) {
        try {
            radial_profile p = load_radial_profile(file);
            if (p.beta == beta && p.achieved <= tolerance) return p;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "warning: profile cache %s unusable (%s), rebuilding\n", file.c_str(), e.what());
        }
    }
    radial_profile p = build_radial_profile(beta, tolerance, grid);
    save_radial_profile(p, file);
    return p;
}

namespace {
std::mutex registry_mutex;
std::map<double, std::unique_ptr<radial_profile>> registry;
std::string registry_dir;
}

void set_profile_cache_dir(const std::string& dir) {
    std::lock_guard<std::mutex> lock(registry_mutex);
    registry_dir = dir;
}

const radial_profile& shared_profile(double beta) {
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto it = registry.find(beta);
    if (it != registry.end()) return *it->second;
    const double tol = 1e-6;
    auto p = std::make_unique<radial_profile>(registry_dir.empty() ? build_radial_profile(beta, tol)
                                                                   : cached_radial_profile(beta, tol, {}, registry_dir));
    const radial_profile& ref = *p;
    registry.emplace(beta, std::move(p));
    return ref;
}

double density(const process_spec& spec, double eps, double x1, double x2) {
    spec.validate();
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    double r2 = x1 * x1 + x2 * x2;
    if (spec.kind == process_kind::brownian) return std::exp(-r2 / (4.0 * eps)) / (4.0 * pi * eps);
    double s = std::pow(eps, 1.0 / spec.beta);
    if (spec.beta == 2.0) {
        // no power tail at beta = 2; direct quadrature
        return stable_radial::f_quad(2.0, std::sqrt(r2) / s).value / (s * s);
    }
    return stable_radial::f(spec.beta, std::sqrt(r2) / s) / (s * s);
}

double density_dx1(const process_spec& spec, double eps, double x1, double x2) {
    spec.validate();
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    if (spec.kind == process_kind::brownian || spec.beta == 2.0)
        return -(x1 / (2.0 * eps)) * std::exp(-(x1 * x1 + x2 * x2) / (4.0 * eps)) / (4.0 * pi * eps);
    return dx1_kernel::make(spec, eps)(x1, x2);
}

dx1_kernel dx1_kernel::make(const process_spec& spec, double eps) {
    spec.validate();
    if (!(eps > 0.0)) throw parameter_error("epsilon must be positive");
    dx1_kernel k;
    k.eps = eps;
    if (spec.kind == process_kind::brownian || spec.beta == 2.0) {
        k.gaussian = true;
        k.inv4eps = 1.0 / (4.0 * eps);
        k.pref = 1.0 / (8.0 * pi * eps * eps);
    } else {
        k.gaussian = false;
        k.profile = &shared_profile(spec.beta);
        k.scale = std::pow(eps, -1.0 / spec.beta);
        k.amp = std::pow(eps, -3.0 / spec.beta);
        k.cut2 = k.profile->grid.rho_cut * k.profile->grid.rho_cut;
    }
    return k;
}

double dx1_kernel::operator()(double y1, double y2) const {
    double r2 = y1 * y1 + y2 * y2;
    if (gaussian) {
        double e = r2 * inv4eps;
        if (e > 80.0) return 0.0;
        return -pref * y1 * std::exp(-e);
    }
    double rho2 = r2 * scale * scale;
    if (rho2 >= cut2 || r2 == 0.0) return 0.0;
    double rho = std::sqrt(rho2);
    // f' = -eps^{-3/beta} (y1/|y|) g(rho)
    return -amp * (y1 * scale / rho) * (*profile)(rho);
}

}
