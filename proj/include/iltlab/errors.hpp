#pragma once

#include <stdexcept>
#include <string>

namespace iltlab {

struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct quadrature_error : std::runtime_error {
    double estimate;
    double error;
    quadrature_error(const std::string& what, double est, double err)
        : std::runtime_error(what), estimate(est), error(err) {}
};

struct build_error : std::runtime_error {
    double achieved;
    build_error(const std::string& what, double ach) : std::runtime_error(what), achieved(ach) {}
};

struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw parameter_error(msg);
}

}
