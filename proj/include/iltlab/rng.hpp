#pragma once

#include <cstdint>
#include <limits>

namespace iltlab {

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// xoshiro256**, seeded from splitmix64
class rng_stream {
public:
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    explicit rng_stream(std::uint64_t seed);
    std::uint64_t next();
    result_type operator()() { return next(); }
    double uniform();           // (0,1), never 0
    double normal();            // polar method, caches the second draw
    double exponential();
private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct rng_policy {
    std::uint64_t master_seed = 20240917;
    rng_stream stream(std::uint64_t path_index) const { return rng_stream(mix_seed(master_seed, path_index)); }
};

}
