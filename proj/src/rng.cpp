#include "iltlab/rng.hpp"

#include <cmath>

namespace iltlab {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t a = master;
    std::uint64_t h = splitmix64(a);
    std::uint64_t b = index ^ h;
    return splitmix64(b);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

rng_stream::rng_stream(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : s_) w = splitmix64(st);
}

std::uint64_t rng_stream::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double rng_stream::uniform() {
    // 53 random bits, shifted off zero
    return ((next() >> 11) + 0.5) * 0x1.0p-53;
}

double rng_stream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, r;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        r = u * u + v * v;
    } while (r >= 1.0 || r == 0.0);
    double c = std::sqrt(-2.0 * std::log(r) / r);
    spare_ = v * c;
    has_spare_ = true;
    return u * c;
}

double rng_stream::exponential() { return -std::log(uniform()); }

}
