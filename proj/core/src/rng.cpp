#include "galign/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace galign {

std::uint64_t Rng::mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Rng Rng::child(std::uint64_t a) const { return Rng(mix(key_ ^ mix(a))); }

Rng Rng::child(std::uint64_t a, std::uint64_t b) const { return child(a).child(b); }

Rng Rng::child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return child(a).child(b).child(c);
}

double Rng::uniform01() {
    // 53 random bits; +1 shifts the range from [0,1) to (0,1] so log() is safe.
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection sampling to remove modulo bias.
    std::uint64_t x, r;
    do {
        x = next();
        r = x % n;
    } while (x - r > UINT64_MAX - (n - 1));
    return r;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

}  // namespace galign
