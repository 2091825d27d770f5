#pragma once

#include <cstdint>
#include <random>

namespace sgl {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// mt19937_64 is bit-reproducible across standard libraries; the real-valued
// conversion is done by hand because std distributions are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : eng_(splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull))) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // Open interval (0,1), for inverse-CDF draws that must avoid 0.
    double uniform_open() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }
    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace sgl
