#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pqc {

// Seeded mt19937_64 with a platform-independent uniform double mapping,
// so identical seeds give identical samples byte for byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::vector<double> uniform_vector(size_t count, double lo, double hi) {
        std::vector<double> v(count);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace pqc
