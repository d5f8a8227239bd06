#pragma once

#include <cstdint>
#include <vector>

namespace homoperc {

// Counter-based generator: output i of stream s is mix64(s + i*GAMMA).
// Streams derived from (master seed, stream index) are independent for
// practical purposes and do not share state, so work can be split across
// threads while every stream still produces the exact same sequence.
constexpr std::uint64_t kRngGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index,
                                   std::uint64_t salt = 0) {
    return mix64(master ^ mix64(index + salt * kRngGamma));
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t stream_key) : key_(stream_key), counter_(0) {}

    std::uint64_t next() { return mix64(key_ + (counter_++) * kRngGamma); }

    // Unbiased integer in [0, bound) by multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound < 2) return 0;
        while (true) {
            std::uint64_t x = next();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (0ULL - bound) % bound)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace homoperc
