#pragma once

#include <cstdint>
#include <random>

#include "detlab/numeric.hpp"

namespace detlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-trial seed derivation: stable the whole reproducibility story rests on it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// mt19937_64 output is fixed by the standard; sampling is hand-rolled rejection
// so streams are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw InputError("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // inclusive bounds
    std::int64_t int_range(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw InputError("Rng::int_range: empty range");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(below(span));
    }

    std::uint64_t fp_elem(std::uint64_t p) { return below(p); }

    std::uint64_t fp_nonzero(std::uint64_t p) { return 1 + below(p - 1); }

private:
    std::mt19937_64 eng_;
};

}  // namespace detlab
