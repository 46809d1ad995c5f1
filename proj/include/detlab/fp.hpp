#pragma once

#include <cassert>
#include <cstdint>
#include <string>

#include "detlab/numeric.hpp"

namespace detlab {

// Prime-field element carrying its modulus. 16 bytes per scalar is a fine
// trade at desk scale; it keeps values closed under arithmetic with no
// ambient field context to thread through generic code.
struct Fp {
    std::uint64_t v = 0;
    std::uint64_t p = 0;  // 0 only in default-constructed placeholders

    Fp() = default;
    Fp(std::uint64_t value, std::uint64_t prime) : v(value % prime), p(prime) {}

    static Fp from_int(std::int64_t x, std::uint64_t prime) {
        std::int64_t m = x % static_cast<std::int64_t>(prime);
        if (m < 0) m += static_cast<std::int64_t>(prime);
        return Fp(static_cast<std::uint64_t>(m), prime);
    }

    bool is_zero() const { return v == 0; }

    friend Fp operator+(Fp a, Fp b) {
        assert(a.p == b.p && a.p != 0);
        return Fp(add_mod(a.v, b.v, a.p), a.p);
    }
    friend Fp operator-(Fp a, Fp b) {
        assert(a.p == b.p && a.p != 0);
        return Fp(sub_mod(a.v, b.v, a.p), a.p);
    }
    friend Fp operator*(Fp a, Fp b) {
        assert(a.p == b.p && a.p != 0);
        return Fp(mul_mod(a.v, b.v, a.p), a.p);
    }
    friend Fp operator/(Fp a, Fp b) {
        assert(a.p == b.p && a.p != 0);
        return Fp(mul_mod(a.v, inv_mod(b.v, b.p), a.p), a.p);
    }
    Fp operator-() const {
        assert(p != 0);
        return Fp(v == 0 ? 0 : p - v, p);
    }
    Fp& operator+=(Fp b) { return *this = *this + b; }
    Fp& operator-=(Fp b) { return *this = *this - b; }
    Fp& operator*=(Fp b) { return *this = *this * b; }

    Fp inv() const { return Fp(inv_mod(v, p), p); }

    Fp pow(std::int64_t e) const {
        std::uint64_t base = v;
        if (e < 0) {
            base = inv_mod(v, p);
            e = -e;
        }
        return Fp(pow_mod(base, static_cast<std::uint64_t>(e), p), p);
    }

    friend bool operator==(Fp a, Fp b) { return a.v == b.v && a.p == b.p; }
    friend bool operator!=(Fp a, Fp b) { return !(a == b); }

    std::string str() const { return std::to_string(v); }
};

}  // namespace detlab
