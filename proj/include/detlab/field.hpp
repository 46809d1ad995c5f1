#pragma once

#include <cstdint>
#include <string>

#include "detlab/fp.hpp"
#include "detlab/numeric.hpp"

namespace detlab {

struct FieldSpec {
    enum class Kind { rationals, prime };
    Kind kind = Kind::rationals;
    std::uint64_t p = 0;

    static FieldSpec rationals() { return FieldSpec{Kind::rationals, 0}; }

    static FieldSpec prime(std::uint64_t p) {
        if (p >= (1ULL << 63)) throw InputError("prime modulus must be < 2^63");
        if (!is_prime_u64(p)) throw InputError("modulus " + std::to_string(p) + " is not prime");
        return FieldSpec{Kind::prime, p};
    }

    bool operator==(const FieldSpec&) const = default;

    std::string str() const {
        return kind == Kind::rationals ? "QQ" : "GF(" + std::to_string(p) + ")";
    }
};

struct RatCtx {
    bool operator==(const RatCtx&) const = default;
};
struct FpCtx {
    std::uint64_t p = 0;
    bool operator==(const FpCtx&) const = default;
};
struct IntCtx {
    bool operator==(const IntCtx&) const = default;
};

template <class K>
struct FieldOf;

template <>
struct FieldOf<Rat> {
    using Ctx = RatCtx;
    static Rat zero(Ctx) { return Rat(0); }
    static Rat one(Ctx) { return Rat(1); }
    static Rat from_int(Ctx, std::int64_t v) { return Rat(v); }
    static bool is_zero(const Rat& x) { return x == 0; }
    static Rat inv(const Rat& x) {
        if (x == 0) throw MathError("division by zero");
        return Rat(1) / x;
    }
    static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct FieldOf<Fp> {
    using Ctx = FpCtx;
    static Fp zero(Ctx c) { return Fp(0, c.p); }
    static Fp one(Ctx c) { return Fp(1, c.p); }
    static Fp from_int(Ctx c, std::int64_t v) { return Fp::from_int(v, c.p); }
    static bool is_zero(const Fp& x) { return x.v == 0; }
    static Fp inv(const Fp& x) { return x.inv(); }
    static std::string str(const Fp& x) { return x.str(); }
};

// Integer ring marker: enough structure for stacking/printing and the normal
// forms; division-dependent algorithms are not instantiated over Int.
template <>
struct FieldOf<Int> {
    using Ctx = IntCtx;
    static Int zero(Ctx) { return Int(0); }
    static Int one(Ctx) { return Int(1); }
    static Int from_int(Ctx, std::int64_t v) { return Int(v); }
    static bool is_zero(const Int& x) { return x == 0; }
    static std::string str(const Int& x) { return x.str(); }
};

}  // namespace detlab
