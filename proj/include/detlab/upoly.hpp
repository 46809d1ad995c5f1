#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "detlab/fp.hpp"
#include "detlab/numeric.hpp"
#include "detlab/poly.hpp"
#include "detlab/rng.hpp"

namespace detlab {

// Dense univariate polynomial over GF(p). Coefficients run from degree 0
// upward with no trailing zeros, so deg() is size-1 and the zero polynomial
// has deg() == -1.
class UPoly {
public:
    explicit UPoly(std::uint64_t p) : p_(p) { check_prime(p); }

    UPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
        check_prime(p);
        for (auto& v : c_) v %= p_;
        trim();
    }

    static UPoly constant(std::uint64_t p, std::uint64_t v) { return UPoly(p, {v}); }

    static UPoly var(std::uint64_t p) { return UPoly(p, {0, 1}); }

    std::uint64_t prime() const { return p_; }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    std::uint64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0;
    }

    std::uint64_t lc() const {
        assert(!c_.empty());
        return c_.back();
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        assert(a.p_ == b.p_);
        std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = add_mod(a.coeff(i), b.coeff(i), a.p_);
        return UPoly(a.p_, std::move(c));
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        assert(a.p_ == b.p_);
        std::vector<std::uint64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = sub_mod(a.coeff(i), b.coeff(i), a.p_);
        return UPoly(a.p_, std::move(c));
    }

    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        assert(a.p_ == b.p_);
        if (a.is_zero() || b.is_zero()) return UPoly(a.p_);
        std::vector<std::uint64_t> c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] = add_mod(c[i + j], mul_mod(a.c_[i], b.c_[j], a.p_), a.p_);
        return UPoly(a.p_, std::move(c));
    }

    UPoly scaled(std::uint64_t k) const {
        std::vector<std::uint64_t> c(c_);
        for (auto& v : c) v = mul_mod(v, k % p_, p_);
        return UPoly(p_, std::move(c));
    }

    UPoly monic() const {
        if (is_zero()) return *this;
        return scaled(inv_mod(lc(), p_));
    }

    UPoly derivative() const {
        if (deg() < 1) return UPoly(p_);
        std::vector<std::uint64_t> c(c_.size() - 1, 0);
        for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = mul_mod(c_[i], i % p_, p_);
        return UPoly(p_, std::move(c));
    }

    std::uint64_t evaluate(std::uint64_t x) const {
        std::uint64_t acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = add_mod(mul_mod(acc, x % p_, p_), *it, p_);
        return acc;
    }

    // quotient and remainder of a by b, deg(r) < deg(b)
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
        assert(a.p_ == b.p_);
        if (b.is_zero()) throw InputError("univariate division by zero");
        UPoly q(a.p_), r = a;
        std::uint64_t binv = inv_mod(b.lc(), b.p_);
        std::vector<std::uint64_t> qc(
            r.deg() >= b.deg() ? static_cast<std::size_t>(r.deg() - b.deg()) + 1 : 0, 0);
        while (r.deg() >= b.deg()) {
            int k = r.deg() - b.deg();
            std::uint64_t f = mul_mod(r.lc(), binv, a.p_);
            qc[k] = f;
            std::vector<std::uint64_t> sub(static_cast<std::size_t>(k) + b.c_.size(), 0);
            for (std::size_t i = 0; i < b.c_.size(); ++i)
                sub[k + i] = mul_mod(b.c_[i], f, a.p_);
            r = r - UPoly(a.p_, std::move(sub));
        }
        return {UPoly(a.p_, std::move(qc)), r};
    }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

private:
    static void check_prime(std::uint64_t p) {
        if (!is_prime_u64(p)) throw InputError("UPoly modulus must be prime");
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

// monic gcd; gcd(0,0) = 0
inline UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = UPoly::divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline UPoly exact_div_uni(const UPoly& a, const UPoly& b) {
    auto [q, r] = UPoly::divmod(a, b);
    assert(r.is_zero());
    return q;
}

// base^e mod m, deg(m) >= 1
inline UPoly pow_mod(const UPoly& base, std::uint64_t e, const UPoly& m) {
    if (m.deg() < 1) throw InputError("modular exponent needs a modulus of degree >= 1");
    UPoly acc = UPoly::constant(m.prime(), 1);
    UPoly sq = UPoly::divmod(base, m).second;
    while (e != 0) {
        if (e & 1) acc = UPoly::divmod(acc * sq, m).second;
        sq = UPoly::divmod(sq * sq, m).second;
        e >>= 1;
    }
    return acc;
}

// Product of the distinct irreducible factors, monic. Needs p > deg f so no
// factor exponent or factor degree is divisible by p.
inline UPoly squarefree_uni(const UPoly& f) {
    if (f.is_zero()) throw InputError("squarefree part of zero");
    if (static_cast<std::uint64_t>(f.deg()) >= f.prime())
        throw InputError("squarefree part needs p > deg f");
    if (f.deg() == 0) return UPoly::constant(f.prime(), 1);
    UPoly g = gcd(f, f.derivative());
    if (g.deg() == 0) return f.monic();
    return exact_div_uni(f, g).monic();
}

// Distinct roots of f in GF(p), ascending. Equal-degree splitting with random
// shifts; p must be odd.
inline std::vector<std::uint64_t> distinct_roots(const UPoly& f, Rng& rng) {
    if (f.is_zero()) throw InputError("root finding on the zero polynomial");
    std::uint64_t p = f.prime();
    if (p == 2) throw InputError("root splitting needs an odd prime");
    std::vector<std::uint64_t> roots;
    if (f.deg() == 0) return roots;
    UPoly x = UPoly::var(p);
    UPoly g = gcd(f, pow_mod(x, p, f) - UPoly::divmod(x, f).second);
    std::vector<UPoly> todo{g};
    while (!todo.empty()) {
        UPoly cur = std::move(todo.back());
        todo.pop_back();
        if (cur.deg() < 1) continue;
        if (cur.deg() == 1) {
            roots.push_back(cur.coeff(0) == 0 ? 0 : p - cur.coeff(0));
            continue;
        }
        int spins = 0;
        for (;;) {
            UPoly shifted(p, {rng.fp_elem(p), 1});
            UPoly w = pow_mod(shifted, (p - 1) / 2, cur) - UPoly::constant(p, 1);
            UPoly d = gcd(cur, w);
            if (d.deg() > 0 && d.deg() < cur.deg()) {
                todo.push_back(exact_div_uni(cur, d).monic());
                todo.push_back(std::move(d));
                break;
            }
            if (++spins > 256) throw CheckFailure("root splitting failed to separate factors");
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Bivariate view: f in GF(p)[s,t] as polynomials in t indexed by the power of
// s, with s = variable 0 and t = variable 1 of a two-variable ring.

inline std::vector<UPoly> bivariate_rows(const Poly<Fp>& f) {
    if (f.ring()->size() != 2) throw InputError("bivariate view needs a two-variable ring");
    if (f.has_negative_exponents())
        throw InputError("bivariate view needs nonnegative exponents");
    std::uint64_t p = f.fctx().p;
    std::vector<UPoly> rows(static_cast<std::size_t>(std::max(f.degree_in(0), 0)) + 1, UPoly(p));
    for (const auto& [e, c] : f.terms()) {
        std::vector<std::uint64_t> u(static_cast<std::size_t>(e[1]) + 1, 0);
        u[e[1]] = c.v;
        rows[e[0]] = rows[e[0]] + UPoly(p, std::move(u));
    }
    while (!rows.empty() && rows.back().is_zero()) rows.pop_back();
    return rows;
}

inline Poly<Fp> poly_of_uni(const RingPtr& ring, FpCtx ctx, const UPoly& u, int var) {
    Poly<Fp> out(ring, ctx);
    for (int i = 0; i <= u.deg(); ++i) {
        if (u.coeff(i) == 0) continue;
        std::vector<int> e(ring->size(), 0);
        e[var] = i;
        out += Poly<Fp>::monomial(ring, ctx, std::move(e), Fp(u.coeff(i), ctx.p));
    }
    return out;
}

inline Poly<Fp> poly_of_rows(const RingPtr& ring, FpCtx ctx, const std::vector<UPoly>& rows) {
    Poly<Fp> out(ring, ctx);
    Poly<Fp> s = Poly<Fp>::variable(ring, ctx, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        out += poly_of_uni(ring, ctx, rows[i], 1) * s.pow(static_cast<int>(i));
    return out;
}

// monic gcd of the coefficient rows; zero only for an all-zero row list
inline UPoly bivariate_content(const std::vector<UPoly>& rows, std::uint64_t p) {
    UPoly g(p);
    for (const auto& r : rows) g = gcd(g, r);
    return g;
}

namespace upoly_detail {

inline int rows_deg(const std::vector<UPoly>& r) { return static_cast<int>(r.size()) - 1; }

inline void rows_trim(std::vector<UPoly>& r) {
    while (!r.empty() && r.back().is_zero()) r.pop_back();
}

inline std::vector<UPoly> rows_primitive(const std::vector<UPoly>& r, std::uint64_t p) {
    UPoly c = bivariate_content(r, p);
    std::vector<UPoly> out;
    out.reserve(r.size());
    for (const auto& u : r) out.push_back(u.is_zero() ? UPoly(p) : exact_div_uni(u, c));
    return out;
}

// pseudo-remainder of a by b in the main variable s
inline std::vector<UPoly> rows_prem(std::vector<UPoly> r, const std::vector<UPoly>& b,
                                    std::uint64_t p) {
    int db = rows_deg(b);
    assert(db >= 0);
    while (rows_deg(r) >= db) {
        int k = rows_deg(r) - db;
        UPoly lr = r.back();
        const UPoly& lb = b.back();
        std::vector<UPoly> next(r.size() - 1, UPoly(p));
        for (int i = 0; i + 1 < static_cast<int>(r.size()); ++i) {
            UPoly v = lb * r[i];
            if (i - k >= 0 && i - k < db) v = v - lr * b[i - k];
            next[i] = std::move(v);
        }
        r = std::move(next);
        rows_trim(r);
    }
    return r;
}

}  // namespace upoly_detail

// leading grlex coefficient scaled to 1
inline Poly<Fp> monic_normalize(const Poly<Fp>& f) {
    if (f.is_zero()) return f;
    return f * Poly<Fp>::constant(f.ring(), f.fctx(), f.leading().second.inv());
}

// gcd in GF(p)[s,t] by a primitive pseudo-remainder sequence in s with
// univariate content gcds in t; result normalized to leading coefficient 1.
inline Poly<Fp> bivariate_gcd(const Poly<Fp>& a, const Poly<Fp>& b) {
    Poly<Fp>::require_same(a, b);
    if (a.is_zero()) return monic_normalize(b);
    if (b.is_zero()) return monic_normalize(a);
    std::uint64_t p = a.fctx().p;
    std::vector<UPoly> ra = bivariate_rows(a), rb = bivariate_rows(b);
    UPoly g0 = gcd(bivariate_content(ra, p), bivariate_content(rb, p));
    ra = upoly_detail::rows_primitive(ra, p);
    rb = upoly_detail::rows_primitive(rb, p);
    if (upoly_detail::rows_deg(ra) < upoly_detail::rows_deg(rb)) std::swap(ra, rb);
    while (upoly_detail::rows_deg(rb) > 0) {
        std::vector<UPoly> r = upoly_detail::rows_prem(ra, rb, p);
        if (r.empty()) {
            Poly<Fp> pp = poly_of_rows(a.ring(), a.fctx(), rb);
            return monic_normalize(poly_of_uni(a.ring(), a.fctx(), g0, 1) * pp);
        }
        ra = std::move(rb);
        rb = upoly_detail::rows_primitive(r, p);
    }
    // primitive and constant in s: the parts are coprime, only the content survives
    return monic_normalize(poly_of_uni(a.ring(), a.fctx(), g0, 1));
}

}  // namespace detlab
