#pragma once

#include <doctest.h>

#include <detlab/matrix.hpp>
#include <detlab/poly.hpp>
#include <detlab/polymatroid.hpp>
#include <detlab/rng.hpp>

namespace testutil {

using namespace detlab;

constexpr std::uint64_t kP = 10007;

template <class K>
Poly<K> random_poly(Rng& rng, const RingPtr& ring, typename FieldOf<K>::Ctx fctx, int maxterms,
                    int maxdeg, bool laurent) {
    Poly<K> p(ring, fctx);
    int nterms = 1 + static_cast<int>(rng.below(maxterms));
    for (int t = 0; t < nterms; ++t) {
        std::vector<int> e(ring->size());
        for (auto& x : e)
            x = static_cast<int>(rng.int_range(laurent ? -maxdeg : 0, maxdeg));
        K c;
        if constexpr (std::is_same_v<K, Rat>)
            c = Rat(rng.int_range(-5, 5));
        else
            c = Fp(rng.fp_elem(fctx.p), fctx.p);
        p.add_term(e, c);
    }
    return p;
}

inline Matrix<Rat> qmat(int cols, const std::vector<std::vector<long long>>& rows) {
    std::vector<std::vector<Rat>> conv;
    for (const auto& r : rows) {
        REQUIRE(static_cast<int>(r.size()) == cols);
        conv.emplace_back(r.begin(), r.end());
    }
    return Matrix<Rat>::from_rows(conv, cols, RatCtx{});
}

inline Matrix<Int> imat(int cols, const std::vector<std::vector<long long>>& rows) {
    std::vector<std::vector<Int>> conv;
    for (const auto& r : rows) {
        REQUIRE(static_cast<int>(r.size()) == cols);
        conv.emplace_back(r.begin(), r.end());
    }
    return Matrix<Int>::from_rows(conv, cols, IntCtx{});
}

inline Matrix<Fp> pmat(int cols, const std::vector<std::vector<long long>>& rows, std::uint64_t p) {
    std::vector<std::vector<Fp>> conv;
    for (const auto& r : rows) {
        REQUIRE(static_cast<int>(r.size()) == cols);
        std::vector<Fp> fr;
        for (long long x : r) fr.push_back(Fp::from_int(x, p));
        conv.push_back(std::move(fr));
    }
    return Matrix<Fp>::from_rows(conv, cols, FpCtx{p});
}

inline Matrix<Rat> random_qmat(Rng& rng, int rows, int cols, long long lo = -9, long long hi = 9) {
    Matrix<Rat> m(rows, cols, RatCtx{});
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Rat(rng.int_range(lo, hi));
    return m;
}

inline Matrix<Fp> random_pmat(Rng& rng, int rows, int cols, std::uint64_t p) {
    Matrix<Fp> m(rows, cols, FpCtx{p});
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Fp(rng.fp_elem(p), p);
    return m;
}

inline Matrix<Int> random_imat(Rng& rng, int rows, int cols, long long lo = -9, long long hi = 9) {
    Matrix<Int> m(rows, cols, IntCtx{});
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Int(rng.int_range(lo, hi));
    return m;
}

// Three coordinate planes in QQ^3; the canonical irreducible zero-total-defect
// tuple used across the suites.
inline SubspaceTuple<Rat> triangle_tuple() {
    std::vector<Matrix<Rat>> gens{
        qmat(3, {{1, 0, 0}, {0, 1, 0}}),
        qmat(3, {{0, 1, 0}, {0, 0, 1}}),
        qmat(3, {{1, 0, 0}, {0, 0, 1}}),
    };
    return make_subspace_tuple(gens, 3, RatCtx{});
}

// The repeated line: smallest tuple with a negative-defect subset.
inline SubspaceTuple<Rat> repeated_line_pair() {
    std::vector<Matrix<Rat>> gens{qmat(2, {{1, 0}}), qmat(2, {{1, 0}})};
    return make_subspace_tuple(gens, 2, RatCtx{});
}

inline SubspaceTuple<Rat> random_tuple_q(Rng& rng, int m, int ambient, int maxdim) {
    std::vector<Matrix<Rat>> gens;
    for (int i = 0; i < m; ++i) {
        int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(maxdim) + 1));
        gens.push_back(random_qmat(rng, d, ambient, -5, 5));
    }
    return make_subspace_tuple(gens, ambient, RatCtx{});
}

inline SubspaceTuple<Fp> random_tuple_p(Rng& rng, int m, int ambient, int maxdim, std::uint64_t p) {
    std::vector<Matrix<Fp>> gens;
    for (int i = 0; i < m; ++i) {
        int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(maxdim) + 1));
        gens.push_back(random_pmat(rng, d, ambient, p));
    }
    return make_subspace_tuple(gens, ambient, FpCtx{p});
}

// Generic tuples of m = n subspaces of dimension >= 2 are irreducible with
// zero total defect; the predicate filter discards unlucky draws.
inline SubspaceTuple<Rat> random_irreducible_bk(Rng& rng, int n, int tries = 400) {
    for (int t = 0; t < tries; ++t) {
        std::vector<Matrix<Rat>> gens;
        for (int i = 0; i < n; ++i) {
            int d = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n) - 1));  // [2, n]
            gens.push_back(random_qmat(rng, d, n, -4, 4));
        }
        auto tup = make_subspace_tuple(gens, n, RatCtx{});
        if (is_irreducible(tup).ok && is_bk(tup).ok) return tup;
    }
    throw MathError("no irreducible zero-total-defect tuple found in the retry budget");
}

}  // namespace testutil
