#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "detlab/matrix.hpp"
#include "detlab/parallel.hpp"
#include "detlab/poly.hpp"
#include "detlab/rng.hpp"
#include "detlab/upoly.hpp"

namespace detlab {

inline RingPtr section_ring() { return make_ring({"s", "t"}); }

// Random plane section over GF(prime): each variable maps to an independent
// affine form alpha*s + beta*t + gamma. Draw order is part of the
// reproducibility contract: attempt a uses Rng(derive_seed(seed, a)) and pulls
// alpha, beta, gamma per variable in ring order. Retries rerandomize the
// forms; they cannot help when the reduction mod prime already lost degree.
inline Poly<Fp> plane_section(const Poly<Rat>& f, std::uint64_t prime, std::uint64_t seed) {
    if (f.is_zero()) throw InputError("plane section of the zero polynomial");
    if (f.has_negative_exponents())
        throw InputError("plane section needs nonnegative exponents; clear monomial units first");
    int d = f.total_degree();
    if (d < 1) throw InputError("plane section needs total degree >= 1");
    if (!is_prime_u64(prime)) throw InputError("section modulus must be prime");
    std::uint64_t bound = 2ULL * static_cast<std::uint64_t>(d) * (2ULL * d - 1);
    if (prime <= 1000000ULL || prime <= bound)
        throw InputError("section prime must exceed 10^6 and 2d(2d-1)");

    FpCtx ctx{prime};
    Poly<Fp> reduced(f.ring(), ctx);
    for (const auto& [e, c] : f.terms()) {
        Fp cv = rat_mod_p(c, prime);
        if (!cv.is_zero()) reduced += Poly<Fp>::monomial(f.ring(), ctx, e, cv);
    }
    if (reduced.total_degree() < d)
        throw MathError("section degeneracy: degree collapses under reduction mod the prime");

    int nv = f.ring()->size();
    std::vector<int> emax(nv, 0);
    for (const auto& [e, c] : reduced.terms())
        for (int i = 0; i < nv; ++i) emax[i] = std::max(emax[i], e[i]);

    RingPtr st = section_ring();
    Poly<Fp> s = Poly<Fp>::variable(st, ctx, 0);
    Poly<Fp> t = Poly<Fp>::variable(st, ctx, 1);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::vector<Poly<Fp>>> pows(nv);
        for (int i = 0; i < nv; ++i) {
            Poly<Fp> form = s * Poly<Fp>::constant(st, ctx, Fp(rng.fp_elem(prime), prime)) +
                            t * Poly<Fp>::constant(st, ctx, Fp(rng.fp_elem(prime), prime)) +
                            Poly<Fp>::constant(st, ctx, Fp(rng.fp_elem(prime), prime));
            pows[i].push_back(Poly<Fp>::constant(st, ctx, Fp(1, prime)));
            for (int k = 1; k <= emax[i]; ++k) pows[i].push_back(pows[i].back() * form);
        }
        Poly<Fp> image(st, ctx);
        for (const auto& [e, c] : reduced.terms()) {
            Poly<Fp> term = Poly<Fp>::constant(st, ctx, c);
            for (int i = 0; i < nv; ++i)
                if (e[i] != 0) term = term * pows[i][e[i]];
            image += term;
        }
        if (image.total_degree() == d) return image;
    }
    throw MathError("section degeneracy");
}

// Product of the distinct irreducible factors of a bivariate polynomial over
// GF(p), leading coefficient 1. Factors lying in GF(p)[t] alone live in the
// content with respect to s, so the content's squarefree part is computed
// separately and multiplied back.
inline Poly<Fp> squarefree_part(const Poly<Fp>& f) {
    if (f.is_zero()) throw InputError("squarefree part of zero");
    if (f.ring()->size() != 2) throw InputError("squarefree part needs a two-variable ring");
    if (f.has_negative_exponents())
        throw InputError("squarefree part needs nonnegative exponents");
    std::uint64_t p = f.fctx().p;
    if (static_cast<std::uint64_t>(f.total_degree()) >= p)
        throw InputError("squarefree part needs p > deg f");
    if (f.total_degree() == 0) return monic_normalize(f);

    std::vector<UPoly> rows = bivariate_rows(f);
    UPoly content = bivariate_content(rows, p);
    Poly<Fp> content_poly = poly_of_uni(f.ring(), f.fctx(), content, 1);
    Poly<Fp> primitive = exact_div(f, content_poly);
    Poly<Fp> content_sqfree = poly_of_uni(f.ring(), f.fctx(), squarefree_uni(content), 1);
    if (primitive.degree_in(0) == 0) return monic_normalize(content_sqfree);
    Poly<Fp> g = bivariate_gcd(primitive, partial_derivative(primitive, 0));
    Poly<Fp> core = exact_div(primitive, g);
    return monic_normalize(content_sqfree * core);
}

// Number of absolutely irreducible factors of a squarefree bivariate
// polynomial over GF(p), as the dimension of the solution space of the
// differential system f*dg/dt - g*df/dt = f*dh/ds - h*df/ds with the degree
// bounds deg_s g <= m-1, deg_t g <= n, deg_s h <= m, deg_t h <= n-1 where
// (m, n) is the bidegree of f. Valid for p > D(2D-1), D = max(m, n).
inline int absolute_factor_count(const Poly<Fp>& f) {
    if (f.is_zero()) throw InputError("factor count of zero");
    if (f.ring()->size() != 2) throw InputError("factor counting needs a two-variable ring");
    if (f.has_negative_exponents())
        throw InputError("factor counting needs nonnegative exponents");
    std::uint64_t p = f.fctx().p;
    int m = std::max(f.degree_in(0), 0);
    int n = std::max(f.degree_in(1), 0);
    std::uint64_t dmax = static_cast<std::uint64_t>(std::max(m, n));
    if (p <= dmax * (2 * dmax - 1) || p <= dmax)
        throw InputError("factor counting needs p > D(2D-1) for the max partial degree D");
    if (squarefree_part(f) != monic_normalize(f))
        throw InputError("factor counting requires squarefree input");
    if (m == 0 && n == 0) return 0;
    // a squarefree univariate polynomial splits into deg distinct linear
    // factors over the algebraic closure
    if (m == 0) return n;
    if (n == 0) return m;

    Poly<Fp> fs = partial_derivative(f, 0);
    Poly<Fp> ft = partial_derivative(f, 1);
    RingPtr ring = f.ring();
    FpCtx ctx = f.fctx();
    auto mono = [&](int i, int j) {
        return Poly<Fp>::monomial(ring, ctx, std::vector<int>{i, j}, Fp(1, p));
    };

    std::vector<Poly<Fp>> columns;
    for (int i = 0; i <= m - 1; ++i)
        for (int j = 0; j <= n; ++j) {
            Poly<Fp> basis = mono(i, j);
            columns.push_back(f * partial_derivative(basis, 1) - basis * ft);
        }
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n - 1; ++j) {
            Poly<Fp> basis = mono(i, j);
            columns.push_back(basis * fs - f * partial_derivative(basis, 0));
        }

    std::map<std::pair<int, int>, int> row_of;
    for (const auto& col : columns)
        for (const auto& [e, c] : col.terms()) {
            auto key = std::make_pair(e[0], e[1]);
            if (!row_of.count(key)) row_of.emplace(key, static_cast<int>(row_of.size()));
        }
    Matrix<Fp> system(static_cast<int>(row_of.size()), static_cast<int>(columns.size()), ctx);
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [e, c] : columns[j].terms())
            system.at(row_of.at({e[0], e[1]}), static_cast<int>(j)) = c;
    return static_cast<int>(columns.size()) - rank(system);
}

enum class Verdict { zero, monomial, absolutely_irreducible, reducible, inconclusive };

inline std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::zero: return "zero";
        case Verdict::monomial: return "monomial";
        case Verdict::absolutely_irreducible: return "absolutely-irreducible";
        case Verdict::reducible: return "reducible";
        default: return "inconclusive";
    }
}

struct IrreducibilityReport {
    Verdict verdict = Verdict::inconclusive;
    Rat confidence = Rat(0);  // heuristic section-count bound, never a proof
    int sections_tested = 0;
    std::vector<int> factor_counts;
    std::uint64_t seed = 0;
    std::uint64_t prime = 0;
};

inline Rat section_confidence(int agreeing) {
    return Rat(1) - Rat(Int(1), Int(1) << agreeing);
}

// Monte-Carlo absolute-irreducibility test: factor-count random plane
// sections mod a large prime and fold. Negative exponents are lifted by a
// monomial unit; positive monomial factors stay and count as components, so
// callers wanting verdicts on the torus normalize away units first. A section
// whose squarefree part lost degree is evidence of a repeated factor and
// blocks the irreducible verdict without fabricating a factor count.
inline IrreducibilityReport irreducibility_verdict(const Poly<Rat>& f, int sections,
                                                   std::uint64_t seed, std::uint64_t prime = 0,
                                                   ExecMode mode = default_exec_mode()) {
    if (sections < 5) throw InputError("need at least 5 sections");
    IrreducibilityReport rep;
    rep.seed = seed;
    if (f.is_zero()) {
        rep.verdict = Verdict::zero;
        rep.confidence = Rat(1);
        return rep;
    }
    if (laurent_normalize(f).core.total_degree() == 0) {
        rep.verdict = Verdict::monomial;
        rep.confidence = Rat(1);
        return rep;
    }
    Poly<Rat> core = f;
    std::vector<int> lift(f.ring()->size(), 0);
    bool lifted = false;
    for (int i = 0; i < f.ring()->size(); ++i) {
        int m = f.min_exponent(i);
        if (m < 0) lift[i] = -m, lifted = true;
    }
    if (lifted)
        core = f * Poly<Rat>::monomial(f.ring(), f.fctx(), lift, Rat(1));
    int d = static_cast<int>(core.total_degree());
    std::uint64_t bound =
        std::max<std::uint64_t>(1000003ULL, 2ULL * static_cast<std::uint64_t>(d) * (2 * d - 1) + 1);
    std::uint64_t q = prime == 0 ? next_prime_at_least(bound) : prime;
    if (!is_prime_u64(q) || q < bound)
        throw InputError("oracle prime must be a prime >= " + std::to_string(bound) +
                         " for degree " + std::to_string(d));
    rep.prime = q;
    rep.sections_tested = sections;

    auto outcomes = map_indexed<std::pair<int, bool>>(
        static_cast<std::size_t>(sections),
        [&](std::size_t k) {
            Poly<Fp> sec = plane_section(core, q, derive_seed(seed, k));
            Poly<Fp> sf = squarefree_part(sec);
            return std::make_pair(absolute_factor_count(sf), sf.total_degree() == d);
        },
        mode);

    int split = 0, clean = 0;
    for (const auto& [count, full_degree] : outcomes) {
        rep.factor_counts.push_back(count);
        if (count >= 2) ++split;
        if (full_degree) ++clean;
    }
    if (split == 0 && 2 * clean > sections) {
        rep.verdict = Verdict::absolutely_irreducible;
        rep.confidence = section_confidence(sections);
    } else if (2 * split > sections) {
        rep.verdict = Verdict::reducible;
        rep.confidence = section_confidence(split);
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.confidence = Rat(0);
    }
    return rep;
}

}  // namespace detlab
