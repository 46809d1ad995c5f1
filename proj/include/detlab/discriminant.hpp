#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detlab/lattice.hpp"
#include "detlab/oracle.hpp"
#include "detlab/parallel.hpp"
#include "detlab/poly.hpp"
#include "detlab/rng.hpp"
#include "detlab/upoly.hpp"

namespace detlab {

// ---------------------------------------------------------------------------
// symbolic instance: coefficient variables, torus variables, the restricted
// determinant G, and its image under the zero-sum substitution
// ---------------------------------------------------------------------------

struct DiscriminantInstance {
    LatticePointTuple tuple;
    RingPtr ring;                        // coefficient variables first, then x1..xn
    std::vector<std::vector<int>> cvar;  // cvar[i][j]: ring index of the coefficient of point j in set i
    std::vector<int> xvar;               // ring indices of the torus variables
    std::vector<int> origin;             // per set, point index of the origin
    PolyMatrix<Rat> mat;                 // n x n, column i = sum_a c_a x^a a
    Poly<Rat> g;                         // det of mat
    Poly<Rat> g_pi;                      // g with every origin coefficient eliminated
    std::vector<Poly<Rat>> f;            // f_A = sum_a c_a x^a

    int coeff_count() const {
        int c = 0;
        for (const auto& v : cvar) c += static_cast<int>(v.size());
        return c;
    }
};

inline std::string coeff_name(int set, const std::vector<int>& point) {
    std::string s = "c" + std::to_string(set + 1);
    for (int x : point) s += "_" + (x < 0 ? "m" + std::to_string(-x) : std::to_string(x));
    return s;
}

inline DiscriminantInstance build_instance(const LatticePointTuple& t) {
    validate_lattice_tuple(t);
    if (t.size() != t.ambient_rank)
        throw InputError("tuple must be square: " + std::to_string(t.size()) + " sets in rank " +
                         std::to_string(t.ambient_rank));
    int n = t.ambient_rank;

    DiscriminantInstance inst;
    inst.tuple = t;
    std::vector<std::string> names;
    inst.cvar.resize(t.size());
    inst.origin.assign(t.size(), -1);
    for (int i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < t.sets[i].size(); ++j) {
            inst.cvar[i].push_back(static_cast<int>(names.size()));
            names.push_back(coeff_name(i, t.sets[i][j]));
            if (is_origin(t.sets[i][j])) inst.origin[i] = static_cast<int>(j);
        }
    }
    for (int i = 0; i < n; ++i) {
        inst.xvar.push_back(static_cast<int>(names.size()));
        names.push_back("x" + std::to_string(i + 1));
    }
    inst.ring = make_ring(names);
    RatCtx ctx{};
    int nv = inst.ring->size();

    auto point_term = [&](int i, int j, const Rat& coef) {
        // coef * c_{ij} * x^{a_j}
        std::vector<int> e(nv, 0);
        e[inst.cvar[i][j]] = 1;
        const auto& pt = t.sets[i][j];
        for (int r = 0; r < n; ++r) e[inst.xvar[r]] = pt[r];
        return Poly<Rat>::monomial(inst.ring, ctx, std::move(e), coef);
    };

    inst.mat = PolyMatrix<Rat>(inst.ring, ctx, n, n);
    for (int i = 0; i < t.size(); ++i) {
        Poly<Rat> fa = Poly<Rat>::zero(inst.ring, ctx);
        for (std::size_t j = 0; j < t.sets[i].size(); ++j) {
            fa += point_term(i, static_cast<int>(j), Rat(1));
            for (int r = 0; r < n; ++r) {
                int a_r = t.sets[i][j][r];
                if (a_r != 0) inst.mat.at(r, i) += point_term(i, static_cast<int>(j), Rat(a_r));
            }
        }
        inst.f.push_back(std::move(fa));
    }
    inst.g = det_poly_matrix(inst.mat);

    // zero-sum substitution: each origin coefficient becomes minus the sum of
    // the other coefficients of its set
    std::map<std::string, Poly<Rat>> images;
    for (int v = 0; v < nv; ++v)
        images[inst.ring->names[v]] = Poly<Rat>::variable(inst.ring, ctx, v);
    for (int i = 0; i < t.size(); ++i) {
        Poly<Rat> img = Poly<Rat>::zero(inst.ring, ctx);
        for (std::size_t j = 0; j < t.sets[i].size(); ++j) {
            if (static_cast<int>(j) == inst.origin[i]) continue;
            img -= Poly<Rat>::variable(inst.ring, ctx, inst.cvar[i][j]);
        }
        images[inst.ring->names[inst.cvar[i][inst.origin[i]]]] = std::move(img);
    }
    if (inst.g.is_zero()) {
        inst.g_pi = inst.g;
    } else {
        auto parts = laurent_normalize(inst.g);
        Poly<Rat> unit = Poly<Rat>::monomial(inst.ring, ctx, parts.monomial, Rat(1));
        inst.g_pi = unit * specialize(parts.core, images);
    }
    return inst;
}

// ---------------------------------------------------------------------------
// finite-field sampling on the incidence variety: f_A(x) = 0 for all A and
// G(c, x) = 0, with x in the torus
// ---------------------------------------------------------------------------

struct ZPoint {
    std::vector<Fp> x;  // torus point, every coordinate nonzero
    std::vector<Fp> c;  // coefficients flattened set-major in point order
};

inline Poly<Fp> poly_mod_p(const Poly<Rat>& f, std::uint64_t p) {
    Poly<Fp> out(f.ring(), FpCtx{p});
    for (const auto& [e, coef] : f.terms()) out.add_term(e, rat_mod_p(coef, p));
    return out;
}

namespace discriminant_detail {

inline Fp power_signed(Fp base, int e) {
    return base.pow(static_cast<std::int64_t>(e));
}

// x^a over the torus coordinates of a full exponent vector
inline Fp torus_monomial(const std::vector<Fp>& x, const std::vector<int>& pt, std::uint64_t p) {
    Fp acc(1, p);
    for (std::size_t r = 0; r < x.size(); ++r)
        if (pt[r] != 0) acc = acc * power_signed(x[r], pt[r]);
    return acc;
}

}  // namespace discriminant_detail

// Draws x in the torus, solves the linear conditions f_A(x) = 0 for the
// coefficient subspace, and intersects a random line in that subspace with
// the hypersurface G = 0 by univariate root finding.
inline ZPoint sample_z_point(const DiscriminantInstance& inst, std::uint64_t p,
                             std::uint64_t seed) {
    if (!is_prime_u64(p)) throw InputError("sampling modulus must be prime");
    if (p < 1000003ULL) throw InputError("sampling prime must be at least 1000003");
    int n = inst.tuple.ambient_rank;
    int k = inst.tuple.size();
    int nc = inst.coeff_count();
    FpCtx ctx{p};
    Poly<Fp> g_p = poly_mod_p(inst.g, p);
    std::vector<Poly<Fp>> f_p;
    for (const auto& fa : inst.f) f_p.push_back(poly_mod_p(fa, p));

    for (int attempt = 0; attempt < 64; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<Fp> x;
        for (int i = 0; i < n; ++i) x.emplace_back(rng.fp_nonzero(p), p);

        // f_A(x) = 0 is linear homogeneous in c: row per set, column per coefficient
        Matrix<Fp> lin(k, nc, ctx);
        for (int i = 0; i < k; ++i)
            for (std::size_t j = 0; j < inst.tuple.sets[i].size(); ++j)
                lin.at(i, inst.cvar[i][static_cast<int>(j)]) =
                    discriminant_detail::torus_monomial(x, inst.tuple.sets[i][j], p);
        Matrix<Fp> ker = nullspace(lin);
        int kd = ker.rows();

        auto combo = [&]() {
            std::vector<Fp> c(nc, Fp(0, p));
            for (int r = 0; r < kd; ++r) {
                Fp w(rng.fp_elem(p), p);
                if (w.is_zero()) continue;
                for (int j = 0; j < nc; ++j) c[j] = c[j] + w * ker.at(r, j);
            }
            return c;
        };
        std::vector<Fp> c0 = combo(), c1 = combo();

        // restrict G to the line c(u) = c0 + u c1 as a univariate polynomial
        UPoly gu(p);
        for (const auto& [e, coef] : g_p.terms()) {
            UPoly term = UPoly::constant(p, coef.v);
            Fp scalar(1, p);
            for (int v = 0; v < inst.ring->size(); ++v) {
                if (e[v] == 0) continue;
                if (v < nc) {
                    UPoly lin_u(p, {c0[v].v, c1[v].v});
                    for (int rep = 0; rep < e[v]; ++rep) term = term * lin_u;
                } else {
                    scalar = scalar * discriminant_detail::power_signed(x[v - nc], e[v]);
                }
            }
            gu = gu + term.scaled(scalar.v);
        }

        std::vector<Fp> c;
        if (gu.is_zero()) {
            c = c0;  // the whole line lies inside the hypersurface
        } else if (gu.deg() < 1) {
            continue;  // nonzero constant: the line misses G = 0
        } else {
            auto roots = distinct_roots(gu, rng);
            if (roots.empty()) continue;
            Fp u(roots.front(), p);
            c.reserve(nc);
            for (int j = 0; j < nc; ++j) c.push_back(c0[j] + u * c1[j]);
        }

        std::vector<Fp> assign;
        assign.reserve(inst.ring->size());
        for (const auto& v : c) assign.push_back(v);
        for (const auto& v : x) assign.push_back(v);
        for (const auto& fpoly : f_p)
            if (!fpoly.evaluate(assign).is_zero())
                throw CheckFailure("sampled point violates a linear section condition");
        if (!g_p.evaluate(assign).is_zero())
            throw CheckFailure("sampled point violates the determinant condition");
        return ZPoint{std::move(x), std::move(c)};
    }
    throw MathError("no F_p root found on 64 sampled lines");
}

// ---------------------------------------------------------------------------
// tangent-space sampling for the codimension of the projected variety and the
// generic fiber dimension of the projection
// ---------------------------------------------------------------------------

struct CodimEstimate {
    int codim = -1;
    int fiber_dim = -1;
    std::map<std::pair<int, int>, int> votes;  // (codim, fiber) -> count
    int discarded = 0;                         // singular samples
    int trials = 0;
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;
};

inline CodimEstimate estimate_codim(const DiscriminantInstance& inst, std::uint64_t p, int trials,
                                    std::uint64_t seed, ExecMode mode = default_exec_mode()) {
    if (trials < 10) throw InputError("need at least 10 trials");
    if (!is_prime_u64(p)) throw InputError("sampling modulus must be prime");
    if (p < 1000003ULL) throw InputError("sampling prime must be at least 1000003");
    int k = inst.tuple.size();
    int nc = inst.coeff_count();
    int nv = inst.ring->size();

    // Jacobian rows: the k linear sections and G; columns: all variables
    std::vector<std::vector<Poly<Fp>>> jac;
    std::vector<Poly<Rat>> eqs = inst.f;
    eqs.push_back(inst.g);
    for (const auto& eq : eqs) {
        std::vector<Poly<Fp>> row;
        Poly<Fp> eq_p = poly_mod_p(eq, p);
        for (int v = 0; v < nv; ++v) row.push_back(partial_derivative(eq_p, v));
        jac.push_back(std::move(row));
    }

    auto outcomes = map_indexed<std::optional<std::pair<int, int>>>(
        static_cast<std::size_t>(trials),
        [&](std::size_t tr) -> std::optional<std::pair<int, int>> {
            ZPoint zp = sample_z_point(inst, p, derive_seed(seed, tr));
            std::vector<Fp> assign;
            assign.reserve(nv);
            for (const auto& v : zp.c) assign.push_back(v);
            for (const auto& v : zp.x) assign.push_back(v);
            Matrix<Fp> j(k + 1, nv, FpCtx{p});
            for (int r = 0; r <= k; ++r)
                for (int v = 0; v < nv; ++v) j.at(r, v) = jac[r][v].evaluate(assign);
            if (rank(j) < k + 1) return std::nullopt;  // singular sample
            Matrix<Fp> ker = nullspace(j);
            Matrix<Fp> proj(ker.rows(), nc, FpCtx{p});
            for (int r = 0; r < ker.rows(); ++r)
                for (int v = 0; v < nc; ++v) proj.at(r, v) = ker.at(r, v);
            int image_dim = rank(proj);
            return std::make_pair(nc - image_dim, ker.rows() - image_dim);
        },
        mode);

    CodimEstimate est;
    est.trials = trials;
    est.prime = p;
    est.seed = seed;
    for (const auto& o : outcomes) {
        if (!o)
            ++est.discarded;
        else
            ++est.votes[*o];
    }
    if (est.votes.empty()) throw MathError("every tangent sample was singular");
    auto best = est.votes.begin();
    for (auto it = est.votes.begin(); it != est.votes.end(); ++it)
        if (it->second > best->second) best = it;
    est.codim = best->first.first;
    est.fiber_dim = best->first.second;
    return est;
}

// ---------------------------------------------------------------------------
// univariate elimination: the classical discriminant for one set in Z^1
// ---------------------------------------------------------------------------

// Strips monomial and numeric content and normalizes the sign of the leading
// coefficient.
inline Poly<Rat> primitive_part(const Poly<Rat>& f) {
    if (f.is_zero()) return f;
    Poly<Rat> core = laurent_normalize(f).core;
    Int num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : core.terms()) {
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::numerator(c));
        den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
    }
    Rat scale(den_lcm, num_gcd);
    if (core.leading().second < 0) scale = -scale;
    return scale * core;
}

inline Poly<Rat> univariate_discriminant(const std::vector<int>& a_set) {
    if (a_set.empty()) throw InputError("empty point set");
    std::vector<int> pts = a_set;
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
        throw InputError("duplicate points in the set");
    int lo = pts.front(), hi = pts.back();
    int d = hi - lo;
    if (d > 8) throw InputError("degree exceeds 8");

    std::vector<std::string> names;
    for (int a : pts) names.push_back("c" + std::string(a < 0 ? "m" : "") + std::to_string(std::abs(a)));
    RingPtr ring = make_ring(names);
    RatCtx ctx{};
    if (d == 0) return Poly<Rat>::from_int(ring, ctx, 1);  // a monomial has no degenerate root

    // cleared coefficients: position e holds the variable for exponent e + lo
    std::vector<Poly<Rat>> fc(d + 1, Poly<Rat>::zero(ring, ctx));
    std::vector<Poly<Rat>> gc(d + 1, Poly<Rat>::zero(ring, ctx));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int e = pts[i] - lo;
        fc[e] = Poly<Rat>::variable(ring, ctx, static_cast<int>(i));
        gc[e] = Rat(e) * fc[e];  // torus derivative x f' scales each term by its exponent
    }

    // Sylvester matrix of f (degree d) and x f' (degree d)
    int m = d, nn = d;
    PolyMatrix<Rat> s(ring, ctx, m + nn, m + nn);
    for (int i = 0; i < nn; ++i)
        for (int tpow = 0; tpow <= m; ++tpow) s.at(i, i + tpow) = fc[m - tpow];
    for (int i = 0; i < m; ++i)
        for (int tpow = 0; tpow <= nn; ++tpow) s.at(nn + i, i + tpow) = gc[nn - tpow];
    Poly<Rat> res = det_poly_matrix_uncapped(s);
    if (res.is_zero()) return res;
    return primitive_part(res);
}

// ---------------------------------------------------------------------------
// end-to-end checks: the restricted determinant of a subspace tuple, and the
// discriminantal polynomial of a lattice tuple
// ---------------------------------------------------------------------------

// Builds the square matrix whose i-th column is a generic combination of a
// basis of the i-th subspace with fresh variables, then asks the oracle about
// its determinant.
inline IrreducibilityReport theorem_a_check(const SubspaceTuple<Rat>& s, int sections,
                                            std::uint64_t seed) {
    if (sections < 5) throw InputError("need at least 5 sections");
    if (s.size() != s.ambient)
        throw InputError("need n subspaces in ambient dimension n, got " +
                         std::to_string(s.size()) + " in " + std::to_string(s.ambient));
    int n = s.ambient;
    std::vector<std::string> names;
    std::vector<std::vector<int>> var_of(n);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < s.dim(i); ++r) {
            var_of[i].push_back(static_cast<int>(names.size()));
            names.push_back("y" + std::to_string(i + 1) + "_" + std::to_string(r + 1));
        }
    if (names.empty()) {
        // every subspace is zero; the determinant vanishes identically
        IrreducibilityReport rep;
        rep.verdict = Verdict::zero;
        rep.confidence = Rat(1);
        rep.seed = seed;
        return rep;
    }
    RingPtr ring = make_ring(names);
    RatCtx ctx{};
    PolyMatrix<Rat> m(ring, ctx, n, n);
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < s.dim(i); ++r) {
            Poly<Rat> y = Poly<Rat>::variable(ring, ctx, var_of[i][r]);
            for (int row = 0; row < n; ++row) {
                const Rat& b = s.subspaces[i].at(r, row);
                if (!FieldOf<Rat>::is_zero(b)) m.at(row, i) += b * y;
            }
        }
    Poly<Rat> det = det_poly_matrix(m);
    if (!det.is_zero()) {
        LaurentParts parts = laurent_normalize(det);
        if (parts.core.total_degree() == 0) {
            // The determinant is a single monomial. Entries are linear, so it is a
            // product of coordinate variables and factors exactly; the affine
            // hypersurface splits into hyperplanes and needs no sampling. This
            // happens for tuples such as a line beside the full plane.
            int distinct = 0, total = 0;
            for (int e : parts.monomial) {
                if (e > 0) ++distinct;
                total += e;
            }
            IrreducibilityReport rep;
            rep.seed = seed;
            rep.confidence = Rat(1);
            if (total == 0) rep.verdict = Verdict::monomial;
            else if (distinct == 1 && total == 1) rep.verdict = Verdict::absolutely_irreducible;
            else rep.verdict = Verdict::reducible;
            return rep;
        }
    }
    return irreducibility_verdict(det, sections, seed);
}

// Verifies the irreducible BK precondition on the spans, builds the instance,
// and asks the oracle about the unit-normalized discriminantal polynomial.
inline IrreducibilityReport theorem_b_check(const LatticePointTuple& t, int sections,
                                            std::uint64_t seed) {
    if (sections < 5) throw InputError("need at least 5 sections");
    SubspaceTuple<Rat> sp = spans(t);
    PredicateResult irr = is_irreducible(sp);
    if (!irr.ok)
        throw PreconditionFailure("irreducible", *irr.witness,
                                  "tuple is not irreducible: subtuple " + mask_str(*irr.witness) +
                                      " has defect <= 0");
    PredicateResult bk = is_bk(sp);
    if (!bk.ok)
        throw PreconditionFailure("bk", *bk.witness,
                                  "tuple is not BK: subtuple " + mask_str(*bk.witness) +
                                      " violates the defect conditions");
    DiscriminantInstance inst = build_instance(t);
    if (inst.g_pi.is_zero()) return irreducibility_verdict(inst.g_pi, sections, seed);
    return irreducibility_verdict(laurent_normalize(inst.g_pi).core, sections, seed);
}

// ---------------------------------------------------------------------------
// randomized genericity experiment for tuples of prescribed span dimensions
// ---------------------------------------------------------------------------

struct TupleExperiment {
    int trials = 0;
    int irreducible = 0;
    std::vector<std::pair<int, Mask>> failures;  // (trial index, witness subtuple)

    Rat fraction() const { return trials == 0 ? Rat(0) : Rat(Int(irreducible), Int(trials)); }
};

inline TupleExperiment random_tuple_experiment(const std::vector<int>& dims, int ambient,
                                               int trials, int bound, std::uint64_t seed,
                                               ExecMode mode = default_exec_mode()) {
    if (dims.empty()) throw InputError("need at least one prescribed dimension");
    if (static_cast<int>(dims.size()) > kExhaustiveCap)
        throw InputError("tuple length exceeds " + std::to_string(kExhaustiveCap));
    for (int d : dims) {
        if (d < 2) throw InputError("prescribed dimensions must be at least 2");
        if (d > ambient) throw InputError("prescribed dimension exceeds the ambient rank");
    }
    if (trials < 1) throw InputError("need at least one trial");
    if (bound < 1) throw InputError("entry bound must be positive");

    auto result = map_indexed<std::optional<Mask>>(
        static_cast<std::size_t>(trials),
        [&](std::size_t tr) -> std::optional<Mask> {
            Rng rng(derive_seed(seed, tr));
            std::vector<Matrix<Rat>> gens;
            for (int d : dims) {
                for (int spin = 0;; ++spin) {
                    if (spin >= 256) throw MathError("random generators keep collapsing in rank");
                    Matrix<Rat> g(d, ambient, RatCtx{});
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < ambient; ++j)
                            g.at(i, j) = Rat(rng.int_range(-bound, bound));
                    if (rank(g) == d) {
                        gens.push_back(std::move(g));
                        break;
                    }
                }
            }
            auto t = make_subspace_tuple(gens, ambient, RatCtx{});
            PredicateResult r = is_irreducible(t, ExecMode::serial);
            if (r.ok) return std::nullopt;
            return *r.witness;
        },
        mode);

    TupleExperiment exp;
    exp.trials = trials;
    for (std::size_t tr = 0; tr < result.size(); ++tr) {
        if (!result[tr])
            ++exp.irreducible;
        else
            exp.failures.emplace_back(static_cast<int>(tr), *result[tr]);
    }
    return exp;
}

}  // namespace detlab
