#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "detlab/polymatroid.hpp"
#include "detlab/rng.hpp"

namespace detlab {

// Reduction of a rational tuple to a prime field, rejecting primes that
// degenerate any basis (rank drop mod p changes the combinatorics).
inline SubspaceTuple<Fp> tuple_mod_p(const SubspaceTuple<Rat>& t, std::uint64_t p) {
    std::vector<Matrix<Fp>> gens;
    gens.reserve(t.subspaces.size());
    for (const auto& b : t.subspaces) {
        auto r = reduce_mod_p(b, p);
        if (rank(r) != b.rows()) throw InputError("subspace basis degenerates modulo p");
        gens.push_back(std::move(r));
    }
    return make_subspace_tuple(gens, t.ambient, FpCtx{p});
}

template <class K>
SubspaceTuple<K> tuple_of(const DualRealization<K>& d) {
    SubspaceTuple<K> t{d.ambient, d.fctx, d.primal};
    return t;
}

// Membership set {i : x annihilates L_i}, which is always closed for subspace
// tuples; the closure recomputation is the checked invariant.
template <class K>
Flat classify_point(const DualRealization<K>& d, const std::vector<K>& x) {
    if (static_cast<int>(x.size()) != d.ambient) throw InputError("dual vector has wrong length");
    Mask I = 0;
    for (std::size_t i = 0; i < d.primal.size(); ++i) {
        const auto& b = d.primal[i];
        bool annihilates = true;
        for (int r = 0; r < b.rows(); ++r) {
            if (!FieldOf<K>::is_zero(vec_dot(b.row(r), x, d.fctx))) {
                annihilates = false;
                break;
            }
        }
        if (annihilates) I |= Mask{1} << i;
    }
    auto t = tuple_of(d);
    if (closure(t, I) != I)
        throw CheckFailure("membership set " + mask_str(I) + " is not closed");
    int rk = rank_of(t, I);
    return Flat{I, rk, rk - std::popcount(I), mask_members(I)};
}

struct StratumSample {
    std::vector<std::vector<Fp>> points;  // hits, in trial order
    long long trials = 0;
    long long hits = 0;
    double hit_rate = 0.0;
    std::uint64_t p = 0;
    std::uint64_t seed = 0;
    std::string diagnostic;  // nonempty only when no trial landed in the stratum
};

// Uniform points of the annihilator of the flat's span, filtered to those whose
// membership set is exactly the flat. Trials use independently derived seeds so
// serial and parallel runs agree bit for bit.
inline StratumSample sample_stratum(const DualRealization<Fp>& d, const Flat& f, std::uint64_t p,
                                    long long trials, std::uint64_t seed,
                                    ExecMode mode = default_exec_mode()) {
    if (p < 10007) throw InputError("sampling prime must be at least 10007");
    if (!is_prime_u64(p)) throw InputError("sampling modulus is not prime");
    if (trials <= 0) throw InputError("trials must be positive");
    auto t = tuple_of(d);
    if (closure(t, f.mask) != f.mask) throw InputError("sample_stratum: mask is not a flat");

    std::vector<Matrix<Fp>> parts;
    for (int i : mask_members(f.mask)) parts.push_back(d.primal[i]);
    Matrix<Fp> stacked = vstack(std::span<const Matrix<Fp>>(parts), d.ambient, d.fctx);
    Matrix<Fp> perp = nullspace(stacked);  // basis of the flat's annihilator

    struct Draw {
        std::vector<Fp> point;
        bool hit = false;
    };
    auto draws = map_indexed<Draw>(
        static_cast<std::size_t>(trials),
        [&](std::size_t idx) {
            Rng rng(derive_seed(seed, idx));
            std::vector<Fp> x(d.ambient, Fp(0, p));
            for (int r = 0; r < perp.rows(); ++r) {
                Fp c(rng.fp_elem(p), p);
                for (int j = 0; j < d.ambient; ++j) x[j] = x[j] + c * perp.at(r, j);
            }
            Draw out;
            out.hit = classify_point(d, x).mask == f.mask;
            if (out.hit) out.point = std::move(x);
            return out;
        },
        mode);

    StratumSample s;
    s.trials = trials;
    s.p = p;
    s.seed = seed;
    for (auto& dr : draws) {
        if (!dr.hit) continue;
        ++s.hits;
        s.points.push_back(std::move(dr.point));
    }
    s.hit_rate = static_cast<double>(s.hits) / static_cast<double>(trials);
    if (s.hits == 0)
        s.diagnostic = "no sample landed in stratum " + mask_str(f.mask) +
                       "; containment coincidences mod " + std::to_string(p) +
                       " are possible, retry with a larger prime";
    return s;
}

inline StratumSample sample_stratum(const DualRealization<Rat>& d, const Flat& f, std::uint64_t p,
                                    long long trials, std::uint64_t seed,
                                    ExecMode mode = default_exec_mode()) {
    SubspaceTuple<Rat> t{d.ambient, d.fctx, d.primal};
    auto tp = tuple_mod_p(t, p);
    return sample_stratum(dual_realization(tp), f, p, trials, seed, mode);
}

// Sum of dim(ker x ∩ L_i), each term through an explicit subspace
// intersection, checked against the closed-form count dim L - m + |F|.
template <class K>
int fiber_dimension(const SubspaceTuple<K>& t, const std::vector<K>& x) {
    if (static_cast<int>(x.size()) != t.ambient) throw InputError("dual vector has wrong length");
    if (is_zero_vec(x)) throw InputError("fiber dimension needs a nonzero functional");
    Matrix<K> lmat(1, t.ambient, t.fctx);
    for (int j = 0; j < t.ambient; ++j) lmat.at(0, j) = x[j];
    Matrix<K> kerx = nullspace(lmat);
    int total = 0;
    for (const auto& b : t.subspaces) {
        auto inter = subspace_intersection(b, kerx);
        total += inter.rows();
    }
    Flat f = classify_point(dual_realization(t), x);
    int expected = t.dim_sum() - t.size() + std::popcount(f.mask);
    if (total != expected)
        throw CheckFailure("fiber dimension " + std::to_string(total) + " disagrees with " +
                           std::to_string(expected) + " at flat " + mask_str(f.mask));
    return total;
}

struct StratumRow {
    Mask flat = 0;
    int rank = 0;
    int defect = 0;
    int dim_bf = 0;      // dimension of the stratum base, computed by intersecting annihilators
    int fiber_rank = 0;  // rank of the bundle over the stratum
    int dim_qf = 0;      // total space dimension
};

struct StratumTable {
    int ambient = 0;
    int size = 0;       // tuple length m
    int dim_total = 0;  // sum of the subspace dimensions
    std::vector<StratumRow> rows;  // one per flat, ordered by (popcount, mask)
};

// Dimension bookkeeping per proper flat. dim_bf is computed by an explicit
// intersection of annihilators; the row identity
//   dim_qf = dim_total - defect + (ambient - m)
// cross-checks it against the rank table. For tuples with m = ambient the
// correction term vanishes.
template <class K>
StratumTable stratum_dimensions(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    auto lat = flats_lattice(t, mode);
    auto d = dual_realization(t);
    StratumTable table;
    table.ambient = t.ambient;
    table.size = t.size();
    table.dim_total = t.dim_sum();
    for (const auto& f : lat.flats) {
        StratumRow row;
        row.flat = f.mask;
        row.rank = f.rank;
        row.defect = f.defect;
        std::vector<Matrix<K>> parts;
        for (int i : f.members) parts.push_back(d.perp[i]);
        auto inter = subspace_intersection(std::span<const Matrix<K>>(parts), t.ambient, t.fctx);
        row.dim_bf = inter.rows();
        row.fiber_rank = table.dim_total - table.size + std::popcount(f.mask);
        row.dim_qf = row.dim_bf + row.fiber_rank;
        int expected = table.dim_total - row.defect + (table.ambient - table.size);
        if (row.dim_qf != expected)
            throw CheckFailure("stratum dimension " + std::to_string(row.dim_qf) +
                               " disagrees with " + std::to_string(expected) + " at flat " +
                               mask_str(f.mask));
        table.rows.push_back(row);
    }
    return table;
}

struct ProjectionRow {
    Mask flat = 0;
    int dim_qf = 0;
    int proj_bound = 0;  // projected image dimension is at most dim_qf - 1
    int defect = 0;
    bool candidate = false;  // the unique stratum that can reach codimension one
};

struct ProjectionReport {
    int dim_total = 0;
    Mask candidate_flat = 0;
    int candidate_bound = 0;
    std::vector<ProjectionRow> rows;  // ordered by bound, largest first
};

// Every stratum over a nonempty flat projects with a dimension drop, so only
// the closure of the empty set can contribute a codimension-one component.
template <class K>
ProjectionReport strata_projection_bound(const SubspaceTuple<K>& t,
                                         ExecMode mode = default_exec_mode()) {
    auto irr = is_irreducible(t, mode);
    if (!irr.ok)
        throw PreconditionFailure("irreducible", *irr.witness,
                                  "tuple is not irreducible: subset " + mask_str(*irr.witness) +
                                      " has defect <= 0");
    auto bk = is_bk(t, mode);
    if (!bk.ok)
        throw PreconditionFailure("bk", *bk.witness,
                                  "tuple is not a zero-total-defect tuple: witness " +
                                      mask_str(*bk.witness));
    auto table = stratum_dimensions(t, mode);
    ProjectionReport rep;
    rep.dim_total = table.dim_total;
    Mask bottom = closure(t, Mask{0});
    Mask full = t.full_mask();
    // Only proper flats index strata of the nonzero dual space.
    for (const auto& r : table.rows) {
        if (r.flat == full) continue;
        ProjectionRow row;
        row.flat = r.flat;
        row.dim_qf = r.dim_qf;
        row.proj_bound = r.dim_qf - 1;
        row.defect = r.defect;
        row.candidate = r.flat == bottom;
        if (r.flat != 0 && !row.candidate) {
            if (!(row.proj_bound < rep.dim_total - 1))
                throw CheckFailure("stratum " + mask_str(r.flat) +
                                   " is not forced below codimension one");
        }
        if (row.candidate) {
            rep.candidate_flat = row.flat;
            rep.candidate_bound = row.proj_bound;
        }
        rep.rows.push_back(row);
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const ProjectionRow& a, const ProjectionRow& b) {
        if (a.proj_bound != b.proj_bound) return a.proj_bound > b.proj_bound;
        if (std::popcount(a.flat) != std::popcount(b.flat))
            return std::popcount(a.flat) < std::popcount(b.flat);
        return a.flat < b.flat;
    });
    return rep;
}

}  // namespace detlab
