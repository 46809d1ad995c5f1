#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detlab/matrix.hpp"
#include "detlab/parallel.hpp"

namespace detlab {

using Mask = std::uint32_t;

constexpr int kExhaustiveCap = 20;  // subset enumeration bound for the predicates
constexpr int kFlatsCap = 16;       // bound for lattice-of-flats construction

inline std::vector<int> mask_members(Mask m) {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (m & (Mask{1} << i)) out.push_back(i);
    return out;
}

// 1-based set notation for reports, e.g. {1,3}
inline std::string mask_str(Mask m) {
    std::string s = "{";
    bool first = true;
    for (int i : mask_members(m)) {
        if (!first) s += ",";
        s += std::to_string(i + 1);
        first = false;
    }
    return s + "}";
}

template <class K>
struct SubspaceTuple {
    int ambient = 0;
    typename FieldOf<K>::Ctx fctx{};
    std::vector<Matrix<K>> subspaces;  // canonical RREF bases, rows independent

    int size() const { return static_cast<int>(subspaces.size()); }
    int dim(int i) const { return subspaces[i].rows(); }
    int dim_sum() const {
        int s = 0;
        for (const auto& b : subspaces) s += b.rows();
        return s;
    }
    Mask full_mask() const { return size() == 32 ? ~Mask{0} : (Mask{1} << size()) - 1; }
};

// Normalizes each generator matrix to its canonical row basis.
template <class K>
SubspaceTuple<K> make_subspace_tuple(const std::vector<Matrix<K>>& gens, int ambient,
                                     typename FieldOf<K>::Ctx fctx) {
    if (ambient < 0) throw InputError("ambient dimension must be nonnegative");
    if (gens.size() > 32) throw InputError("tuple length exceeds 32");
    SubspaceTuple<K> t{ambient, fctx, {}};
    t.subspaces.reserve(gens.size());
    for (const auto& g : gens) {
        if (g.cols() != ambient) throw InputError("subspace generators do not match ambient dimension");
        t.subspaces.push_back(row_basis(g));
    }
    return t;
}

template <class K>
int rank_of(const SubspaceTuple<K>& t, Mask I) {
    std::vector<Matrix<K>> parts;
    for (int i : mask_members(I)) {
        if (i >= t.size()) throw InputError("subset index out of range");
        parts.push_back(t.subspaces[i]);
    }
    Matrix<K> stacked = vstack(std::span<const Matrix<K>>(parts), t.ambient, t.fctx);
    return rank(stacked);
}

template <class K>
int defect_of(const SubspaceTuple<K>& t, Mask I) {
    return rank_of(t, I) - std::popcount(I);
}

// All 2^m subset ranks; the per-mask computations are independent, which makes
// this the canonical parallel kernel.
template <class K>
std::vector<std::uint8_t> rank_table(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    int m = t.size();
    if (m > kExhaustiveCap) throw InputError("exhaustive check infeasible: ground set exceeds 20");
    std::size_t n = std::size_t{1} << m;
    return map_indexed<std::uint8_t>(
        n, [&](std::size_t mask) { return static_cast<std::uint8_t>(rank_of(t, static_cast<Mask>(mask))); },
        mode);
}

struct Flat {
    Mask mask = 0;
    int rank = 0;
    int defect = 0;
    std::vector<int> members;  // 0-based, sorted
};

struct FlatLattice {
    std::vector<Flat> flats;                    // sorted by (popcount, mask)
    std::vector<std::pair<int, int>> order;     // (i, j) whenever flats[i].mask strictly contains in flats[j].mask
    int bottom = -1;                            // index of closure(empty)
    int top = -1;                               // index of closure(ground set)
};

struct PredicateResult {
    bool ok = false;
    std::optional<Mask> witness;
};

// A tuple-shaped hypothesis (irreducibility, BK) failed; carries the subset
// that violates it so callers can report a checkable rejection.
struct PreconditionFailure : std::runtime_error {
    std::string check;
    Mask witness;
    PreconditionFailure(std::string check_, Mask witness_, const std::string& msg)
        : std::runtime_error(msg), check(std::move(check_)), witness(witness_) {}
};

inline Mask closure_from_table(const std::vector<std::uint8_t>& table, int m, Mask I) {
    Mask cl = I;
    for (int j = 0; j < m; ++j) {
        if (I & (Mask{1} << j)) continue;
        if (table[I | (Mask{1} << j)] == table[I]) cl |= Mask{1} << j;
    }
    return cl;
}

template <class K>
Mask closure(const SubspaceTuple<K>& t, Mask I) {
    int base = rank_of(t, I);
    Mask cl = I;
    for (int j = 0; j < t.size(); ++j) {
        if (I & (Mask{1} << j)) continue;
        if (rank_of(t, I | (Mask{1} << j)) == base) cl |= Mask{1} << j;
    }
    return cl;
}

// Scan order gives the canonical witness: smallest cardinality, then smallest mask.
inline std::optional<Mask> first_mask_where(int m, bool proper_nonempty,
                                            const std::vector<std::uint8_t>& table,
                                            int lo_card, int hi_card,
                                            auto&& pred) {
    Mask full = (Mask{1} << m) - 1;
    for (int card = lo_card; card <= hi_card; ++card) {
        for (Mask mask = 0; mask <= full; ++mask) {
            if (std::popcount(mask) != card) continue;
            if (proper_nonempty && (mask == 0 || mask == full)) continue;
            if (pred(mask, table[mask])) return mask;
        }
    }
    return std::nullopt;
}

// Every nonempty proper subtuple must have strictly positive defect.
template <class K>
PredicateResult is_irreducible(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    int m = t.size();
    if (m > kExhaustiveCap) throw InputError("exhaustive check infeasible: ground set exceeds 20");
    if (m <= 1) return {true, std::nullopt};
    auto table = rank_table(t, mode);
    auto w = first_mask_where(m, true, table, 1, m - 1,
                              [](Mask mask, int r) { return r - std::popcount(mask) <= 0; });
    if (w) return {false, w};
    return {true, std::nullopt};
}

// Total defect zero and no subset of negative defect.
template <class K>
PredicateResult is_bk(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    int m = t.size();
    if (m > kExhaustiveCap) throw InputError("exhaustive check infeasible: ground set exceeds 20");
    auto table = rank_table(t, mode);
    Mask full = t.full_mask();
    auto w = first_mask_where(m, false, table, 1, m,
                              [](Mask mask, int r) { return r - std::popcount(mask) < 0; });
    if (w) return {false, w};
    if (table[full] != m) return {false, full};
    return {true, std::nullopt};
}

template <class K>
FlatLattice flats_lattice(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    int m = t.size();
    if (m > kFlatsCap) throw InputError("flats enumeration infeasible: ground set exceeds 16");
    auto table = rank_table(t, mode);
    Mask full = t.full_mask();
    std::vector<Flat> flats;
    for (int card = 0; card <= m; ++card) {
        for (Mask mask = 0; mask <= full; ++mask) {
            if (std::popcount(mask) != card) continue;
            if (closure_from_table(table, m, mask) != mask) continue;
            flats.push_back(Flat{mask, table[mask], table[mask] - card, mask_members(mask)});
        }
    }
    FlatLattice lat;
    lat.flats = std::move(flats);
    for (std::size_t i = 0; i < lat.flats.size(); ++i) {
        Mask a = lat.flats[i].mask;
        if (a == closure_from_table(table, m, Mask{0})) lat.bottom = static_cast<int>(i);
        if (a == full) lat.top = static_cast<int>(i);
        for (std::size_t j = 0; j < lat.flats.size(); ++j) {
            Mask b = lat.flats[j].mask;
            if (a != b && (a & b) == a) lat.order.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    // flats are closed under intersection; violation means a defect in closure
    for (std::size_t i = 0; i < lat.flats.size(); ++i)
        for (std::size_t j = i + 1; j < lat.flats.size(); ++j) {
            Mask meet = lat.flats[i].mask & lat.flats[j].mask;
            bool found = false;
            for (const auto& f : lat.flats)
                if (f.mask == meet) {
                    found = true;
                    break;
                }
            if (!found)
                throw CheckFailure("flats not closed under intersection: " + mask_str(meet));
        }
    return lat;
}

template <class K>
struct DualRealization {
    int ambient = 0;
    typename FieldOf<K>::Ctx fctx{};
    std::vector<Matrix<K>> perp;    // basis of the annihilator of each subspace
    std::vector<Matrix<K>> primal;  // copies of the normalized primal bases
};

template <class K>
DualRealization<K> dual_realization(const SubspaceTuple<K>& t) {
    DualRealization<K> d{t.ambient, t.fctx, {}, t.subspaces};
    d.perp.reserve(t.subspaces.size());
    for (const auto& b : t.subspaces) d.perp.push_back(nullspace(b));
    return d;
}

struct DualEqualityReport {
    long long checked = 0;
    std::vector<Mask> violations;
};

// rank_I(primal) must equal codim of the intersection of the annihilators.
// The right side goes through subspace_intersection on the dual bases, a
// genuinely different composite path than the rank oracle.
template <class K>
DualEqualityReport verify_dual_equality(const SubspaceTuple<K>& t, ExecMode mode = default_exec_mode()) {
    int m = t.size();
    if (m > kFlatsCap) throw InputError("dual equality sweep infeasible: ground set exceeds 16");
    auto d = dual_realization(t);
    auto table = rank_table(t, mode);
    Mask full = t.full_mask();
    DualEqualityReport rep;
    std::vector<std::uint8_t> results = map_indexed<std::uint8_t>(
        static_cast<std::size_t>(full) + 1,
        [&](std::size_t mask) -> std::uint8_t {
            std::vector<Matrix<K>> parts;
            for (int i : mask_members(static_cast<Mask>(mask))) parts.push_back(d.perp[i]);
            Matrix<K> inter =
                subspace_intersection(std::span<const Matrix<K>>(parts), t.ambient, t.fctx);
            int dual_rank = t.ambient - inter.rows();
            return dual_rank == table[mask] ? 1 : 0;
        },
        mode);
    for (std::size_t mask = 0; mask < results.size(); ++mask) {
        ++rep.checked;
        if (!results[mask]) rep.violations.push_back(static_cast<Mask>(mask));
    }
    return rep;
}

}  // namespace detlab
