#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "detlab/matrix.hpp"
#include "detlab/normal_form.hpp"
#include "detlab/polymatroid.hpp"

namespace detlab {

// Tuple of finite integer point sets in Z^n; every set contains the origin
// and the points within a set are distinct.
struct LatticePointTuple {
    int ambient_rank = 0;                            // n
    std::vector<std::vector<std::vector<int>>> sets;  // sets[i][j] is a point in Z^n

    int size() const { return static_cast<int>(sets.size()); }
};

inline bool is_origin(const std::vector<int>& pt) {
    return std::all_of(pt.begin(), pt.end(), [](int x) { return x == 0; });
}

inline void validate_lattice_tuple(const LatticePointTuple& t) {
    if (t.ambient_rank <= 0) throw InputError("ambient rank must be positive");
    if (t.sets.empty()) throw InputError("tuple needs at least one point set");
    if (t.sets.size() > 32) throw InputError("tuple length exceeds 32");
    for (std::size_t i = 0; i < t.sets.size(); ++i) {
        const auto& a = t.sets[i];
        if (a.empty()) throw InputError("point set " + std::to_string(i) + " is empty");
        bool has_origin = false;
        std::set<std::vector<int>> seen;
        for (const auto& pt : a) {
            if (static_cast<int>(pt.size()) != t.ambient_rank)
                throw InputError("point dimension mismatch in set " + std::to_string(i));
            if (!seen.insert(pt).second)
                throw InputError("duplicate point in set " + std::to_string(i));
            if (is_origin(pt)) has_origin = true;
        }
        if (!has_origin) throw InputError("point set " + std::to_string(i) + " misses the origin");
    }
}

inline LatticePointTuple make_lattice_tuple(int ambient_rank,
                                            std::vector<std::vector<std::vector<int>>> sets) {
    LatticePointTuple t{ambient_rank, std::move(sets)};
    validate_lattice_tuple(t);
    return t;
}

// Per-set integer matrix whose columns are the points; the blocks assemble
// the direct-sum linear map from coefficient space to the matrix space.
struct TauBlock {
    std::vector<Matrix<Int>> blocks;  // blocks[i] is ambient_rank x |A_i|
};

inline TauBlock tau_blocks(const LatticePointTuple& t) {
    validate_lattice_tuple(t);
    TauBlock tb;
    tb.blocks.reserve(t.sets.size());
    for (const auto& a : t.sets) {
        Matrix<Int> m(t.ambient_rank, static_cast<int>(a.size()), IntCtx{});
        for (std::size_t j = 0; j < a.size(); ++j)
            for (int r = 0; r < t.ambient_rank; ++r) m.at(r, static_cast<int>(j)) = Int(a[j][r]);
        tb.blocks.push_back(std::move(m));
    }
    return tb;
}

inline Matrix<Rat> rational_matrix(const Matrix<Int>& m) {
    Matrix<Rat> out(m.rows(), m.cols(), RatCtx{});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = Rat(m.at(i, j));
    return out;
}

inline Matrix<Int> integer_matrix(const Matrix<Rat>& m) {
    Matrix<Int> out(m.rows(), m.cols(), IntCtx{});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Rat& x = m.at(i, j);
            if (boost::multiprecision::denominator(x) != 1)
                throw CheckFailure("matrix entry is not an integer");
            out.at(i, j) = boost::multiprecision::numerator(x);
        }
    return out;
}

template <class K>
Matrix<K> matrix_product(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
    Matrix<K> out(a.rows(), b.cols(), a.ctx());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (FieldOf<K>::is_zero(a.at(i, k))) continue;
            for (int j = 0; j < b.cols(); ++j)
                out.at(i, j) = out.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return out;
}

template <class K>
Matrix<K> matrix_inverse(const Matrix<K>& m) {
    if (m.rows() != m.cols()) throw InputError("inverse of a non-square matrix");
    int n = m.rows();
    Matrix<K> aug(n, 2 * n, m.ctx());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = FieldOf<K>::one(m.ctx());
    }
    std::vector<int> pivots = rref_in_place(aug);
    if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[n - 1] != n - 1))
        throw InputError("matrix is singular");
    Matrix<K> out(n, n, m.ctx());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

// Cofactor expansion; reserved for the small unimodularity checks.
inline Int integer_det(const Matrix<Int>& m) {
    if (m.rows() != m.cols()) throw InputError("det of a non-square matrix");
    int n = m.rows();
    if (n == 0) return Int(1);
    if (n == 1) return m.at(0, 0);
    Int acc(0);
    for (int j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        Matrix<Int> sub(n - 1, n - 1, IntCtx{});
        for (int i = 1; i < n; ++i) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = m.at(i, c);
            }
        }
        Int term = m.at(0, j) * integer_det(sub);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// Rational span of each point set; the span rank goes through the integer
// Hermite form, an independent route from the rational row reduction that
// make_subspace_tuple applies afterwards.
inline SubspaceTuple<Rat> spans(const LatticePointTuple& t) {
    validate_lattice_tuple(t);
    std::vector<Matrix<Rat>> gens;
    gens.reserve(t.sets.size());
    for (const auto& a : t.sets) {
        Matrix<Int> pts(static_cast<int>(a.size()), t.ambient_rank, IntCtx{});
        for (std::size_t j = 0; j < a.size(); ++j)
            for (int c = 0; c < t.ambient_rank; ++c) pts.at(static_cast<int>(j), c) = Int(a[j][c]);
        Matrix<Int> h = row_hnf(pts);
        int r = 0;
        while (r < h.rows()) {
            bool zero = true;
            for (int c = 0; c < h.cols(); ++c)
                if (h.at(r, c) != 0) zero = false;
            if (zero) break;
            ++r;
        }
        Matrix<Rat> basis(r, t.ambient_rank, RatCtx{});
        for (int i = 0; i < r; ++i)
            for (int c = 0; c < t.ambient_rank; ++c) basis.at(i, c) = Rat(h.at(i, c));
        gens.push_back(std::move(basis));
    }
    return make_subspace_tuple(gens, t.ambient_rank, RatCtx{});
}

// Outcome of the simplex-equivalence search: either a lattice automorphism U
// with per-set shifts mapping every set into {0, e_1, ..., e_n}, or evidence
// that every base-point choice was refuted.
struct TupleClassification {
    enum class Kind { lir, nir };
    Kind kind = Kind::nir;
    Matrix<Int> witness_u;                 // lir only: n x n, det +-1
    std::vector<std::vector<int>> shifts;  // lir only: the base point of each set
    long long refuted_choices = 0;         // nir only: base-point choices examined
};

inline bool is_unit_or_zero(const std::vector<Int>& v) {
    int ones = 0;
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x == 1)
            ++ones;
        else
            return false;
    }
    return ones <= 1;
}

namespace lattice_detail {

// W = L^-1 . blockdiag(R^-1, I); its first c columns are the difference
// vectors, the rest complete them to a lattice basis, so U = W^-1 maps the
// differences to distinct standard basis vectors.
inline Matrix<Int> completion_inverse(const Matrix<Int>& diffs_cols, const NormalForms& nf) {
    int n = diffs_cols.rows(), c = diffs_cols.cols();
    Matrix<Rat> linv = matrix_inverse(rational_matrix(nf.left));
    Matrix<Rat> rinv = matrix_inverse(rational_matrix(nf.right));
    Matrix<Rat> block(n, n, RatCtx{});
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < c; ++j) block.at(i, j) = rinv.at(i, j);
    for (int i = c; i < n; ++i) block.at(i, i) = Rat(1);
    Matrix<Rat> w = matrix_product(linv, block);
    return integer_matrix(matrix_inverse(w));
}

}  // namespace lattice_detail

// Searches base points b_i in A_i whose pooled nonzero differences form a
// basis of a direct summand; a success certifies equivalence to a tuple of
// shifted standard simplices under the returned automorphism.
inline TupleClassification classify_lir(const LatticePointTuple& t) {
    validate_lattice_tuple(t);
    int n = t.ambient_rank;
    if (n > 6) throw InputError("lir search limited to ambient rank 6");
    for (const auto& a : t.sets)
        if (a.size() > 12) throw InputError("lir search limited to sets of 12 points");

    int k = t.size();
    std::vector<std::size_t> base(k, 0);
    TupleClassification out;
    while (true) {
        // pooled distinct nonzero differences for this base choice, in
        // first-encounter order so simplex tuples map back via the identity
        std::vector<std::vector<int>> diffs;
        std::set<std::vector<int>> seen;
        for (int i = 0; i < k; ++i) {
            const auto& b = t.sets[i][base[i]];
            for (const auto& pt : t.sets[i]) {
                std::vector<int> d(n);
                for (int c = 0; c < n; ++c) d[c] = pt[c] - b[c];
                if (!is_origin(d) && seen.insert(d).second) diffs.push_back(std::move(d));
            }
        }
        bool ok = static_cast<int>(diffs.size()) <= n;
        if (ok && !diffs.empty()) {
            int c = static_cast<int>(diffs.size());
            Matrix<Int> m(n, c, IntCtx{});
            int j = 0;
            for (const auto& d : diffs) {
                for (int r = 0; r < n; ++r) m.at(r, j) = Int(d[r]);
                ++j;
            }
            if (rank(rational_matrix(m)) < c) {
                ok = false;
            } else {
                NormalForms nf = hermite_smith(m);
                for (int i = 0; i < c; ++i)
                    if (!(i < static_cast<int>(nf.snf.size()) &&
                          (nf.snf[i] == 1 || nf.snf[i] == -1)))
                        ok = false;
                if (ok) {
                    Matrix<Int> u = lattice_detail::completion_inverse(m, nf);
                    Int det = integer_det(u);
                    if (det != 1 && det != -1)
                        throw CheckFailure("completed basis inverse is not unimodular");
                    // re-check the witness on every accepted choice
                    for (int i = 0; i < k; ++i) {
                        const auto& b = t.sets[i][base[i]];
                        for (const auto& pt : t.sets[i]) {
                            std::vector<Int> img(n, Int(0));
                            for (int r = 0; r < n; ++r)
                                for (int cc = 0; cc < n; ++cc)
                                    img[r] += u.at(r, cc) * Int(pt[cc] - b[cc]);
                            if (!is_unit_or_zero(img))
                                throw CheckFailure("lir witness fails to map into the simplex");
                        }
                    }
                    out.kind = TupleClassification::Kind::lir;
                    out.witness_u = u;
                    for (int i = 0; i < k; ++i) out.shifts.push_back(t.sets[i][base[i]]);
                    return out;
                }
            }
        }
        if (ok && diffs.empty()) {
            // every set is a single point: already a (degenerate) simplex tuple
            out.kind = TupleClassification::Kind::lir;
            out.witness_u = Matrix<Int>::identity(n, IntCtx{});
            for (int i = 0; i < k; ++i) out.shifts.push_back(t.sets[i][base[i]]);
            return out;
        }
        ++out.refuted_choices;
        int i = 0;
        while (i < k && ++base[i] == t.sets[i].size()) base[i++] = 0;
        if (i == k) break;
    }
    out.kind = TupleClassification::Kind::nir;
    return out;
}

}  // namespace detlab
