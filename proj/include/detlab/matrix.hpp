#pragma once

#include <optional>
#include <span>
#include <vector>

#include "detlab/field.hpp"

namespace detlab {

template <class K>
class Matrix {
public:
    using Ctx = typename FieldOf<K>::Ctx;

    Matrix() = default;
    Matrix(int rows, int cols, Ctx ctx)
        : rows_(rows),
          cols_(cols),
          ctx_(ctx),
          a_(static_cast<std::size_t>(rows) * cols, FieldOf<K>::zero(ctx)) {}

    static Matrix identity(int n, Ctx ctx) {
        Matrix m(n, n, ctx);
        for (int i = 0; i < n; ++i) m.at(i, i) = FieldOf<K>::one(ctx);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<K>>& rows, int cols, Ctx ctx) {
        Matrix m(static_cast<int>(rows.size()), cols, ctx);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(rows[i].size()) != cols)
                throw InputError("row length mismatch building matrix");
            for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Ctx ctx() const { return ctx_; }

    K& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const K& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<K> row(int i) const {
        std::vector<K> r;
        r.reserve(cols_);
        for (int j = 0; j < cols_; ++j) r.push_back(at(i, j));
        return r;
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && ctx_ == o.ctx_ && a_ == o.a_;
    }

private:
    int rows_ = 0, cols_ = 0;
    Ctx ctx_{};
    std::vector<K> a_;
};

template <class K>
Matrix<K> vstack(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.cols() != b.cols()) throw InputError("vstack: column mismatch");
    Matrix<K> m(a.rows() + b.rows(), a.cols(), a.ctx());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
    return m;
}

template <class K>
Matrix<K> vstack(std::span<const Matrix<K>> parts, int cols, typename FieldOf<K>::Ctx ctx) {
    int rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != cols) throw InputError("vstack: column mismatch");
        rows += p.rows();
    }
    Matrix<K> m(rows, cols, ctx);
    int r = 0;
    for (const auto& p : parts) {
        for (int i = 0; i < p.rows(); ++i, ++r)
            for (int j = 0; j < cols; ++j) m.at(r, j) = p.at(i, j);
    }
    return m;
}

template <class K>
Matrix<K> transpose(const Matrix<K>& a) {
    Matrix<K> m(a.cols(), a.rows(), a.ctx());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m.at(j, i) = a.at(i, j);
    return m;
}

template <class K>
Matrix<K> matmul(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.cols() != b.rows()) throw InputError("matmul: shape mismatch");
    Matrix<K> m(a.rows(), b.cols(), a.ctx());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (FieldOf<K>::is_zero(a.at(i, k))) continue;
            for (int j = 0; j < b.cols(); ++j) m.at(i, j) = m.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return m;
}

template <class K>
std::vector<K> matvec(const Matrix<K>& a, const std::vector<K>& x) {
    if (a.cols() != static_cast<int>(x.size())) throw InputError("matvec: shape mismatch");
    std::vector<K> y(a.rows(), FieldOf<K>::zero(a.ctx()));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) y[i] = y[i] + a.at(i, j) * x[j];
    return y;
}

template <class K>
K vec_dot(const std::vector<K>& a, const std::vector<K>& b, typename FieldOf<K>::Ctx ctx) {
    if (a.size() != b.size()) throw InputError("vec_dot: length mismatch");
    K s = FieldOf<K>::zero(ctx);
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

// Gauss-Jordan over a field; returns pivot columns. Deterministic: first
// nonzero entry is the pivot.
template <class K>
std::vector<int> rref_in_place(Matrix<K>& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int j = 0; j < m.cols() && r < m.rows(); ++j) {
        int pr = -1;
        for (int i = r; i < m.rows(); ++i) {
            if (!FieldOf<K>::is_zero(m.at(i, j))) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        m.swap_rows(r, pr);
        K inv = FieldOf<K>::inv(m.at(r, j));
        for (int c = j; c < m.cols(); ++c) m.at(r, c) = m.at(r, c) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || FieldOf<K>::is_zero(m.at(i, j))) continue;
            K f = m.at(i, j);
            for (int c = j; c < m.cols(); ++c) m.at(i, c) = m.at(i, c) - f * m.at(r, c);
        }
        pivots.push_back(j);
        ++r;
    }
    return pivots;
}

// Fraction-free (Bareiss) elimination over the integers; exact divisions only.
inline int bareiss_rank(Matrix<Int> m) {
    int rank = 0;
    Int prev = 1;
    int rows = m.rows(), cols = m.cols();
    for (int k = 0; rank < rows && k < cols; ++k) {
        int pr = -1;
        for (int i = rank; i < rows; ++i) {
            if (m.at(i, k) != 0) {
                pr = i;
                break;
            }
        }
        if (pr < 0) continue;
        m.swap_rows(rank, pr);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = k + 1; j < cols; ++j) {
                Int t = m.at(i, j) * m.at(rank, k) - m.at(i, k) * m.at(rank, j);
                m.at(i, j) = t / prev;  // exact by the Sylvester identity
            }
            m.at(i, k) = 0;
        }
        prev = m.at(rank, k);
        ++rank;
    }
    return rank;
}

inline Int bareiss_det(Matrix<Int> m) {
    if (m.rows() != m.cols()) throw InputError("det: matrix not square");
    int n = m.rows();
    if (n == 0) return Int(1);
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        int pr = -1;
        for (int i = k; i < n; ++i) {
            if (m.at(i, k) != 0) {
                pr = i;
                break;
            }
        }
        if (pr < 0) return Int(0);
        if (pr != k) {
            m.swap_rows(k, pr);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = t / prev;
            }
            m.at(i, k) = 0;
        }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

// Clears denominators row by row; preserves row space and kernel.
inline Matrix<Int> int_rows_cleared(const Matrix<Rat>& m) {
    Matrix<Int> out(m.rows(), m.cols(), IntCtx{});
    for (int i = 0; i < m.rows(); ++i) {
        Int l = 1;
        for (int j = 0; j < m.cols(); ++j) l = boost::multiprecision::lcm(l, rat_den(m.at(i, j)));
        for (int j = 0; j < m.cols(); ++j) {
            Rat v = m.at(i, j) * Rat(l);
            out.at(i, j) = rat_num(v);
        }
    }
    return out;
}

inline Matrix<Rat> lift_to_rat(const Matrix<Int>& m) {
    Matrix<Rat> out(m.rows(), m.cols(), RatCtx{});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = Rat(m.at(i, j));
    return out;
}

inline Fp rat_mod_p(const Rat& x, std::uint64_t p) {
    Int num = rat_num(x) % p;
    Int den = rat_den(x) % p;
    std::int64_t n = static_cast<std::int64_t>(num);
    std::uint64_t d = static_cast<std::uint64_t>(den);
    if (d == 0) throw InputError("denominator divisible by the chosen prime");
    Fp fn = Fp::from_int(n, p);
    return Fp(mul_mod(fn.v, inv_mod(d, p), p), p);
}

inline Matrix<Fp> reduce_mod_p(const Matrix<Rat>& m, std::uint64_t p) {
    Matrix<Fp> out(m.rows(), m.cols(), FpCtx{p});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = rat_mod_p(m.at(i, j), p);
    return out;
}

template <class K>
int rank(const Matrix<K>& m) {
    Matrix<K> c = m;
    return static_cast<int>(rref_in_place(c).size());
}

// Fraction-free path over the rationals: clear denominators, then Bareiss.
inline int rank(const Matrix<Rat>& m) { return bareiss_rank(int_rows_cleared(m)); }

inline int rank(const Matrix<Int>&) {
    throw InputError("rank over ring unsupported; lift to rationals");
}

// Rows form a basis of the right kernel {x : m.x = 0}.
template <class K>
Matrix<K> nullspace(const Matrix<K>& m) {
    Matrix<K> r = m;
    std::vector<int> pivots = rref_in_place(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    int dim = m.cols() - static_cast<int>(pivots.size());
    Matrix<K> out(dim, m.cols(), m.ctx());
    int k = 0;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        out.at(k, f) = FieldOf<K>::one(m.ctx());
        for (std::size_t i = 0; i < pivots.size(); ++i)
            out.at(k, pivots[i]) = -(r.at(static_cast<int>(i), f));
        ++k;
    }
    return out;
}

// Canonical basis of the row space (nonzero RREF rows).
template <class K>
Matrix<K> row_basis(const Matrix<K>& m) {
    Matrix<K> r = m;
    std::vector<int> pivots = rref_in_place(r);
    Matrix<K> out(static_cast<int>(pivots.size()), m.cols(), m.ctx());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = r.at(i, j);
    return out;
}

template <class K>
struct AffineSolution {
    std::optional<std::vector<K>> particular;  // free coordinates pinned to zero
    Matrix<K> kernel;                          // rows span the solution space of a.x = 0
};

template <class K>
AffineSolution<K> solve_affine(const Matrix<K>& a, const std::vector<K>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw InputError("solve_affine: rhs length mismatch");
    Matrix<K> aug(a.rows(), a.cols() + 1, a.ctx());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    std::vector<int> pivots = rref_in_place(aug);
    AffineSolution<K> sol;
    sol.kernel = nullspace(a);
    if (!pivots.empty() && pivots.back() == a.cols()) return sol;  // inconsistent
    std::vector<K> x(a.cols(), FieldOf<K>::zero(a.ctx()));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(static_cast<int>(i), a.cols());
    sol.particular = std::move(x);
    return sol;
}

// Sum of subspaces given by basis rows; empty list is the zero subspace.
template <class K>
Matrix<K> subspace_sum(std::span<const Matrix<K>> bases, int ambient, typename FieldOf<K>::Ctx ctx) {
    Matrix<K> stacked = vstack(bases, ambient, ctx);
    return row_basis(stacked);
}

// Intersection computed as the kernel of stacked annihilator functionals;
// empty list is the ambient space.
template <class K>
Matrix<K> subspace_intersection(std::span<const Matrix<K>> bases, int ambient,
                                typename FieldOf<K>::Ctx ctx) {
    if (bases.empty()) return Matrix<K>::identity(ambient, ctx);
    std::vector<Matrix<K>> anns;
    anns.reserve(bases.size());
    for (const auto& b : bases) {
        if (b.cols() != ambient) throw InputError("subspace_intersection: ambient mismatch");
        anns.push_back(nullspace(b));
    }
    Matrix<K> stacked = vstack(std::span<const Matrix<K>>(anns), ambient, ctx);
    return nullspace(stacked);
}

template <class K>
Matrix<K> subspace_sum(const std::vector<Matrix<K>>& bases, int ambient,
                       typename FieldOf<K>::Ctx ctx) {
    return subspace_sum(std::span<const Matrix<K>>(bases), ambient, ctx);
}

template <class K>
Matrix<K> subspace_sum(const Matrix<K>& a, const Matrix<K>& b) {
    return row_basis(vstack(a, b));
}

template <class K>
Matrix<K> subspace_intersection(const std::vector<Matrix<K>>& bases, int ambient,
                                typename FieldOf<K>::Ctx ctx) {
    return subspace_intersection(std::span<const Matrix<K>>(bases), ambient, ctx);
}

template <class K>
Matrix<K> subspace_intersection(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.cols() != b.cols()) throw InputError("subspace_intersection: ambient mismatch");
    std::vector<Matrix<K>> bs{a, b};
    return subspace_intersection(std::span<const Matrix<K>>(bs), a.cols(), a.ctx());
}

template <class K>
K det_field(Matrix<K> m) {
    if (m.rows() != m.cols()) throw InputError("det: matrix not square");
    int n = m.rows();
    K det = FieldOf<K>::one(m.ctx());
    for (int k = 0; k < n; ++k) {
        int pr = -1;
        for (int i = k; i < n; ++i) {
            if (!FieldOf<K>::is_zero(m.at(i, k))) {
                pr = i;
                break;
            }
        }
        if (pr < 0) return FieldOf<K>::zero(m.ctx());
        if (pr != k) {
            m.swap_rows(k, pr);
            det = -det;
        }
        det = det * m.at(k, k);
        K inv = FieldOf<K>::inv(m.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (FieldOf<K>::is_zero(m.at(i, k))) continue;
            K f = m.at(i, k) * inv;
            for (int j = k; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(k, j);
        }
    }
    return det;
}

template <class K>
bool is_zero_vec(const std::vector<K>& v) {
    for (const auto& x : v)
        if (!FieldOf<K>::is_zero(x)) return false;
    return true;
}

}  // namespace detlab
