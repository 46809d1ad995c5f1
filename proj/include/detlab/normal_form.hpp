#pragma once

#include <vector>

#include "detlab/matrix.hpp"

namespace detlab {

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

// Row Hermite normal form: echelon, positive pivots, entries above a pivot
// reduced into [0, pivot). Row space is preserved.
inline Matrix<Int> row_hnf(Matrix<Int> h) {
    int r = 0;
    for (int j = 0; j < h.cols() && r < h.rows(); ++j) {
        // reduce column j below row r to a single nonzero via Euclid steps
        while (true) {
            int best = -1;
            for (int i = r; i < h.rows(); ++i) {
                if (h.at(i, j) == 0) continue;
                if (best < 0 || abs(h.at(i, j)) < abs(h.at(best, j))) best = i;
            }
            if (best < 0) break;
            h.swap_rows(r, best);
            bool others = false;
            for (int i = r + 1; i < h.rows(); ++i) {
                if (h.at(i, j) == 0) continue;
                others = true;
                Int q = h.at(i, j) / h.at(r, j);  // truncating: remainder shrinks
                for (int c = 0; c < h.cols(); ++c) h.at(i, c) -= q * h.at(r, c);
            }
            if (!others) break;
        }
        if (h.at(r, j) == 0) continue;
        if (h.at(r, j) < 0)
            for (int c = 0; c < h.cols(); ++c) h.at(r, c) = -h.at(r, c);
        for (int i = 0; i < r; ++i) {
            Int q = floor_div(h.at(i, j), h.at(r, j));
            if (q == 0) continue;
            for (int c = 0; c < h.cols(); ++c) h.at(i, c) -= q * h.at(r, c);
        }
        ++r;
    }
    return h;
}

struct NormalForms {
    Matrix<Int> hnf;
    std::vector<Int> snf;   // nonnegative, each dividing the next
    Matrix<Int> left;       // rows x rows, det ±1
    Matrix<Int> right;      // cols x cols, det ±1; left * m * right = diag(snf)
};

inline NormalForms hermite_smith(const Matrix<Int>& m) {
    NormalForms out{row_hnf(m), {}, Matrix<Int>::identity(m.rows(), IntCtx{}),
                    Matrix<Int>::identity(m.cols(), IntCtx{})};
    Matrix<Int> s = m;
    Matrix<Int>& L = out.left;
    Matrix<Int>& R = out.right;
    int rows = s.rows(), cols = s.cols();

    auto row_sub = [&](int i, int t, const Int& q) {
        for (int c = 0; c < cols; ++c) s.at(i, c) -= q * s.at(t, c);
        for (int c = 0; c < rows; ++c) L.at(i, c) -= q * L.at(t, c);
    };
    auto col_sub = [&](int j, int t, const Int& q) {
        for (int r = 0; r < rows; ++r) s.at(r, j) -= q * s.at(r, t);
        for (int r = 0; r < cols; ++r) R.at(r, j) -= q * R.at(r, t);
    };
    auto swap_rows = [&](int i, int j) {
        s.swap_rows(i, j);
        L.swap_rows(i, j);
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows; ++r) std::swap(s.at(r, i), s.at(r, j));
        for (int r = 0; r < cols; ++r) std::swap(R.at(r, i), R.at(r, j));
    };

    int t = 0;
    int bound = rows < cols ? rows : cols;
    while (t < bound) {
        int pi = -1, pj = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (s.at(i, j) == 0) continue;
                if (pi < 0 || abs(s.at(i, j)) < abs(s.at(pi, pj))) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        bool settled = false;
        while (!settled) {
            settled = true;
            for (int i = t + 1; i < rows; ++i) {
                if (s.at(i, t) == 0) continue;
                Int q = s.at(i, t) / s.at(t, t);
                row_sub(i, t, q);
                if (s.at(i, t) != 0) {  // nonzero remainder, strictly smaller pivot
                    swap_rows(t, i);
                    settled = false;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (s.at(t, j) == 0) continue;
                Int q = s.at(t, j) / s.at(t, t);
                col_sub(j, t, q);
                if (s.at(t, j) != 0) {
                    swap_cols(t, j);
                    settled = false;
                }
            }
            if (settled) {
                // enforce the divisibility chain before moving on
                for (int i = t + 1; i < rows && settled; ++i)
                    for (int j = t + 1; j < cols && settled; ++j) {
                        if (s.at(i, j) % s.at(t, t) != 0) {
                            for (int c = 0; c < cols; ++c) s.at(t, c) += s.at(i, c);
                            for (int c = 0; c < rows; ++c) L.at(t, c) += L.at(i, c);
                            settled = false;
                        }
                    }
            }
        }
        if (s.at(t, t) < 0) {
            for (int c = 0; c < cols; ++c) s.at(t, c) = -s.at(t, c);
            for (int c = 0; c < rows; ++c) L.at(t, c) = -L.at(t, c);
        }
        ++t;
    }
    out.snf.resize(bound, Int(0));
    for (int i = 0; i < t; ++i) out.snf[i] = s.at(i, i);
    return out;
}

}  // namespace detlab
