#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "detlab/field.hpp"
#include "detlab/matrix.hpp"

namespace detlab {

struct VarRing {
    std::vector<std::string> names;

    int size() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& n) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return static_cast<int>(i);
        throw InputError("unknown variable " + n);
    }
};

using RingPtr = std::shared_ptr<const VarRing>;

inline RingPtr make_ring(std::vector<std::string> names) {
    for (const auto& n : names) {
        if (n.empty()) throw InputError("variable names must be nonempty");
        if (std::count(names.begin(), names.end(), n) != 1)
            throw InputError("duplicate variable name " + n);
    }
    return std::make_shared<VarRing>(VarRing{std::move(names)});
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
    return a == b || (a && b && a->names == b->names);
}

inline std::vector<std::string> indexed_names(const std::string& prefix, int count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// a, b, ..., z, a1, b1, ... for human-readable generic coefficients
inline std::vector<std::string> letter_names(int count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::string n(1, static_cast<char>('a' + i % 26));
        if (i >= 26) n += std::to_string(i / 26);
        out.push_back(n);
    }
    return out;
}

// Graded lexicographic, largest first, so begin() is the leading term.
struct GrlexDesc {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
        long long da = 0, db = 0;
        for (int e : a) da += e;
        for (int e : b) db += e;
        if (da != db) return da > db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

// Sparse multivariate polynomial with integer (possibly negative) exponents.
// Terms are kept in canonical graded-lex order with no zero coefficients.
template <class K>
class Poly {
public:
    using Ctx = typename FieldOf<K>::Ctx;
    using TermMap = std::map<std::vector<int>, K, GrlexDesc>;

    Poly() = default;
    Poly(RingPtr ring, Ctx fctx) : ring_(std::move(ring)), fctx_(fctx) {}

    static Poly zero(RingPtr ring, Ctx fctx) { return Poly(std::move(ring), fctx); }

    static Poly constant(RingPtr ring, Ctx fctx, const K& c) {
        Poly p(std::move(ring), fctx);
        if (!FieldOf<K>::is_zero(c)) p.t_.emplace(std::vector<int>(p.ring_->size(), 0), c);
        return p;
    }

    static Poly from_int(RingPtr ring, Ctx fctx, std::int64_t v) {
        return constant(ring, fctx, FieldOf<K>::from_int(fctx, v));
    }

    static Poly monomial(RingPtr ring, Ctx fctx, std::vector<int> exps, const K& c) {
        Poly p(std::move(ring), fctx);
        if (static_cast<int>(exps.size()) != p.ring_->size())
            throw InputError("exponent vector has wrong length");
        if (!FieldOf<K>::is_zero(c)) p.t_.emplace(std::move(exps), c);
        return p;
    }

    static Poly variable(RingPtr ring, Ctx fctx, int idx, int exp = 1) {
        if (idx < 0 || idx >= ring->size()) throw InputError("variable index out of range");
        std::vector<int> e(ring->size(), 0);
        e[idx] = exp;
        return monomial(std::move(ring), fctx, std::move(e), FieldOf<K>::one(fctx));
    }

    const RingPtr& ring() const { return ring_; }
    Ctx fctx() const { return fctx_; }
    const TermMap& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int nterms() const { return static_cast<int>(t_.size()); }

    const std::pair<const std::vector<int>, K>& leading() const {
        if (t_.empty()) throw InputError("zero polynomial has no leading term");
        return *t_.begin();
    }

    // Sum of exponents of the leading term; -1 for the zero polynomial.
    long long total_degree() const {
        if (t_.empty()) return -1;
        long long d = 0;
        for (int e : t_.begin()->first) d += e;
        return d;
    }

    // Largest exponent of one variable; -1 for the zero polynomial.
    int degree_in(int idx) const {
        check_idx(idx);
        if (t_.empty()) return -1;
        int best = t_.begin()->first[idx];
        for (const auto& [e, c] : t_) best = std::max(best, e[idx]);
        return best;
    }

    // Smallest exponent of one variable; 0 for the zero polynomial.
    int min_exponent(int idx) const {
        check_idx(idx);
        if (t_.empty()) return 0;
        int best = t_.begin()->first[idx];
        for (const auto& [e, c] : t_) best = std::min(best, e[idx]);
        return best;
    }

    bool has_negative_exponents() const {
        for (const auto& [e, c] : t_)
            for (int x : e)
                if (x < 0) return true;
        return false;
    }

    void add_term(const std::vector<int>& e, const K& c) {
        if (FieldOf<K>::is_zero(c)) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
            return;
        }
        it->second = it->second + c;
        if (FieldOf<K>::is_zero(it->second)) t_.erase(it);
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        require_same(a, b);
        Poly r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        require_same(a, b);
        Poly r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, -c);
        return r;
    }

    Poly operator-() const {
        Poly r(ring_, fctx_);
        for (const auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require_same(a, b);
        Poly r(a.ring_, a.fctx_);
        std::vector<int> e(a.ring_->size());
        for (const auto& [ea, ca] : a.t_) {
            for (const auto& [eb, cb] : b.t_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend Poly operator*(const K& s, const Poly& p) {
        Poly r(p.ring_, p.fctx_);
        if (FieldOf<K>::is_zero(s)) return r;
        for (const auto& [e, c] : p.t_) r.add_term(e, s * c);
        return r;
    }

    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly pow(int e) const {
        if (e < 0) throw InputError("negative polynomial power");
        Poly r = constant(ring_, fctx_, FieldOf<K>::one(fctx_));
        Poly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            if (e >>= 1) base = base * base;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (!same_ring(a.ring_, b.ring_) || !(a.fctx_ == b.fctx_)) return false;
        if (a.t_.size() != b.t_.size()) return false;
        auto ia = a.t_.begin();
        auto ib = b.t_.begin();
        for (; ia != a.t_.end(); ++ia, ++ib)
            if (ia->first != ib->first || !(ia->second == ib->second)) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    // Exact value; negative exponents require invertible (nonzero) arguments.
    K evaluate(const std::vector<K>& x) const {
        if (static_cast<int>(x.size()) != ring_->size())
            throw InputError("assignment does not cover the variable list");
        K acc = FieldOf<K>::zero(fctx_);
        for (const auto& [e, c] : t_) {
            K term = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (e[i] < 0 && FieldOf<K>::is_zero(x[i]))
                    throw InputError("pole: zero assigned to " + ring_->names[i] +
                                     " with negative exponent");
                K base = e[i] > 0 ? x[i] : FieldOf<K>::inv(x[i]);
                for (int k = 0; k < std::abs(e[i]); ++k) term = term * base;
            }
            acc = acc + term;
        }
        return acc;
    }

    K evaluate(const std::map<std::string, K>& assign) const {
        std::vector<K> x;
        x.reserve(ring_->size());
        for (const auto& n : ring_->names) {
            auto it = assign.find(n);
            if (it == assign.end()) throw InputError("assignment misses variable " + n);
            x.push_back(it->second);
        }
        return evaluate(x);
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : t_) {
            std::string cs = FieldOf<K>::str(c);
            bool neg = !cs.empty() && cs[0] == '-';
            std::string body = neg ? cs.substr(1) : cs;
            std::string mon = monomial_str(e);
            if (!mon.empty()) body = body == "1" ? mon : body + "*" + mon;
            if (first) {
                out = neg ? "-" + body : body;
                first = false;
            } else {
                out += neg ? " - " + body : " + " + body;
            }
        }
        return out;
    }

    static void require_same(const Poly& a, const Poly& b) {
        if (!same_ring(a.ring_, b.ring_) || !(a.fctx_ == b.fctx_))
            throw InputError("mixed polynomial contexts");
    }

private:
    void check_idx(int idx) const {
        if (idx < 0 || idx >= ring_->size()) throw InputError("variable index out of range");
    }

    std::string monomial_str(const std::vector<int>& e) const {
        std::string s;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += ring_->names[i];
            if (e[i] != 1) s += "^" + std::to_string(e[i]);
        }
        return s;
    }

    RingPtr ring_;
    Ctx fctx_{};
    TermMap t_;
};

template <class K>
Poly<K> partial_derivative(const Poly<K>& p, int idx) {
    if (idx < 0 || idx >= p.ring()->size()) throw InputError("variable index out of range");
    Poly<K> r(p.ring(), p.fctx());
    for (const auto& [e, c] : p.terms()) {
        if (e[idx] == 0) continue;
        std::vector<int> ne = e;
        ne[idx] -= 1;
        r.add_term(ne, FieldOf<K>::from_int(p.fctx(), e[idx]) * c);
    }
    return r;
}

template <class K>
Poly<K> partial_derivative(const Poly<K>& p, const std::string& var) {
    return partial_derivative(p, p.ring()->index_of(var));
}

template <class K>
struct LaurentParts {
    std::vector<int> monomial;  // exponent vector of the unit factor
    Poly<K> core;               // exponents >= 0, not divisible by any variable
};

// Factors out the largest monomial unit: p = x^monomial * core.
template <class K>
LaurentParts<K> laurent_normalize(const Poly<K>& p) {
    if (p.is_zero()) throw InputError("cannot normalize the zero polynomial");
    int n = p.ring()->size();
    std::vector<int> mins(n, 0);
    for (int i = 0; i < n; ++i) mins[i] = p.min_exponent(i);
    Poly<K> core(p.ring(), p.fctx());
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> ne = e;
        for (int i = 0; i < n; ++i) ne[i] -= mins[i];
        core.add_term(ne, c);
    }
    return {std::move(mins), std::move(core)};
}

// Composes p with variable images that must be affine-linear in the target
// ring. Laurent sources are rejected; normalize them first.
template <class K>
Poly<K> specialize(const Poly<K>& p, const std::map<std::string, Poly<K>>& images) {
    if (p.has_negative_exponents())
        throw InputError("substitution into negative exponents; normalize first");
    RingPtr target;
    for (const auto& [name, img] : images) {
        if (!target) target = img.ring();
        if (!same_ring(target, img.ring()) || !(img.fctx() == p.fctx()))
            throw InputError("substitution images live in mixed contexts");
        if (img.has_negative_exponents() || img.total_degree() > 1)
            throw InputError("substitution image for " + name + " is not affine-linear");
    }
    std::vector<const Poly<K>*> img_of;
    img_of.reserve(p.ring()->size());
    for (const auto& n : p.ring()->names) {
        auto it = images.find(n);
        if (it == images.end()) throw InputError("substitution misses variable " + n);
        img_of.push_back(&it->second);
    }
    if (!target) throw InputError("empty substitution");
    Poly<K> acc(target, p.fctx());
    for (const auto& [e, c] : p.terms()) {
        Poly<K> term = Poly<K>::constant(target, p.fctx(), c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) term = term * img_of[i]->pow(e[i]);
        acc += term;
    }
    return acc;
}

// Exact quotient a/b in the Laurent ring. Monomial units are factored off
// both sides first; the cores then divide in the plain polynomial ring, where
// leading terms strictly decrease in a well-order, so the loop terminates and
// a failed leading-term division certifies inexactness.
template <class K>
Poly<K> exact_div(const Poly<K>& a, const Poly<K>& b) {
    Poly<K>::require_same(a, b);
    if (b.is_zero()) throw InputError("polynomial division by zero");
    if (a.is_zero()) return Poly<K>::zero(a.ring(), a.fctx());
    auto na = laurent_normalize(a);
    auto nb = laurent_normalize(b);
    Poly<K> r = na.core;
    Poly<K> q(a.ring(), a.fctx());
    const auto& [be, bc] = nb.core.leading();
    while (!r.is_zero()) {
        const auto& [re, rc] = r.leading();
        std::vector<int> qe(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            if (re[i] < be[i]) throw CheckFailure("polynomial division is not exact");
            qe[i] = re[i] - be[i];
        }
        K qc = rc / bc;
        Poly<K> qt = Poly<K>::monomial(a.ring(), a.fctx(), std::move(qe), qc);
        q += qt;
        r -= qt * nb.core;
    }
    std::vector<int> shift(na.monomial.size());
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = na.monomial[i] - nb.monomial[i];
    Poly<K> unit = Poly<K>::monomial(a.ring(), a.fctx(), std::move(shift), FieldOf<K>::one(a.fctx()));
    return unit * q;
}

template <class K>
struct PolyMatrix {
    using Ctx = typename FieldOf<K>::Ctx;

    RingPtr ring;
    Ctx fctx{};
    int rows = 0, cols = 0;
    std::vector<Poly<K>> a;

    PolyMatrix() = default;
    PolyMatrix(RingPtr r, Ctx f, int nr, int nc)
        : ring(std::move(r)),
          fctx(f),
          rows(nr),
          cols(nc),
          a(static_cast<std::size_t>(nr) * nc, Poly<K>::zero(ring, f)) {}

    Poly<K>& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Poly<K>& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

namespace detail {

template <class K>
Poly<K> det_cofactor_impl(const PolyMatrix<K>& m, std::vector<int>& cols_left, int row) {
    if (cols_left.empty()) {
        return Poly<K>::constant(m.ring, m.fctx, FieldOf<K>::one(m.fctx));
    }
    Poly<K> acc = Poly<K>::zero(m.ring, m.fctx);
    for (std::size_t k = 0; k < cols_left.size(); ++k) {
        int c = cols_left[k];
        if (m.at(row, c).is_zero()) continue;
        std::vector<int> rest;
        rest.reserve(cols_left.size() - 1);
        for (std::size_t j = 0; j < cols_left.size(); ++j)
            if (j != k) rest.push_back(cols_left[j]);
        Poly<K> sub = det_cofactor_impl(m, rest, row + 1);
        Poly<K> contrib = m.at(row, c) * sub;
        if (k % 2 == 1) contrib = -contrib;
        acc += contrib;
    }
    return acc;
}

}  // namespace detail

// Reference route: Laplace expansion along rows. Exponential; used as the
// cross-check oracle and for small sizes.
template <class K>
Poly<K> det_cofactor(const PolyMatrix<K>& m) {
    if (m.rows != m.cols) throw InputError("det: matrix not square");
    std::vector<int> cols(m.cols);
    for (int j = 0; j < m.cols; ++j) cols[j] = j;
    return detail::det_cofactor_impl(m, cols, 0);
}

// Fraction-free elimination over the polynomial ring; divisions are exact in
// an integral domain.
template <class K>
Poly<K> det_bareiss_poly(PolyMatrix<K> m) {
    if (m.rows != m.cols) throw InputError("det: matrix not square");
    int n = m.rows;
    if (n == 0) return Poly<K>::constant(m.ring, m.fctx, FieldOf<K>::one(m.fctx));
    Poly<K> prev = Poly<K>::constant(m.ring, m.fctx, FieldOf<K>::one(m.fctx));
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        int pr = -1;
        for (int i = k; i < n; ++i) {
            if (!m.at(i, k).is_zero()) {
                pr = i;
                break;
            }
        }
        if (pr < 0) return Poly<K>::zero(m.ring, m.fctx);
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(pr, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Poly<K> t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = exact_div(t, prev);
            }
            m.at(i, k) = Poly<K>::zero(m.ring, m.fctx);
        }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

// No size cap; reserved for internal constructions whose sizes are validated
// by their own caller contracts.
template <class K>
Poly<K> det_poly_matrix_uncapped(const PolyMatrix<K>& m) {
    if (m.rows != m.cols) throw InputError("det: matrix not square");
    if (m.rows <= 4) return det_cofactor(m);
    return det_bareiss_poly(m);
}

template <class K>
Poly<K> det_poly_matrix(const PolyMatrix<K>& m) {
    if (m.rows != m.cols) throw InputError("det: matrix not square");
    if (m.rows > 7) throw InputError("determinant size exceeds 7");
    return det_poly_matrix_uncapped(m);
}

template <class K>
Matrix<K> eval_matrix(const PolyMatrix<K>& m, const std::vector<K>& x) {
    Matrix<K> out(m.rows, m.cols, m.fctx);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j).evaluate(x);
    return out;
}

}  // namespace detlab
