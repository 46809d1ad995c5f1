#include <detlab/lattice.hpp>

#include <set>

#include "helpers.hpp"

using namespace detlab;
using testutil::imat;

namespace {

using Sets = std::vector<std::vector<std::vector<int>>>;

LatticePointTuple square_pair() {
    Sets s{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
    return make_lattice_tuple(2, s);
}

LatticePointTuple triangle_pair() {
    Sets s{{{0, 0}, {1, 0}, {0, 1}}, {{0, 0}, {1, 0}, {0, 1}}};
    return make_lattice_tuple(2, s);
}

std::vector<int> apply_u(const Matrix<Int>& u, const std::vector<int>& v) {
    std::vector<int> out(u.rows(), 0);
    for (int r = 0; r < u.rows(); ++r) {
        Int acc(0);
        for (int c = 0; c < u.cols(); ++c) acc += u.at(r, c) * Int(v[c]);
        out[r] = static_cast<int>(acc);
    }
    return out;
}

// random unimodular matrix as a product of elementary row operations
Matrix<Int> random_unimodular(Rng& rng, int n) {
    Matrix<Int> u = Matrix<Int>::identity(n, IntCtx{});
    for (int step = 0; step < 3 * n; ++step) {
        int i = static_cast<int>(rng.below(n));
        int j = static_cast<int>(rng.below(n));
        int op = static_cast<int>(rng.below(3));
        if (op == 0 && i != j) {
            Int q(rng.int_range(-2, 2));
            for (int c = 0; c < n; ++c) u.at(i, c) += q * u.at(j, c);
        } else if (op == 1) {
            u.swap_rows(i, j);
        } else if (op == 2) {
            for (int c = 0; c < n; ++c) u.at(i, c) = -u.at(i, c);
        }
    }
    return u;
}

}  // namespace

TEST_CASE("lattice tuple validation") {
    CHECK_NOTHROW(make_lattice_tuple(1, Sets{{{0}, {1}, {2}}}));
    CHECK_THROWS_AS(make_lattice_tuple(0, Sets{{{}}}), InputError);
    CHECK_THROWS_AS(make_lattice_tuple(2, Sets{}), InputError);
    CHECK_THROWS_AS(make_lattice_tuple(2, Sets{{}}), InputError);
    // origin missing
    CHECK_THROWS_AS(make_lattice_tuple(2, Sets{{{1, 0}, {0, 1}}}), InputError);
    // duplicate point
    CHECK_THROWS_AS(make_lattice_tuple(2, Sets{{{0, 0}, {1, 0}, {1, 0}}}), InputError);
    // wrong dimension
    CHECK_THROWS_AS(make_lattice_tuple(2, Sets{{{0, 0}, {1}}}), InputError);
}

TEST_CASE("spans of point sets") {
    // {0, e1, e2} spans the plane
    auto t1 = make_lattice_tuple(2, Sets{{{0, 0}, {1, 0}, {0, 1}}});
    CHECK(spans(t1).dim(0) == 2);
    // {0, 2e1} spans a line
    auto t2 = make_lattice_tuple(2, Sets{{{0, 0}, {2, 0}}});
    CHECK(spans(t2).dim(0) == 1);
    // unit square spans the plane
    CHECK(spans(square_pair()).dim(0) == 2);
    CHECK(spans(square_pair()).dim(1) == 2);
}

TEST_CASE("tau block ranks equal span dimensions") {
    // dual route: the column matrix rank (rational elimination) against the
    // span dimension computed through the integer Hermite form
    Rng rng(20260819);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng.below(4));
        int k = 1 + static_cast<int>(rng.below(3));
        Sets sets;
        for (int i = 0; i < k; ++i) {
            std::set<std::vector<int>> pts;
            pts.insert(std::vector<int>(n, 0));
            int extra = static_cast<int>(rng.below(4));
            for (int e = 0; e < extra; ++e) {
                std::vector<int> p(n);
                for (auto& x : p) x = static_cast<int>(rng.int_range(-3, 3));
                pts.insert(p);
            }
            sets.emplace_back(pts.begin(), pts.end());
        }
        auto t = make_lattice_tuple(n, sets);
        TauBlock tb = tau_blocks(t);
        SubspaceTuple<Rat> sp = spans(t);
        REQUIRE(static_cast<int>(tb.blocks.size()) == k);
        for (int i = 0; i < k; ++i) {
            CHECK(tb.blocks[i].rows() == n);
            CHECK(tb.blocks[i].cols() == static_cast<int>(t.sets[i].size()));
            CHECK(rank(rational_matrix(tb.blocks[i])) == sp.dim(i));
        }
    }
}

TEST_CASE("matrix helpers round-trip") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix<Int> u = random_unimodular(rng, 2 + static_cast<int>(rng.below(3)));
        Int d = integer_det(u);
        CHECK((d == 1 || d == -1));
        Matrix<Rat> inv = matrix_inverse(rational_matrix(u));
        Matrix<Int> v = integer_matrix(inv);
        CHECK(matrix_product(rational_matrix(u), inv) ==
              Matrix<Rat>::identity(u.rows(), RatCtx{}));
        CHECK(integer_det(v) == d);
    }
    CHECK_THROWS_AS(matrix_inverse(rational_matrix(imat(2, {{1, 2}, {2, 4}}))), InputError);
    Matrix<Rat> half(1, 1, RatCtx{});
    half.at(0, 0) = Rat(1, 2);
    CHECK_THROWS_AS(integer_matrix(half), CheckFailure);
}

TEST_CASE("standard simplex pairs classify as linear") {
    auto cls = classify_lir(triangle_pair());
    REQUIRE(cls.kind == TupleClassification::Kind::lir);
    CHECK(cls.witness_u == Matrix<Int>::identity(2, IntCtx{}));
    REQUIRE(cls.shifts.size() == 2);
    CHECK(cls.shifts[0] == std::vector<int>{0, 0});
    CHECK(cls.shifts[1] == std::vector<int>{0, 0});
}

TEST_CASE("unit squares and segments classify as nonlinear") {
    auto cls = classify_lir(square_pair());
    CHECK(cls.kind == TupleClassification::Kind::nir);
    // all 4 x 4 base choices refuted
    CHECK(cls.refuted_choices == 16);

    auto quad = classify_lir(make_lattice_tuple(1, Sets{{{0}, {1}, {2}}}));
    CHECK(quad.kind == TupleClassification::Kind::nir);
    CHECK(quad.refuted_choices == 3);

    // {0, 2}: one difference, independent, but not a direct summand
    auto gap = classify_lir(make_lattice_tuple(1, Sets{{{0}, {2}}}));
    CHECK(gap.kind == TupleClassification::Kind::nir);
}

TEST_CASE("segment pairs on distinct axes classify as linear") {
    auto t = make_lattice_tuple(2, Sets{{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}});
    auto cls = classify_lir(t);
    REQUIRE(cls.kind == TupleClassification::Kind::lir);
    CHECK(integer_det(cls.witness_u) == 1);
    CHECK(cls.witness_u == Matrix<Int>::identity(2, IntCtx{}));
}

TEST_CASE("classification is invariant under lattice automorphisms and shifts") {
    Rng rng(991);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng.below(3));
        int k = 1 + static_cast<int>(rng.below(2));
        Matrix<Int> u0 = random_unimodular(rng, n);
        // random subsets of the standard simplex vertex set, each with the origin
        Sets image;
        for (int i = 0; i < k; ++i) {
            std::set<std::vector<int>> pts;
            pts.insert(std::vector<int>(n, 0));
            int extra = 1 + static_cast<int>(rng.below(n));
            for (int e = 0; e < extra; ++e) {
                std::vector<int> unit(n, 0);
                unit[rng.below(n)] = 1;
                pts.insert(unit);
            }
            // transform and shift so the image of some simplex point is the origin
            std::vector<std::vector<int>> transformed;
            for (const auto& p : pts) transformed.push_back(apply_u(u0, p));
            const std::vector<int> base = transformed[rng.below(transformed.size())];
            for (auto& p : transformed)
                for (int c = 0; c < n; ++c) p[c] -= base[c];
            image.push_back(std::move(transformed));
        }
        auto t = make_lattice_tuple(n, image);
        auto cls = classify_lir(t);
        REQUIRE(cls.kind == TupleClassification::Kind::lir);
        // independent witness re-check
        Int d = integer_det(cls.witness_u);
        CHECK((d == 1 || d == -1));
        for (int i = 0; i < t.size(); ++i) {
            for (const auto& pt : t.sets[i]) {
                std::vector<int> diff(n);
                for (int c = 0; c < n; ++c) diff[c] = pt[c] - cls.shifts[i][c];
                std::vector<int> img = apply_u(cls.witness_u, diff);
                int ones = 0;
                bool ok = true;
                for (int x : img) {
                    if (x == 1)
                        ++ones;
                    else if (x != 0)
                        ok = false;
                }
                CHECK(ok);
                CHECK(ones <= 1);
            }
        }
    }
}

TEST_CASE("nonlinearity survives lattice automorphisms and shifts") {
    Rng rng(313);
    LatticePointTuple squares = square_pair();
    for (int trial = 0; trial < 10; ++trial) {
        Matrix<Int> u0 = random_unimodular(rng, 2);
        Sets image;
        for (int i = 0; i < 2; ++i) {
            std::vector<std::vector<int>> sq;
            for (const auto& p : squares.sets[i]) sq.push_back(apply_u(u0, p));
            const std::vector<int> base = sq[rng.below(sq.size())];
            for (auto& p : sq)
                for (int c = 0; c < 2; ++c) p[c] -= base[c];
            image.push_back(std::move(sq));
        }
        auto cls = classify_lir(make_lattice_tuple(2, image));
        CHECK(cls.kind == TupleClassification::Kind::nir);
        CHECK(cls.refuted_choices == 16);
    }
}

TEST_CASE("classification size caps") {
    CHECK_THROWS_AS(classify_lir(make_lattice_tuple(7, Sets{{std::vector<int>(7, 0)}})),
                    InputError);
    std::vector<std::vector<int>> many;
    for (int i = 0; i <= 12; ++i) many.push_back({i});
    CHECK_THROWS_AS(classify_lir(make_lattice_tuple(1, Sets{many})), InputError);
}
