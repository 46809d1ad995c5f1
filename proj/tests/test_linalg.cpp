#include <doctest.h>

#include <detlab/matrix.hpp>
#include <detlab/normal_form.hpp>
#include <detlab/rng.hpp>

#include "helpers.hpp"

using namespace detlab;
using namespace testutil;

TEST_CASE("rank over QQ and GF(p): dependent triple of 3-vectors has rank 2") {
    auto rows = std::vector<std::vector<long long>>{{1, 0, 1}, {0, 1, 1}, {1, 1, 2}};
    CHECK(rank(qmat(3, rows)) == 2);
    CHECK(rank(pmat(3, rows, kP)) == 2);
    CHECK(bareiss_rank(imat(3, rows)) == 2);
}

TEST_CASE("rank over the integer ring is rejected") {
    auto m = imat(2, {{2, 0}, {0, 2}});
    CHECK_THROWS_AS(rank(m), InputError);
}

TEST_CASE("nullspace of a single functional is a 2-dim annihilator") {
    auto m = qmat(3, {{1, 1, 1}});
    auto ns = nullspace(m);
    CHECK(ns.rows() == 2);
    auto prod = matmul(m, transpose(ns));
    for (int i = 0; i < prod.rows(); ++i)
        for (int j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j) == Rat(0));
    CHECK(rank(ns) == 2);
}

TEST_CASE("nullspace property: dim + rank = cols, and M * ker^T = 0") {
    Rng rng(derive_seed(4242, 0));
    for (int trial = 0; trial < 20; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        int c = 1 + static_cast<int>(rng.below(5));
        auto m = random_qmat(rng, r, c);
        auto ns = nullspace(m);
        CHECK(ns.rows() + rank(m) == c);
        if (ns.rows() > 0) {
            CHECK(rank(ns) == ns.rows());
            auto prod = matmul(m, transpose(ns));
            for (int i = 0; i < prod.rows(); ++i)
                for (int j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j) == Rat(0));
        }
    }
    for (int trial = 0; trial < 20; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        int c = 1 + static_cast<int>(rng.below(5));
        auto m = random_pmat(rng, r, c, kP);
        auto ns = nullspace(m);
        CHECK(ns.rows() + rank(m) == c);
        if (ns.rows() > 0) {
            auto prod = matmul(m, transpose(ns));
            for (int i = 0; i < prod.rows(); ++i)
                for (int j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j).v == 0);
        }
    }
}

TEST_CASE("subspace sum and intersection on coordinate planes") {
    auto e12 = qmat(3, {{1, 0, 0}, {0, 1, 0}});
    auto e23 = qmat(3, {{0, 1, 0}, {0, 0, 1}});
    auto inter = subspace_intersection(e12, e23);
    REQUIRE(inter.rows() == 1);
    // Normalized basis of the intersection is the middle coordinate axis.
    CHECK(inter.at(0, 0) == Rat(0));
    CHECK(inter.at(0, 1) == Rat(1));
    CHECK(inter.at(0, 2) == Rat(0));
    auto sum = subspace_sum(e12, e23);
    CHECK(rank(sum) == 3);

    auto e1 = qmat(3, {{1, 0, 0}});
    auto e3 = qmat(3, {{0, 0, 1}});
    auto disjoint = subspace_intersection(e1, e3);
    CHECK(disjoint.rows() == 0);
}

TEST_CASE("empty generating sets: sum of none is zero space, intersection of none is ambient") {
    std::vector<Matrix<Rat>> none;
    auto s = subspace_sum(none, 4, RatCtx{});
    CHECK(s.rows() == 0);
    CHECK(s.cols() == 4);
    auto i = subspace_intersection(none, 4, RatCtx{});
    CHECK(i.rows() == 4);
    CHECK(rank(i) == 4);
}

TEST_CASE("dimension formula dim A + dim B = dim(A+B) + dim(A cap B)") {
    Rng rng(derive_seed(4242, 1));
    for (int trial = 0; trial < 30; ++trial) {
        int amb = 2 + static_cast<int>(rng.below(4));
        auto a = row_basis(random_qmat(rng, 1 + static_cast<int>(rng.below(3)), amb));
        auto b = row_basis(random_qmat(rng, 1 + static_cast<int>(rng.below(3)), amb));
        auto s = subspace_sum(a, b);
        auto i = subspace_intersection(a, b);
        int di = i.rows() == 0 ? 0 : rank(i);
        CHECK(a.rows() + b.rows() == rank(s) + di);
    }
}

TEST_CASE("affine solve: particular solution plus kernel, and inconsistency detection") {
    auto m = qmat(2, {{1, 1}});
    std::vector<Rat> rhs{Rat(2)};
    auto sol = solve_affine(m, rhs);
    REQUIRE(sol.particular.has_value());
    CHECK((*sol.particular)[0] == Rat(2));
    CHECK((*sol.particular)[1] == Rat(0));
    REQUIRE(sol.kernel.rows() == 1);
    CHECK(sol.kernel.at(0, 0) == -sol.kernel.at(0, 1));

    auto bad = qmat(2, {{1, 1}, {1, 1}});
    std::vector<Rat> badrhs{Rat(1), Rat(2)};
    auto nosol = solve_affine(bad, badrhs);
    CHECK(!nosol.particular.has_value());
}

TEST_CASE("affine solve property: residual of particular is zero, kernel maps to zero") {
    Rng rng(derive_seed(4242, 2));
    int consistent_seen = 0;
    for (int trial = 0; trial < 40; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        int c = 1 + static_cast<int>(rng.below(4));
        auto m = random_qmat(rng, r, c);
        std::vector<Rat> x(c);
        for (auto& e : x) e = Rat(rng.int_range(-9, 9));
        auto rhs = matvec(m, x);
        auto sol = solve_affine(m, rhs);
        REQUIRE(sol.particular.has_value());
        ++consistent_seen;
        auto back = matvec(m, *sol.particular);
        for (int i = 0; i < r; ++i) CHECK(back[i] == rhs[i]);
        for (int k = 0; k < sol.kernel.rows(); ++k) {
            auto kv = matvec(m, sol.kernel.row(k));
            for (int i = 0; i < r; ++i) CHECK(kv[i] == Rat(0));
        }
    }
    CHECK(consistent_seen == 40);
}

TEST_CASE("determinants: fraction-free elimination agrees with field elimination") {
    auto m = imat(3, {{2, 3, 1}, {4, 1, -3}, {-1, 5, 2}});
    // Expansion along the first row: 2*(2+15) - 3*(8-3) + 1*(20+1) = 34 - 15 + 21 = 40.
    CHECK(bareiss_det(m) == Int(40));
    auto q = lift_to_rat(m);
    CHECK(det_field(q) == Rat(40));
    auto fp = reduce_mod_p(q, kP);
    CHECK(det_field(fp).v == 40);
}

TEST_CASE("determinant property: random integer matrices, two routes agree") {
    Rng rng(derive_seed(4242, 3));
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng.below(5));
        auto m = random_imat(rng, n, n);
        auto d = bareiss_det(m);
        CHECK(Rat(d) == det_field(lift_to_rat(m)));
        CHECK(bareiss_rank(m) == rank(lift_to_rat(m)));
    }
}

TEST_CASE("row reduction denominators falling on the modulus are rejected") {
    Matrix<Rat> m(1, 1, RatCtx{});
    m.at(0, 0) = Rat(1) / Rat(Int(kP));
    CHECK_THROWS_AS(reduce_mod_p(m, kP), InputError);
}

TEST_CASE("rational reduction mod p maps 1/2 to the inverse of 2") {
    Matrix<Rat> m(1, 1, RatCtx{});
    m.at(0, 0) = Rat(1) / Rat(2);
    auto r = reduce_mod_p(m, kP);
    CHECK(mul_mod(r.at(0, 0).v, 2, kP) == 1);
}

TEST_CASE("row hermite form of a diagonal matrix is itself") {
    auto m = imat(2, {{2, 0}, {0, 3}});
    auto h = row_hnf(m);
    CHECK(h.at(0, 0) == Int(2));
    CHECK(h.at(1, 1) == Int(3));
    CHECK(h.at(0, 1) == Int(0));
    CHECK(h.at(1, 0) == Int(0));
}

TEST_CASE("smith form of diag(2,3) is diag(1,6)") {
    auto m = imat(2, {{2, 0}, {0, 3}});
    auto nf = hermite_smith(m);
    REQUIRE(nf.snf.size() == 2);
    CHECK(nf.snf[0] == Int(1));
    CHECK(nf.snf[1] == Int(6));
    // L m R must reproduce the diagonal and the transforms must be unimodular.
    auto lmr = matmul(matmul(nf.left, m), nf.right);
    CHECK(lmr.at(0, 0) == Int(1));
    CHECK(lmr.at(1, 1) == Int(6));
    CHECK(lmr.at(0, 1) == Int(0));
    CHECK(lmr.at(1, 0) == Int(0));
    CHECK((bareiss_det(nf.left) == Int(1) || bareiss_det(nf.left) == Int(-1)));
    CHECK((bareiss_det(nf.right) == Int(1) || bareiss_det(nf.right) == Int(-1)));
}

TEST_CASE("smith form properties on random integer matrices") {
    Rng rng(derive_seed(4242, 4));
    for (int trial = 0; trial < 25; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        int c = 1 + static_cast<int>(rng.below(4));
        auto m = random_imat(rng, r, c);
        auto nf = hermite_smith(m);
        auto lmr = matmul(matmul(nf.left, m), nf.right);
        REQUIRE(static_cast<int>(nf.snf.size()) == std::min(r, c));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                Int want = (i == j && i < static_cast<int>(nf.snf.size())) ? nf.snf[i] : Int(0);
                CHECK(lmr.at(i, j) == want);
            }
        for (std::size_t i = 0; i < nf.snf.size(); ++i) CHECK(nf.snf[i] >= 0);
        for (std::size_t i = 0; i + 1 < nf.snf.size(); ++i) {
            if (nf.snf[i + 1] != 0) {
                REQUIRE(nf.snf[i] != 0);
                CHECK(nf.snf[i + 1] % nf.snf[i] == 0);
            }
        }
        CHECK((bareiss_det(nf.left) == Int(1) || bareiss_det(nf.left) == Int(-1)));
        CHECK((bareiss_det(nf.right) == Int(1) || bareiss_det(nf.right) == Int(-1)));
        int nonzero = 0;
        for (const auto& d : nf.snf)
            if (d != 0) ++nonzero;
        CHECK(nonzero == bareiss_rank(m));
        // The hermite form keeps the row space.
        auto h = row_hnf(m);
        auto both = vstack(lift_to_rat(m), lift_to_rat(h));
        CHECK(rank(both) == bareiss_rank(m));
        CHECK(bareiss_rank(h) == bareiss_rank(m));
    }
}

TEST_CASE("prime field scalar arithmetic round-trips") {
    auto a = Fp::from_int(-3, kP);
    CHECK(a.v == kP - 3);
    auto b = a.inv();
    CHECK((a * b).v == 1);
    CHECK(a.pow(static_cast<std::int64_t>(kP) - 1).v == 1);
    CHECK(a.pow(-1).v == b.v);
    CHECK((a - a).v == 0);
    CHECK_THROWS_AS(Fp::from_int(0, kP).inv(), MathError);
}

TEST_CASE("primality and next-prime helpers") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(10007));
    CHECK(is_prime_u64(1000003));
    CHECK(!is_prime_u64(1000001));
    CHECK(is_prime_u64((std::uint64_t(1) << 61) - 1));
    CHECK(!is_prime_u64(1));
    CHECK(next_prime_at_least(1000000) == 1000003);
    CHECK(next_prime_at_least(10007) == 10007);
}

TEST_CASE("field descriptors validate their modulus") {
    auto f = FieldSpec::prime(10007);
    CHECK(f.str() == "GF(10007)");
    CHECK(FieldSpec::rationals().str() == "QQ");
    CHECK_THROWS_AS(FieldSpec::prime(10), InputError);
    CHECK_THROWS_AS(FieldSpec::prime(0), InputError);
}

TEST_CASE("seed derivation is stable and index-separated") {
    auto s0 = derive_seed(7, 0);
    auto s1 = derive_seed(7, 1);
    CHECK(s0 != s1);
    CHECK(s0 == derive_seed(7, 0));
    Rng a(s0), b(s0);
    for (int i = 0; i < 8; ++i) CHECK(a.u64() == b.u64());
}
