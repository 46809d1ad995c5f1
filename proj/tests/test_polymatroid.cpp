#include <doctest.h>

#include <detlab/polymatroid.hpp>

#include "helpers.hpp"

using namespace detlab;
using namespace testutil;

TEST_CASE("mask formatting is 1-based set notation") {
    CHECK(mask_str(0) == "{}");
    CHECK(mask_str(0b101) == "{1,3}");
    CHECK(mask_members(0b110) == std::vector<int>{1, 2});
}

TEST_CASE("tuple construction validates ambient and normalizes bases") {
    std::vector<Matrix<Rat>> bad{qmat(2, {{1, 0}})};
    CHECK_THROWS_AS(make_subspace_tuple(bad, 3, RatCtx{}), InputError);

    // A redundant generating set collapses to its row basis.
    std::vector<Matrix<Rat>> red{qmat(2, {{1, 0}, {2, 0}, {3, 0}})};
    auto t = make_subspace_tuple(red, 2, RatCtx{});
    CHECK(t.dim(0) == 1);
    CHECK(t.dim_sum() == 1);
    CHECK(t.full_mask() == 0b1);
}

TEST_CASE("rank table of the coordinate-plane triangle") {
    auto t = triangle_tuple();
    auto table = rank_table(t);
    std::vector<std::uint8_t> expect{0, 2, 2, 3, 2, 3, 3, 3};
    CHECK(table == expect);
    CHECK(rank_of(t, 0b111) == 3);
    CHECK(defect_of(t, 0b111) == 0);
    CHECK(defect_of(t, 0b001) == 1);
    CHECK_THROWS_AS(rank_of(t, 0b1000), InputError);
}

TEST_CASE("rank table is identical in serial and parallel execution") {
    Rng rng(derive_seed(555, 0));
    for (int trial = 0; trial < 5; ++trial) {
        auto t = random_tuple_q(rng, 4, 3, 2);
        CHECK(rank_table(t, ExecMode::serial) == rank_table(t, ExecMode::openmp));
    }
}

TEST_CASE("subset rank axioms hold on random tuples") {
    Rng rng(derive_seed(555, 1));
    auto check_axioms = [](const auto& t) {
        auto table = rank_table(t);
        int m = t.size();
        Mask full = t.full_mask();
        CHECK(table[0] == 0);
        for (Mask a = 0; a <= full; ++a) {
            for (int j = 0; j < m; ++j) {
                if (a & (Mask{1} << j)) continue;
                Mask aj = a | (Mask{1} << j);
                CHECK(table[a] <= table[aj]);
                CHECK(table[aj] <= table[a] + t.dim(j));
            }
            for (Mask b = 0; b <= full; ++b)
                CHECK(table[a | b] + table[a & b] <= table[a] + table[b]);
        }
    };
    for (int trial = 0; trial < 6; ++trial) check_axioms(random_tuple_q(rng, 3, 3, 2));
    for (int trial = 0; trial < 6; ++trial) check_axioms(random_tuple_p(rng, 4, 3, 2, kP));
}

TEST_CASE("closure is extensive, idempotent, and rank-preserving") {
    Rng rng(derive_seed(555, 2));
    for (int trial = 0; trial < 8; ++trial) {
        auto t = random_tuple_q(rng, 4, 3, 2);
        auto table = rank_table(t);
        Mask full = t.full_mask();
        for (Mask a = 0; a <= full; ++a) {
            Mask cl = closure(t, a);
            CHECK((a & cl) == a);
            CHECK(closure(t, cl) == cl);
            CHECK(rank_of(t, cl) == rank_of(t, a));
            CHECK(closure_from_table(table, t.size(), a) == cl);
        }
    }
}

TEST_CASE("closure absorbs repeated subspaces") {
    std::vector<Matrix<Rat>> gens{qmat(2, {{1, 0}}), qmat(2, {{1, 0}}), qmat(2, {{0, 1}})};
    auto t = make_subspace_tuple(gens, 2, RatCtx{});
    CHECK(closure(t, 0b001) == 0b011);
    CHECK(closure(t, 0b100) == 0b100);
    CHECK(closure(t, 0b011) == 0b011);
}

TEST_CASE("irreducibility: triangle passes, degenerate tuples name a witness") {
    auto tri = triangle_tuple();
    auto r = is_irreducible(tri);
    CHECK(r.ok);
    CHECK(!r.witness.has_value());

    auto pair = repeated_line_pair();
    auto rp = is_irreducible(pair);
    CHECK(!rp.ok);
    REQUIRE(rp.witness.has_value());
    CHECK(*rp.witness == 0b01);

    // Three lines in the plane: every singleton already has defect zero.
    std::vector<Matrix<Rat>> lines{qmat(2, {{1, 0}}), qmat(2, {{0, 1}}), qmat(2, {{1, 1}})};
    auto tl = make_subspace_tuple(lines, 2, RatCtx{});
    auto rl = is_irreducible(tl);
    CHECK(!rl.ok);
    CHECK(*rl.witness == 0b001);

    // Single-member tuples are vacuously irreducible.
    std::vector<Matrix<Rat>> one{qmat(2, {{1, 0}})};
    CHECK(is_irreducible(make_subspace_tuple(one, 2, RatCtx{})).ok);
}

TEST_CASE("zero-total-defect predicate with canonical witnesses") {
    CHECK(is_bk(triangle_tuple()).ok);

    auto pair = repeated_line_pair();
    auto rp = is_bk(pair);
    CHECK(!rp.ok);
    REQUIRE(rp.witness.has_value());
    CHECK(*rp.witness == 0b11);  // first negative-defect subset in scan order

    std::vector<Matrix<Rat>> lines{qmat(2, {{1, 0}}), qmat(2, {{0, 1}}), qmat(2, {{1, 1}})};
    auto rl = is_bk(make_subspace_tuple(lines, 2, RatCtx{}));
    CHECK(!rl.ok);
    CHECK(*rl.witness == 0b111);

    // Positive total defect: a single plane counts one member of rank two.
    std::vector<Matrix<Rat>> plane{qmat(3, {{1, 0, 0}, {0, 1, 0}})};
    auto rpl = is_bk(make_subspace_tuple(plane, 3, RatCtx{}));
    CHECK(!rpl.ok);
    CHECK(*rpl.witness == 0b1);

    std::vector<Matrix<Rat>> axes{qmat(2, {{1, 0}}), qmat(2, {{0, 1}})};
    CHECK(is_bk(make_subspace_tuple(axes, 2, RatCtx{})).ok);
}

TEST_CASE("enumeration caps reject oversize ground sets") {
    std::vector<Matrix<Rat>> many(21, qmat(1, {{1}}));
    auto t = make_subspace_tuple(many, 1, RatCtx{});
    CHECK_THROWS_AS(rank_table(t), InputError);
    CHECK_THROWS_AS(is_irreducible(t), InputError);
    std::vector<Matrix<Rat>> seventeen(17, qmat(1, {{1}}));
    auto t17 = make_subspace_tuple(seventeen, 1, RatCtx{});
    CHECK_THROWS_AS(flats_lattice(t17), InputError);
}

TEST_CASE("lattice of flats for the triangle has five elements") {
    auto lat = flats_lattice(triangle_tuple());
    REQUIRE(lat.flats.size() == 5);
    CHECK(lat.flats[0].mask == 0);
    CHECK(lat.flats[1].mask == 0b001);
    CHECK(lat.flats[2].mask == 0b010);
    CHECK(lat.flats[3].mask == 0b100);
    CHECK(lat.flats[4].mask == 0b111);
    CHECK(lat.flats[0].defect == 0);
    CHECK(lat.flats[1].defect == 1);
    CHECK(lat.flats[4].defect == 0);
    CHECK(lat.bottom == 0);
    CHECK(lat.top == 4);
    // Containments: the bottom sits under everything, singletons under the top.
    CHECK(lat.order.size() == 7);
}

TEST_CASE("lattice of flats collapses repeated subspaces") {
    auto lat = flats_lattice(repeated_line_pair());
    REQUIRE(lat.flats.size() == 2);
    CHECK(lat.flats[0].mask == 0);
    CHECK(lat.flats[1].mask == 0b11);
    CHECK(lat.bottom == 0);
    CHECK(lat.top == 1);
}

TEST_CASE("flats of random tuples are intersection-closed and closure-fixed") {
    Rng rng(derive_seed(555, 3));
    for (int trial = 0; trial < 8; ++trial) {
        auto t = random_tuple_q(rng, 4, 3, 2);
        auto lat = flats_lattice(t);  // throws CheckFailure on any violation
        for (const auto& f : lat.flats) CHECK(closure(t, f.mask) == f.mask);
        CHECK(lat.bottom >= 0);
        CHECK(lat.top >= 0);
    }
}

TEST_CASE("dual rank equality holds on curated and random tuples") {
    auto rep = verify_dual_equality(triangle_tuple());
    CHECK(rep.checked == 8);
    CHECK(rep.violations.empty());

    auto rep2 = verify_dual_equality(repeated_line_pair());
    CHECK(rep2.checked == 4);
    CHECK(rep2.violations.empty());

    Rng rng(derive_seed(555, 4));
    for (int trial = 0; trial < 6; ++trial) {
        auto t = random_tuple_q(rng, 3, 4, 3);
        auto r = verify_dual_equality(t);
        CHECK(r.checked == 8);
        CHECK(r.violations.empty());
    }
    for (int trial = 0; trial < 6; ++trial) {
        auto t = random_tuple_p(rng, 4, 3, 2, kP);
        auto r = verify_dual_equality(t);
        CHECK(r.checked == 16);
        CHECK(r.violations.empty());
    }
}

TEST_CASE("dual realization pairs primal bases with their annihilators") {
    auto t = triangle_tuple();
    auto d = dual_realization(t);
    REQUIRE(d.perp.size() == 3);
    for (std::size_t i = 0; i < d.perp.size(); ++i) {
        CHECK(d.perp[i].rows() + d.primal[i].rows() == t.ambient);
        auto prod = matmul(d.primal[i], transpose(d.perp[i]));
        for (int r = 0; r < prod.rows(); ++r)
            for (int c = 0; c < prod.cols(); ++c) CHECK(prod.at(r, c) == Rat(0));
    }
}
