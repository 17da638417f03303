#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "kiss3/congruence.hpp"
#include "kiss3/geom.hpp"

using namespace kiss3;
using kiss3::testing::brute_sl2_order;
using kiss3::testing::principal_level_generators;
using kiss3::testing::random_word;

TEST_CASE("Mat2 basics") {
    Ring g1(1);
    Mat2 id = Mat2::identity(g1);
    CHECK(id * id == id);
    CHECK_THROWS_AS(Mat2(one(g1), one(g1), one(g1), one(g1)), usage_error);
    for (const Mat2& g : sl2_generators(g1)) {
        CHECK(g * g.inverse() == id);
        CHECK(g.pow(3) == g * g * g);
    }
}

TEST_CASE("residue systems reduce canonically") {
    Ring g1(1);
    QuadInt five_i(g1, 0, 5);
    ResidueSystem rs(five_i);
    CHECK(rs.size() == 25);
    CHECK(rs.reduce(QuadInt(g1, 0, 8)) == QuadInt(g1, 0, 3));
    CHECK(rs.reduce(QuadInt(g1, 0, 5)).is_zero());
    CHECK(rs.all().size() == 25);
    // reduction is idempotent and respects the ideal
    std::mt19937_64 rng(11);
    for (int d : {1, 2, 3, 7, 19}) {
        Ring rg(d);
        std::uniform_int_distribution<long> dist(-30, 30);
        QuadInt mu(rg, dist(rng), dist(rng));
        if (mu.is_zero()) continue;
        ResidueSystem rsys(mu);
        CHECK(rsys.size() == mu.norm());
        for (int i = 0; i < 50; ++i) {
            QuadInt x(rg, dist(rng), dist(rng));
            QuadInt r = rsys.reduce(x);
            CHECK(rsys.reduce(r) == r);
            CHECK(divide_exact(mu, x - r).has_value());
        }
    }
}

TEST_CASE("factorization worked examples over Z[i]") {
    Ring g1(1);
    // 2 = unit * (1+i)^2
    ResidueRing f2 = factor_modulus(QuadInt(g1, 2, 0));
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0].exponent == 2);
    CHECK(f2.factors[0].residue_norm == 2);
    CHECK(f2.factors[0].prime == QuadInt(g1, 1, 1));
    // 2+i is prime of norm 5
    ResidueRing f5 = factor_modulus(QuadInt(g1, 2, 1));
    REQUIRE(f5.factors.size() == 1);
    CHECK(f5.factors[0].exponent == 1);
    CHECK(f5.factors[0].residue_norm == 5);
    // 5i splits into the two conjugate primes above 5
    ResidueRing f5i = factor_modulus(QuadInt(g1, 0, 5));
    REQUIRE(f5i.factors.size() == 2);
    CHECK(f5i.factors[0].exponent == 1);
    CHECK(f5i.factors[1].exponent == 1);
    CHECK(f5i.factors[0].residue_norm == 5);
    CHECK(f5i.factors[1].residue_norm == 5);
    CHECK(f5i.factors[0].prime * f5i.factors[1].prime * f5i.unit == QuadInt(g1, 0, 5));

    CHECK_THROWS_AS(factor_modulus(zero(g1)), usage_error);
    CHECK_THROWS_AS(factor_modulus(omega(g1)), usage_error);
}

TEST_CASE("factorization reconstructs the element") {
    std::mt19937_64 rng(77);
    for (int d : {1, 2, 3, 7, 11, 19, 43}) {
        Ring rg(d);
        std::uniform_int_distribution<long> dist(-40, 40);
        for (int i = 0; i < 60; ++i) {
            QuadInt x(rg, dist(rng), dist(rng));
            if (x.is_zero()) continue;
            ResidueRing f = factor_element(x);
            QuadInt prod = f.unit;
            for (const auto& pp : f.factors)
                for (int k = 0; k < pp.exponent; ++k) prod = prod * pp.prime;
            CHECK(prod == x);
            CHECK(f.unit.is_unit());
        }
    }
}

TEST_CASE("sl2 order formula matches worked examples and brute force") {
    Ring g1(1);
    CHECK(sl2_order(factor_modulus(QuadInt(g1, 1, 1))) == 6);   // SL2(F_2)
    CHECK(sl2_order(factor_modulus(QuadInt(g1, 2, 0))) == 48);
    CHECK(sl2_order(factor_modulus(QuadInt(g1, 2, 1))) == 120); // SL2(F_5)
    CHECK(sl2_order(factor_modulus(QuadInt(g1, 0, 5))) == 14400);
    // brute-force oracle on small moduli
    for (int d : {1, 2, 3}) {
        Ring rg(d);
        for (const QuadInt& u : lattice_ball(rg, 10)) {
            if (u.is_zero() || u.is_unit()) continue;
            CHECK(sl2_order(factor_modulus(u)) == brute_sl2_order(u));
        }
    }
}

TEST_CASE("matrix reduction worked examples and homomorphism") {
    Ring g1(1);
    QuadInt five(g1, 5, 0), w5(g1, 0, 5);
    Mat2 id = Mat2::identity(g1);
    CHECK(reduce_mat(id, five) == reduce_mat(id, QuadInt(g1, 3, 1)));
    Mat2 unip(one(g1), w5, zero(g1), one(g1));
    ResidueMat r = reduce_mat(unip, w5);
    CHECK(r.p.is_one());
    CHECK(r.q.is_zero());
    Mat2 m(QuadInt(g1, 0, 3), QuadInt(g1, 0, 5), QuadInt(g1, 0, 5), QuadInt(g1, 0, 8));
    ResidueMat rm = reduce_mat(m, five);
    CHECK(rm.p == QuadInt(g1, 0, 3));
    CHECK(rm.q.is_zero());
    CHECK(rm.r.is_zero());
    CHECK(rm.s == QuadInt(g1, 0, 3));

    std::mt19937_64 rng(123);
    auto gens = sl2_generators(g1);
    ResidueSystem rs(QuadInt(g1, 3, 2));
    for (int i = 0; i < 300; ++i) {
        Mat2 a = random_word(gens, rng, 6), b = random_word(gens, rng, 6);
        ResidueMat ab = reduce_mat(a * b, rs);
        // multiply reductions, then reduce again
        QuadInt p = rs.reduce(rs.reduce(a.p()) * rs.reduce(b.p()) +
                              rs.reduce(a.q()) * rs.reduce(b.r()));
        QuadInt q = rs.reduce(rs.reduce(a.p()) * rs.reduce(b.q()) +
                              rs.reduce(a.q()) * rs.reduce(b.s()));
        QuadInt rr = rs.reduce(rs.reduce(a.r()) * rs.reduce(b.p()) +
                               rs.reduce(a.s()) * rs.reduce(b.r()));
        QuadInt s = rs.reduce(rs.reduce(a.r()) * rs.reduce(b.q()) +
                              rs.reduce(a.s()) * rs.reduce(b.s()));
        CHECK(ab.p == p);
        CHECK(ab.q == q);
        CHECK(ab.r == rr);
        CHECK(ab.s == s);
    }
}

TEST_CASE("level construction for the worked triple (11i, 5i, 5)") {
    Ring g1(1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    CHECK(level.tau == QuadInt(g1, 0, 3));
    CHECK(!level.degenerate);
    // unit modulus is rejected
    auto D96 = make_discriminant(QuadInt(g1, 96, 0));
    CHECK_THROWS_AS(make_level(QuadInt(g1, 10, 0), one(g1), *D96), usage_error);
}

TEST_CASE("membership classification") {
    Ring g1(1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    CHECK(member(Mat2::identity(g1), level) == Membership::Principal);
    Mat2 witness(QuadInt(g1, 0, 3), QuadInt(g1, 0, 5), QuadInt(g1, 0, 5),
                 QuadInt(g1, 0, 8));
    CHECK(member(witness, level) == Membership::TauCoset);
    Mat2 t1(one(g1), one(g1), zero(g1), one(g1));
    CHECK(member(t1, level) == Membership::No);
}

TEST_CASE("level group is closed under products, with coset arithmetic") {
    Ring g1(1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    Mat2 coset_rep(QuadInt(g1, 0, 3), QuadInt(g1, 0, 5), QuadInt(g1, 0, 5),
                   QuadInt(g1, 0, 8));
    std::mt19937_64 rng(314);
    auto gens = principal_level_generators(level.u);
    for (int i = 0; i < 100; ++i) {
        Mat2 a = random_word(gens, rng, 5);
        Mat2 b = random_word(gens, rng, 5);
        CHECK(member(a, level) == Membership::Principal);
        Mat2 ac = a * coset_rep, ca = coset_rep * a;
        CHECK(member(ac, level) == Membership::TauCoset);
        CHECK(member(ca, level) == Membership::TauCoset);
        CHECK(member(ac * ca, level) == Membership::Principal); // tau^2 = 1
        CHECK(member(ac.inverse(), level) == Membership::TauCoset);
        CHECK(member(a * b, level) == Membership::Principal);
    }
}

TEST_CASE("trace congruence mod u^2") {
    Ring g1(1);
    QuadInt u(g1, 1, 1);
    Mat2 elem(one(g1), u, zero(g1), one(g1));
    CHECK(trace_congruence_check(elem, u));
    Mat2 prod(one(g1), u, u, one(g1) + u * u);
    CHECK(trace_congruence_check(prod, u));
    Mat2 t1(one(g1), one(g1), zero(g1), one(g1));
    CHECK_THROWS_AS(trace_congruence_check(t1, QuadInt(g1, 0, 5)), usage_error);

    std::mt19937_64 rng(2024);
    for (long ub : {0L, 1L}) {
        QuadInt mod(g1, 1 + ub, 1); // 1+i and 2+i
        auto gens = principal_level_generators(mod);
        for (int i = 0; i < 100; ++i)
            CHECK(trace_congruence_check(random_word(gens, rng, 8), mod));
    }
}

TEST_CASE("level index worked examples") {
    Ring g1(1);
    // (t, u, D) = (11i, 2+i, -15+20i) solves the Pell equation
    auto D = make_discriminant(QuadInt(g1, -15, 20));
    REQUIRE(D.has_value());
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 2, 1), *D);
    CHECK(!level.degenerate);
    LevelIndex idx = level_index(level);
    CHECK(idx.index == 60); // |SL2(F_5)| / 2

    auto D5 = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel l5 = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D5);
    CHECK(level_index(l5).index == 7200);
}

TEST_CASE("systole certificate at small heights") {
    Ring g1(1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    QuadInt t(g1, 0, 11);

    SystoleCertificate vac = systole_certificate(level, t, 40);
    CHECK(vac.vacuous);
    CHECK(vac.violations == 0);
    CHECK(!vac.min_ell.has_value());

    SystoleCertificate cert = systole_certificate(level, t, 64);
    CHECK(!cert.vacuous);
    CHECK(cert.violations == 0);
    REQUIRE(cert.min_ell.has_value());
    double expected = acosh(Real("61.5")).convert_to<double>();
    CHECK(std::abs(*cert.min_ell - expected) < 1e-9);
    Mat2 witness(QuadInt(g1, 0, 3), QuadInt(g1, 0, 5), QuadInt(g1, 0, 5),
                 QuadInt(g1, 0, 8));
    bool found = false;
    for (const Mat2& M : cert.min_witnesses)
        if (M == witness) found = true;
    CHECK(found);
    // frozen from an independent four-entry brute-force enumeration
    CHECK(cert.loxodromic == 12);
    CHECK(cert.members_checked == 61);
    CHECK(cert.elliptic == 0);
    CHECK(cert.min_witnesses.size() == 8);

    // workers do not change the outcome
    SystoleCertificate cert4 = systole_certificate(level, t, 64, 4);
    CHECK(cert4.members_checked == cert.members_checked);
    CHECK(cert4.loxodromic == cert.loxodromic);
    CHECK(*cert4.min_ell == *cert.min_ell);
    REQUIRE(cert4.min_witnesses.size() == cert.min_witnesses.size());
    for (size_t i = 0; i < cert.min_witnesses.size(); ++i)
        CHECK(cert4.min_witnesses[i] == cert.min_witnesses[i]);

    // hypothesis violations are rejected
    CHECK_THROWS_AS(systole_certificate(level, QuadInt(g1, 3, 0), 64), usage_error);
}

TEST_CASE("torsion scan certifies the worked level") {
    Ring g1(1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    TorsionReport rep = torsion_scan(level);
    CHECK(rep.certified);
    CHECK(rep.strong_coset_constraint);
    CHECK(rep.principal_candidates.empty());
    CHECK(rep.coset_candidates.empty());
}

TEST_CASE("torsion scan for a level with modulus 2") {
    Ring g1(1);
    // (4, 2, 3) solves t^2 - D u^2 = 4 with D = 3 = w^2 + 4
    auto D = make_discriminant(QuadInt(g1, 3, 0));
    REQUIRE(D.has_value());
    CHECK(D->witness == omega(g1));
    CongruenceLevel level = make_level(QuadInt(g1, 4, 0), QuadInt(g1, 2, 0), *D);
    CHECK(level.tau == omega(g1));
    TorsionReport rep = torsion_scan(level);
    // principal traces 2 mod 4 miss (-2,2); the coset admits the residue 0
    CHECK(rep.principal_candidates.empty());
    REQUIRE(rep.coset_candidates.size() == 1);
    CHECK(rep.coset_candidates[0].is_zero());
    CHECK(!rep.certified);
}

TEST_CASE("conjugating witness search") {
    Ring g1(1);
    auto gens = sl2_generators(g1);
    std::mt19937_64 rng(555);
    for (int i = 0; i < 20; ++i) {
        Mat2 A = random_word(gens, rng, 4);
        Mat2 W = random_word(gens, rng, 2);
        Mat2 B = W * A * W.inverse();
        auto found = conjugating_witness(A, B, 3);
        REQUIRE(found.has_value());
        CHECK(*found * A * found->inverse() == B);
    }
    // A and a different-trace matrix are never conjugate
    Mat2 A(one(g1), one(g1), zero(g1), one(g1));
    Mat2 B(QuadInt(g1, 2, 0), one(g1), one(g1), one(g1)); // trace 3
    CHECK(B.trace() != A.trace());
    CHECK(!conjugating_witness(A, B, 2).has_value());
}
