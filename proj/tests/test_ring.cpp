#include <doctest.h>

#include <random>

#include "kiss3/ring.hpp"

using namespace kiss3;

namespace {

QuadInt random_elt(const Ring& rg, std::mt19937_64& rng, long range) {
    std::uniform_int_distribution<long> dist(-range, range);
    return QuadInt(rg, dist(rng), dist(rng));
}

} // namespace

TEST_CASE("ring construction accepts exactly the nine class-number-one d") {
    for (int d : kClassNumberOne) {
        Ring rg(d);
        CHECK(rg.d() == d);
        CHECK(rg.half_basis() == (d % 4 == 3));
        CHECK(rg.euclidean() == (d == 1 || d == 2 || d == 3 || d == 7 || d == 11));
        CHECK(rg.field_discriminant() == (d % 4 == 3 ? -d : -4 * d));
    }
    CHECK_THROWS_AS(Ring(5), usage_error);
    CHECK_THROWS_AS(Ring(0), usage_error);
    CHECK_THROWS_AS(Ring(-1), usage_error);
    CHECK_THROWS_AS(Ring(15), usage_error);
}

TEST_CASE("arithmetic worked examples") {
    Ring g1(1), g2(2), g3(3);
    // (1+w)(1-w) = 2 in Z[i]
    CHECK(QuadInt(g1, 1, 1) * QuadInt(g1, 1, -1) == QuadInt(g1, 2, 0));
    // w*w = -1 + w for d=3
    CHECK(omega(g3) * omega(g3) == QuadInt(g3, -1, 1));
    // w*w = -2 for d=2
    CHECK(omega(g2) * omega(g2) == QuadInt(g2, -2, 0));
    // mismatched rings are rejected
    CHECK_THROWS_AS(omega(g1) + omega(g2), usage_error);
}

TEST_CASE("norm worked examples") {
    CHECK(QuadInt(Ring(1), 1, 1).norm() == 2);
    CHECK(omega(Ring(3)).norm() == 1);
    CHECK(QuadInt(Ring(11), 3, 5).norm() == 99);
}

TEST_CASE("norm is multiplicative and conjugation involutive") {
    std::mt19937_64 rng(12345);
    for (int d : {1, 2, 3, 7, 19, 163}) {
        Ring rg(d);
        for (int i = 0; i < 250; ++i) {
            QuadInt x = random_elt(rg, rng, 50), y = random_elt(rg, rng, 50);
            CHECK((x * y).norm() == x.norm() * y.norm());
            CHECK(x.conj().conj() == x);
            CHECK(x * x.conj() == QuadInt(rg, x.norm(), 0));
            CHECK((x + x.conj()) == QuadInt(rg, x.trace(), 0));
        }
    }
}

TEST_CASE("sqrt_exact worked examples") {
    Ring g1(1);
    auto r = sqrt_exact(QuadInt(g1, 0, 2)); // 2i = (1+i)^2
    REQUIRE(r.has_value());
    CHECK(*r == QuadInt(g1, 1, 1));
    CHECK(!sqrt_exact(QuadInt(g1, 5, 0)).has_value());
    for (int d : kClassNumberOne) {
        Ring rg(d);
        auto z = sqrt_exact(zero(rg));
        REQUIRE(z.has_value());
        CHECK(z->is_zero());
    }
    // -1 = i^2 in Z[i]
    auto mi = sqrt_exact(QuadInt(g1, -1, 0));
    REQUIRE(mi.has_value());
    CHECK(*mi == omega(g1));
}

TEST_CASE("sqrt_exact round trip and soundness against brute force") {
    std::mt19937_64 rng(999);
    for (int d : {1, 2, 3, 7, 11, 43}) {
        Ring rg(d);
        for (int i = 0; i < 200; ++i) {
            QuadInt x = random_elt(rg, rng, 30);
            auto w = sqrt_exact(x * x);
            REQUIRE(w.has_value());
            CHECK(*w * *w == x * x);
        }
    }
    // absence is sound: brute-force check over the ball of candidate roots
    Ring g1(1);
    for (long a = -8; a <= 8; ++a) {
        for (long b = -8; b <= 8; ++b) {
            QuadInt z(g1, a, b);
            if (sqrt_exact(z)) continue;
            mpz_class radius = isqrt_floor(z.norm()) + 1;
            for (const QuadInt& c : lattice_ball(g1, radius))
                CHECK(!(c * c == z));
        }
    }
}

TEST_CASE("divide_exact worked examples and soundness") {
    Ring g1(1);
    auto q = divide_exact(QuadInt(g1, 1, 1), QuadInt(g1, 2, 0));
    REQUIRE(q.has_value());
    CHECK(*q == QuadInt(g1, 1, -1));
    CHECK(!divide_exact(QuadInt(g1, 5, 0), QuadInt(g1, 3, 0)).has_value());
    std::mt19937_64 rng(7);
    for (int d : {1, 2, 3, 19}) {
        Ring rg(d);
        for (int i = 0; i < 200; ++i) {
            QuadInt x = random_elt(rg, rng, 40);
            if (x.is_zero()) continue;
            QuadInt y = random_elt(rg, rng, 40);
            CHECK(*divide_exact(one(rg), y) == y);
            auto qq = divide_exact(x, x * y);
            REQUIRE(qq.has_value());
            CHECK(*qq == y);
            auto qr = divide_exact(x, y);
            if (qr) CHECK(*qr * x == y);
        }
    }
    CHECK_THROWS_AS(divide_exact(zero(g1), one(g1)), usage_error);
}

TEST_CASE("content worked examples") {
    Ring g1(1);
    auto as_vec = [&](std::initializer_list<QuadInt> xs) {
        return std::vector<QuadInt>(xs);
    };
    CHECK(content(as_vec({one(g1), one(g1), -one(g1)})) == one(g1));
    CHECK(content(as_vec({QuadInt(g1, 2, 0), QuadInt(g1, 4, 0), QuadInt(g1, 6, 0)})) ==
          QuadInt(g1, 2, 0));
    CHECK(content(as_vec({QuadInt(g1, 1, 1), QuadInt(g1, 2, 0), QuadInt(g1, 0, 2)})) ==
          QuadInt(g1, 1, 1));
    CHECK_THROWS_AS(content(as_vec({zero(g1), zero(g1)})), usage_error);
    Ring g19(19);
    CHECK_THROWS_AS(content(as_vec({one(g19), omega(g19)})), unsupported_error);
}

TEST_CASE("content divides inputs and quotients are coprime") {
    std::mt19937_64 rng(31337);
    for (int d : {1, 2, 3, 7, 11}) {
        Ring rg(d);
        for (int i = 0; i < 100; ++i) {
            std::vector<QuadInt> xs = {random_elt(rg, rng, 20), random_elt(rg, rng, 20),
                                       random_elt(rg, rng, 20)};
            if (xs[0].is_zero() && xs[1].is_zero() && xs[2].is_zero()) continue;
            QuadInt g = content(xs);
            std::vector<QuadInt> quotients;
            for (const QuadInt& x : xs) {
                auto q = divide_exact(g, x);
                REQUIRE(q.has_value());
                quotients.push_back(*q);
            }
            CHECK(content(quotients).is_unit());
        }
    }
}

TEST_CASE("lattice_ball worked examples") {
    Ring g1(1), g3(3);
    auto b1 = lattice_ball(g1, 1);
    CHECK(b1.size() == 5); // 0 and the four units
    auto b3 = lattice_ball(g3, 1);
    CHECK(b3.size() == 7); // 0 and the six units
    for (int d : kClassNumberOne) {
        auto b0 = lattice_ball(Ring(d), 0);
        REQUIRE(b0.size() == 1);
        CHECK(b0.front().is_zero());
    }
}

TEST_CASE("lattice_ball is nested, deduplicated, and counts match a double loop") {
    for (int d : {1, 2, 3, 7, 11, 19, 67}) {
        Ring rg(d);
        auto big = lattice_ball(rg, 60);
        auto small = lattice_ball(rg, 23);
        // nested: every small element appears in big
        for (const QuadInt& x : small) {
            CHECK(std::find(big.begin(), big.end(), x) != big.end());
            CHECK(x.norm() <= 23);
        }
        // direct double-loop count oracle
        long count = 0;
        for (long a = -70; a <= 70; ++a)
            for (long b = -70; b <= 70; ++b)
                if (QuadInt(rg, a, b).norm() <= 60) ++count;
        CHECK(count == static_cast<long>(big.size()));
        // no duplicates, sorted by (norm, a, b)
        for (size_t i = 1; i < big.size(); ++i) {
            int c = cmp(big[i - 1].norm(), big[i].norm());
            CHECK(c <= 0);
            if (c == 0) CHECK(big[i - 1].lex_less(big[i]));
        }
    }
}

TEST_CASE("canonical_associate picks the lexicographic maximum") {
    Ring g1(1);
    QuadInt x(g1, 0, -2); // associates: -2i, 2i, -2, 2
    CHECK(canonical_associate(x) == QuadInt(g1, 2, 0));
    Ring g3(3);
    for (const QuadInt& u : units(g3)) CHECK(canonical_associate(u) == one(g3));
}

TEST_CASE("string round trip") {
    Ring g1(1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        QuadInt x = random_elt(g1, rng, 1000);
        CHECK(QuadInt::parse(g1, x.str()) == x);
    }
    CHECK(QuadInt::parse(g1, "11*w") == QuadInt(g1, 0, 11));
    CHECK(QuadInt::parse(g1, "-3+2*w") == QuadInt(g1, -3, 2));
    CHECK(QuadInt::parse(g1, " 5 ") == QuadInt(g1, 5, 0));
    CHECK(QuadInt::parse(g1, "w") == omega(g1));
    CHECK(QuadInt::parse(g1, "-w") == -omega(g1));
    CHECK_THROWS_AS(QuadInt::parse(g1, "3i"), usage_error);
    CHECK_THROWS_AS(QuadInt::parse(g1, ""), usage_error);
}

TEST_CASE("complex embedding matches norm") {
    std::mt19937_64 rng(21);
    for (int d : {1, 2, 3, 163}) {
        Ring rg(d);
        for (int i = 0; i < 50; ++i) {
            QuadInt x = random_elt(rg, rng, 25);
            Cplx z = to_complex(x);
            Real nrm = z.re * z.re + z.im * z.im;
            CHECK(abs(nrm - to_real(x.norm())) < 1e-30);
        }
    }
}
