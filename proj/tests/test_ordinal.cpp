#include "doctest.h"
#include "tslab/ordinal.hpp"

#include <random>

using namespace tslab;

TEST_CASE("ordinal comparison basics") {
    CHECK(Ordinal::omega().compare(Ordinal(5)) > 0);
    Ordinal w2p1 = Ordinal::from_terms({{1, 2}, {0, 1}});  // w*2+1
    CHECK(w2p1.compare(w2p1) == 0);
    Ordinal w_sq = Ordinal::omega_pow(2);
    Ordinal w9p7 = Ordinal::from_terms({{1, 9}, {0, 7}});
    CHECK(w_sq.compare(w9p7) > 0);
    CHECK(Ordinal().compare(Ordinal(1)) < 0);
}

TEST_CASE("ordinal total order on random triples") {
    std::mt19937_64 rng(42);
    auto random_ord = [&]() {
        std::vector<Ordinal::Term> terms;
        int exp = 4;
        while (exp >= 0 && terms.size() < 3) {
            if (rng() % 2) terms.push_back({static_cast<std::uint32_t>(exp), 1 + rng() % 3});
            --exp;
        }
        return terms.empty() ? Ordinal(rng() % 5) : Ordinal::from_terms(terms);
    };
    for (int trial = 0; trial < 500; ++trial) {
        Ordinal a = random_ord(), b = random_ord(), c = random_ord();
        // antisymmetry
        CHECK(a.compare(b) == -b.compare(a));
        // transitivity
        if (a.compare(b) <= 0 && b.compare(c) <= 0) CHECK(a.compare(c) <= 0);
    }
}

TEST_CASE("fundamental sequence canonical values") {
    CHECK(fundamental_sequence(Ordinal::omega(), 3) == Ordinal(3));
    CHECK(fundamental_sequence(Ordinal::omega_pow(2), 2) == Ordinal::from_terms({{1, 2}}));
    Ordinal w2 = Ordinal::from_terms({{1, 2}});  // w*2
    CHECK(fundamental_sequence(w2, 5) == Ordinal::from_terms({{1, 1}, {0, 5}}));
}

TEST_CASE("fundamental sequence monotone below xi over a grid") {
    // all limit ordinals with exponent <= 3, coefficients <= 3
    std::vector<Ordinal> grid;
    for (std::uint32_t e3 = 0; e3 <= 3; ++e3)
        for (std::uint32_t e2 = 0; e2 <= 3; ++e2)
            for (std::uint32_t e1 = 0; e1 <= 3; ++e1) {
                std::vector<Ordinal::Term> terms;
                if (e3) terms.push_back({3, e3});
                if (e2) terms.push_back({2, e2});
                if (e1) terms.push_back({1, e1});
                if (terms.empty()) continue;
                grid.push_back(Ordinal::from_terms(terms));
            }
    for (const auto& xi : grid) {
        REQUIRE(xi.is_limit());
        for (std::uint64_t n = 1; n <= 20; ++n) {
            Ordinal a = fundamental_sequence(xi, n);
            Ordinal b = fundamental_sequence(xi, n + 1);
            CHECK(a < b);
            CHECK(b < xi);
        }
    }
}

TEST_CASE("fundamental sequence rejects non-limits") {
    CHECK_THROWS_AS(fundamental_sequence(Ordinal(3), 1), PreconditionError);
    CHECK_THROWS_AS(fundamental_sequence(Ordinal(), 1), PreconditionError);
    CHECK_THROWS_AS(fundamental_sequence(Ordinal::omega(), 0), PreconditionError);
}

TEST_CASE("ordinal text syntax round-trips bit-exactly") {
    for (const std::string s : {"0", "4", "w*1", "w*2+1", "w^2*3+w*1+4", "w^3*1+2"}) {
        Ordinal o = Ordinal::parse(s);
        CHECK(o.str() == s);
        CHECK(Ordinal::parse(o.str()) == o);
    }
    CHECK(Ordinal::parse("w") == Ordinal::omega());
    CHECK(Ordinal::parse("w^2") == Ordinal::omega_pow(2));
    CHECK_THROWS_AS(Ordinal::parse("q"), UsageError);
    CHECK_THROWS_AS(Ordinal::parse("w+"), UsageError);
}
