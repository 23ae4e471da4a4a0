#include "doctest.h"
#include "tslab/linspace.hpp"

#include <random>

using namespace tslab;

TEST_CASE("apply basics") {
    Func e3 = Func::ground0(3);
    CHECK(apply(e3, Vec00::unit(3)) == 1);
    CHECK(apply(e3, Vec00::unit(4)) == 0);
    Func half;
    half.v.set(1, Rat(1, 2));
    half.v.set(2, Rat(1, 2));
    Vec00 x = Vec00::unit(1) + Vec00::unit(2);
    CHECK(apply(half, x) == 1);
}

TEST_CASE("restriction") {
    Func f;
    f.v.set(1, Rat(1));
    f.v.set(5, Rat(1));
    CHECK(restrict_func(f, Interval{2, 9}).v == Vec00::unit(5));
    Vec00 x;
    x.set(2, Rat(3, 4));
    x.set(7, Rat(-1, 3));
    CHECK(restrict_vec(x, Interval{1, kNoBound}) == x);
}

TEST_CASE("restriction is idempotent and commutes with apply") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Vec00 x, fv;
        for (int i = 1; i <= 10; ++i) {
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4));
            if (rng() % 2) fv.set(i, Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4));
        }
        Interval e{2 + static_cast<int>(rng() % 3), 5 + static_cast<int>(rng() % 5)};
        Func f;
        f.v = fv;
        CHECK(restrict_vec(restrict_vec(x, e), e) == restrict_vec(x, e));
        CHECK(restrict_func(f, e).v.dot(x) == fv.dot(restrict_vec(x, e)));
    }
}

TEST_CASE("duality bound |f(x)| <= ||f||_inf ||x||_1") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        Vec00 x, fv;
        for (int i = 1; i <= 8; ++i) {
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 17) - 8, 1 + rng() % 8));
            if (rng() % 2) fv.set(i, Rat(static_cast<long>(rng() % 17) - 8, 1 + rng() % 8));
        }
        CHECK(rat_abs(fv.dot(x)) <= fv.linfty() * x.l1());
    }
}

TEST_CASE("canonical serialization determinism and sign injectivity") {
    Func e2 = Func::ground0(2);
    Func me2 = Func::ground0(2, -1);
    CHECK(canonical_serialize(e2) == canonical_serialize(e2));
    CHECK(canonical_serialize(e2) != canonical_serialize(me2));
}

TEST_CASE("serialization round trip on random functionals") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 2000; ++trial) {
        Func f;
        for (int i = 1; i <= 12; ++i)
            if (rng() % 3 == 0) f.v.set(i, Rat(static_cast<long>(rng() % 33) - 16, 1 + rng() % 16));
        switch (rng() % 4) {
            case 0:
                f.tag = FuncTag::Ground;
                f.gkind = static_cast<GroundKind>(rng() % 6);
                break;
            case 1:
                f.tag = FuncTag::TypeI;
                f.index = 1 + static_cast<int>(rng() % 9);
                f.odd_squared = rng() % 2;
                break;
            case 2:
                f.tag = FuncTag::TypeII;
                break;
            default:
                f.tag = FuncTag::TypeIII;
                break;
        }
        if (rng() % 4 == 0) f.ind_set = {1 + static_cast<int>(rng() % 5), 7 + static_cast<int>(rng() % 5)};
        if (rng() % 5 == 0) f.analysis_hash = hex64(rng());
        Func g = parse_func(canonical_serialize(f));
        CHECK(g == f);
        CHECK(canonical_serialize(g) == canonical_serialize(f));
    }
}

TEST_CASE("prefix serialization round trip") {
    std::vector<Func> prefix;
    Func a = Func::ground0(1);
    Func b;
    b.v.set(3, Rat(1, 4));
    b.v.set(4, Rat(-1, 4));
    b.tag = FuncTag::TypeI;
    b.index = 2;
    b.odd_squared = true;
    prefix.push_back(a);
    prefix.push_back(b);
    auto round = parse_prefix(serialize_prefix(prefix));
    REQUIRE(round.size() == 2);
    CHECK(round[0] == a);
    CHECK(round[1] == b);
}

TEST_CASE("zero entries are never stored") {
    Vec00 v;
    v.set(3, Rat(1, 2));
    v.add(3, Rat(-1, 2));
    CHECK(v.is_zero());
    CHECK(v.support_size() == 0);
}
