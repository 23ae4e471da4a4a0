#include "doctest.h"
#include "tslab/coding.hpp"
#include "tslab/config.hpp"
#include "tslab/norming.hpp"

#include <cstdio>

using namespace tslab;

TEST_CASE("paper profile arithmetic facts") {
    ParameterProfile p = ParameterProfile::paper();
    CHECK(p.m_pow2(2).exponent == 25);   // m_2 = 2^25
    CHECK(p.s(1) == 75);                 // 2^{s_1} = m_2^3
    CHECK(p.n_pow2(2).exponent == 525);  // n_2 = (2 n_1)^{s_1}
    CHECK(p.m_int(1) == 32);
    CHECK(p.n_int(1) == 64);
    CHECK(p.check_growth_260m4(2));
    CHECK(p.check_growth_260m4(3));
}

TEST_CASE("paper c0 is 2^-10 + 2^-50 within the certified tail") {
    ParameterProfile p = ParameterProfile::paper();
    Rat expected = Rat(1, BigInt(1) << 10) + Rat(1, BigInt(1) << 50);
    CHECK(p.c0() == expected);
    Rat tail = p.c0_upper() - p.c0();
    CHECK(tail > 0);
    CHECK(tail < Rat(1, BigInt(1) << 64));
    CHECK(p.c0_upper() < 1);
}

TEST_CASE("profile validation rejects bad data") {
    CHECK_THROWS_AS(ParameterProfile::mini("bad", {2, 2}, {4, 6}), PreconditionError);
    CHECK_THROWS_AS(ParameterProfile::mini("bad", {2, 4}, {4, 5}), PreconditionError);
    CHECK_THROWS_AS(ParameterProfile::mini("bad", {1, 4}, {4, 6}), PreconditionError);
    // c0 >= 1
    CHECK_THROWS_AS(ParameterProfile::mini("bad", {2, 3, 4}, {2, 4, 6}, {}, {"growth_260m4"}),
                    PreconditionError);
    // failing growth facts must be waived
    CHECK_THROWS_AS(ParameterProfile::mini("bad", {4, 8, 16, 32}, {4, 6, 8, 10}), PreconditionError);
    CHECK_NOTHROW(ParameterProfile::mini("ok", {4, 8, 16, 32}, {4, 6, 8, 10}, {}, {"growth_260m4"}));
}

TEST_CASE("builtin profiles load") {
    for (const auto& name : builtin_profile_names()) CHECK_NOTHROW(builtin_profile(name));
    ParameterProfile mini = builtin_profile("mini");
    CHECK(mini.c0() < 1);
    CHECK(mini.c1_sq() == Rat(1) / (Rat(1) - mini.c0()));
}

TEST_CASE("lambda partition is a partition with O(1) membership") {
    for (int k = 1; k <= 10000; ++k) {
        int i = LambdaPartition::class_of(k);
        CHECK(LambdaPartition::lambda_member(i, k));
        // exactly one class
        for (int other = 1; other <= 6; ++other)
            if (other != i) CHECK_FALSE(LambdaPartition::lambda_member(other, k));
    }
    // Lambda_i elements enumerate correctly
    CHECK(LambdaPartition::element(1, 1) == 1);
    CHECK(LambdaPartition::element(1, 2) == 3);
    CHECK(LambdaPartition::element(3, 1) == 4);
    CHECK(LambdaPartition::element(3, 2) == 12);
}

TEST_CASE("L meets every class and leaves an infinite complement") {
    int in_l = 0, out_l = 0, l_in_lambda3 = 0;
    for (int k = 1; k <= 10000; ++k) {
        if (LambdaPartition::l_member(k)) {
            ++in_l;
            if (LambdaPartition::class_of(k) == 3) ++l_in_lambda3;
        } else {
            ++out_l;
        }
    }
    CHECK(in_l > 0);
    CHECK(out_l > 0);
    CHECK(l_in_lambda3 > 0);
}

TEST_CASE("sigma1 allocation: functionality, monotonicity, injectivity") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    Rat m1 = p.m(1);
    Vec00 v1;
    v1.set(2, Rat(1) / (m1 * m1));
    v1.set(3, Rat(1) / (m1 * m1));
    Func f1 = Func::g1(v1, 1);
    int a = reg.sigma1_assign({f1}, p);
    CHECK(a == reg.sigma1_assign({f1}, p));  // same prefix, same value
    CHECK(CodingRegistry::m2_member(a));

    Rat ma = p.m(2 * a - 1);
    Vec00 v2;
    v2.set(5, Rat(1) / (ma * ma));
    Func f2 = Func::g1(v2, a);
    int b = reg.sigma1_assign({f1, f2}, p);
    CHECK(b > a);  // monotone along prefixes

    Vec00 v1b;
    v1b.set(4, Rat(1) / (m1 * m1));
    Func f1b = Func::g1(v1b, 1);
    int c = reg.sigma1_assign({f1b}, p);
    CHECK(c != a);  // injective

    // the parent of an extension must already be assigned
    Vec00 v9;
    v9.set(9, Rat(1) / (p.m(2 * c - 1) * p.m(2 * c - 1)));
    CHECK_THROWS_AS(reg.sigma1_assign({f1, f2, Func::g1(v9, b), Func::g1(v9, b + 2)}, p),
                    PreconditionError);
}

TEST_CASE("sigma allocation satisfies the growth inequality") {
    // profile with one large m value so the constraint is satisfiable
    ParameterProfile p = ParameterProfile::mini("sig", {4, 8, 16, 64, 256, 1024, 4096, 16384},
                                                {4, 6, 8, 10, 12, 14, 16, 18}, {}, {"growth_260m4"});
    CodingRegistry reg;
    Func f;
    f.v.set(9, Rat(1, 4));
    f.v.set(10, Rat(1, 4));
    // prefix with maxsupp 10 and smallest coefficient 1/4: the growth bound
    // is 40, and the allocator must land on j with m_{2j}^(1/2) > 40
    int v = reg.sigma_assign({f}, p);
    CHECK(v == 4);  // m_8 = 16384, sqrt = 128 > 40; smaller even candidates fail
    CHECK(reg.sigma_growth_ok({f}, v, p));
    CHECK_FALSE(reg.sigma_growth_ok({f}, 2, p));

    // exhaustion: no admissible value within the horizon
    ParameterProfile small = ParameterProfile::mini("small", {4, 8}, {4, 6}, {}, {"growth_260m4"});
    CodingRegistry reg2;
    CHECK_THROWS_AS(reg2.sigma_assign({f}, small), ResourceCapError);
}

TEST_CASE("registry persistence round trip is byte-exact") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    Rat m1 = p.m(1);
    Vec00 v1;
    v1.set(2, Rat(1) / (m1 * m1));
    Func f1 = Func::g1(v1, 1);
    reg.sigma1_assign({f1}, p);
    Func q;
    q.v.set(3, Rat(1, 2));
    reg.sigma_assign({q}, p);

    std::string path = "/tmp/tslab_registry_test.tsv";
    reg.save(path);
    CodingRegistry loaded = CodingRegistry::load(path);
    CHECK(loaded.canonical_dump() == reg.canonical_dump());
    loaded.save(path + "2");
    CodingRegistry loaded2 = CodingRegistry::load(path + "2");
    CHECK(loaded2.canonical_dump() == reg.canonical_dump());
    std::remove(path.c_str());
    std::remove((path + "2").c_str());

    // sigma1 entries replay identically from the persisted registry
    CHECK(loaded.sigma1_lookup({f1}).value() == reg.sigma1_lookup({f1}).value());
}

TEST_CASE("config round trip") {
    Config c;
    c.profile = "micro";
    c.seed = 99;
    Config::MiniSpec spec;
    spec.m = {4, 8, 16};
    spec.n = {4, 6, 8};
    spec.waived = {"growth_260m4"};
    c.custom_profiles["tiny"] = spec;
    Config d = Config::parse(c.str());
    CHECK(d.profile == "micro");
    CHECK(d.seed == 99);
    CHECK(d.str() == c.str());
    ParameterProfile p = d.resolve_profile("tiny");
    CHECK(p.horizon() == 3);
}
