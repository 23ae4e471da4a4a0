#include "doctest.h"
#include "tslab/config.hpp"
#include "tslab/norm_engine.hpp"

#include <random>

using namespace tslab;

namespace {

Vec00 flat(int from, int count, const Rat& coeff) {
    Vec00 v;
    for (int i = 0; i < count; ++i) v.set(from + i, coeff);
    return v;
}

}  // namespace

TEST_CASE("ground norm of basis vectors") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    NormResult r = eng.ground_norm(Vec00::unit(5));
    CHECK(r.lower == ExactValue::of_rational(Rat(1)));
    CHECK(r.upper == r.lower);
    CHECK(r.prov == Provenance::Exhaustive);
    CHECK(eval_witness(r, Vec00::unit(5)) == r.lower);
}

TEST_CASE("ground norm layers on a flat average") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    // x = (1/2)(e1+e2): G0 layer dominates at the micro profile
    Vec00 x = flat(1, 2, Rat(1, 2));
    NormResult r = eng.ground_norm(x);
    CHECK(r.lower == ExactValue::of_rational(Rat(1, 2)));
    CHECK(eval_witness(r, x) == r.lower);
}

TEST_CASE("witness evaluates exactly to the lower bound") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        Vec00 x;
        for (int i = 1; i <= 9; ++i)
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4));
        if (x.is_zero()) continue;
        NormResult r = eng.ground_norm(x);
        CHECK(eval_witness(r, x) == r.lower);
        CHECK(r.lower <= r.upper);
    }
}

TEST_CASE("triangle inequality and homogeneity of the ground norm") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        Vec00 x, y;
        for (int i = 1; i <= 7; ++i) {
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3));
            if (rng() % 2) y.set(i, Rat(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3));
        }
        ExactValue nx = eng.ground_norm(x).lower;
        ExactValue ny = eng.ground_norm(y).lower;
        ExactValue nxy = eng.ground_norm(x + y).lower;
        // compare via rounded rationals; exact values, directed rounding
        CHECK(nxy.lower_rat() <= nx.upper_rat() + ny.upper_rat());
        Rat c(3, 2);
        ExactValue nsx = eng.ground_norm(x.scaled(c)).lower;
        CHECK(nsx.square == nx.square * c * c);
    }
}

TEST_CASE("bimonotonicity under interval restriction") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        Vec00 x;
        for (int i = 1; i <= 8; ++i)
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4));
        if (x.is_zero()) continue;
        Interval e{1 + static_cast<int>(rng() % 4), 4 + static_cast<int>(rng() % 5)};
        Vec00 xe = x.restrict_to(e);
        CHECK(eng.ground_norm(xe).lower <= eng.ground_norm(x).lower);
        NormResult re = eng.extension_norm(xe, rules, 2);
        NormResult rf = eng.extension_norm(x, rules, 2);
        CHECK(re.lower <= rf.lower);
        CHECK(re.upper.upper_rat() <= rf.upper.upper_rat() + Rat(1, 1000000000));
    }
}

TEST_CASE("extension norm basics") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    // basis normalization at any depth
    for (int d = 0; d <= 3; ++d) {
        NormResult r = eng.extension_norm(Vec00::unit(3), rules, d);
        CHECK(r.lower == ExactValue::of_rational(Rat(1)));
        CHECK(r.upper == r.lower);
        CHECK(r.prov == Provenance::Exhaustive);
    }
}

TEST_CASE("depth monotonicity of the saturation lower bound") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        Vec00 x;
        for (int i = 1; i <= 6; ++i)
            if (rng() % 2) x.set(i, Rat(static_cast<long>(rng() % 9) - 4, 1 + rng() % 4));
        if (x.is_zero()) continue;
        ExactValue prev;
        for (int d = 0; d <= 3; ++d) {
            NormResult r = eng.extension_norm(x, rules, d);
            CHECK(prev <= r.lower);
            CHECK(r.lower <= r.upper);
            prev = r.lower;
        }
        // the ground norm never exceeds the extension lower bound
        CHECK(eng.ground_norm(x).lower <= eng.extension_norm(x, rules, 1).lower);
    }
}

TEST_CASE("even-operation lower bound on a long flat average") {
    ParameterProfile p = builtin_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    // x = (1/n_2) sum of n_2 unit vectors: the even operation at index 2
    // gives at least 1/m_2
    long n2 = static_cast<long>(p.n_int(2));
    Vec00 x = flat(1, static_cast<int>(n2), Rat(1, n2));
    NormResult r = eng.extension_norm(x, rules, 1);
    CHECK(ExactValue::of_rational(Rat(1) / p.m(2)) <= r.lower);
}

TEST_CASE("extension equals the literal saturation recursion at the micro profile") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        Vec00 x;
        int pos = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < 4; ++i) {
            Rat c(static_cast<long>(rng() % 9) - 4, 4);
            if (c != 0) x.set(pos, c);
            pos += 1 + static_cast<int>(rng() % 2);
        }
        if (x.is_zero()) continue;
        for (int d = 0; d <= 3; ++d) {
            CHECK(eng.extension_norm(x, rules, d).lower == eng.exhaustive_saturation_value(x, rules, d));
        }
    }
}

TEST_CASE("l2 layer against a rational-coefficient grid") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    // two-block vector: closed form vs grid over rational lambda
    Vec00 x;
    x.set(1, Rat(1));
    x.set(2, Rat(1));
    x.set(4, Rat(1));
    NormResult r = eng.ground_norm(x);
    // grid over lambda_1^2 + lambda_2^2 <= 1 in steps of 1/64 applied to the
    // best per-index G1 values
    double best = 0;
    for (int a = -64; a <= 64; ++a)
        for (int b = -64; b <= 64; ++b) {
            if (a * a + b * b > 64 * 64) continue;
            // G1 bests at the micro profile: j=1 top-2/4, j=2 top-3/16
            double v1 = (1.0 + 1.0) / 4.0, v2 = 3.0 / 64.0;
            double val = std::abs(a / 64.0 * v1) + 0 * b + std::abs(b / 64.0 * v2);
            best = std::max(best, val);
        }
    CHECK(r.lower.to_double() >= best - 1e-3);
}

TEST_CASE("l2sum example space") {
    CHECK(l2sum_norm_sq(Vec00::unit(1, Rat(1, 2))) == Rat(1, 4));
    // one full block (1,1) in the second block: (1+1)^2 = 4
    Vec00 b2;
    b2.set(2, Rat(1));
    b2.set(3, Rat(1));
    CHECK(l2sum_norm_sq(b2) == Rat(4));
    // two unit vectors in distinct blocks: l2 across blocks
    Vec00 z = Vec00::unit(1) + Vec00::unit(2);
    CHECK(l2sum_norm_sq(z) == Rat(2));
    CHECK(l2sum_block_of(1) == 1);
    CHECK(l2sum_block_of(2) == 2);
    CHECK(l2sum_block_of(3) == 2);
    CHECK(l2sum_block_of(4) == 3);
    CHECK(l2sum_block_range(3) == std::pair<int, int>{4, 6});
}

TEST_CASE("dual norm bracket basics") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    NormOracle oracle = [&](const Vec00& y) { return eng.extension_norm(y, rules, 2); };
    BracketResult br = dual_norm(Func::ground0(1), 1, oracle);
    CHECK(br.lower == 1);
    CHECK(br.upper == 1);

    // certified members act within the unit ball
    Vec00 gv;
    gv.set(1, Rat(1, 4));
    gv.set(2, Rat(1, 4));
    Func g;
    g.v = gv;  // the G1 functional at j=1 for the micro profile
    BracketResult bg = dual_norm(g, 2, oracle);
    CHECK(bg.upper <= Rat(1) + Rat(1, 1000000));
}

TEST_CASE("quotient norm pinned examples") {
    ParameterProfile p = builtin_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    NormOracle oracle = [&](const Vec00& y) { return eng.extension_norm(y, rules, 2); };
    auto in_l = [](int k) { return LambdaPartition::l_member(k); };

    // find one coordinate in L and one outside
    int in = 0, out = 0;
    for (int k = 1; k <= 40 && (in == 0 || out == 0); ++k) {
        if (in_l(k) && in == 0) in = k;
        if (!in_l(k) && out == 0) out = k;
    }
    REQUIRE(in > 0);
    REQUIRE(out > 0);
    BracketResult b1 = quotient_norm(Vec00::unit(in), 40, oracle, in_l);
    CHECK(b1.lower == 0);
    CHECK(b1.upper == 0);
    BracketResult b2 = quotient_norm(Vec00::unit(out), 40, oracle, in_l);
    CHECK(b2.lower == 1);
    CHECK(b2.upper == 1);
    // e_a + e_b with a outside L, b inside: pinned interval [1,1]
    BracketResult b3 = quotient_norm(Vec00::unit(out) + Vec00::unit(in), 40, oracle, in_l);
    CHECK(b3.lower == 1);
    CHECK(b3.upper == 1);
}

TEST_CASE("l1 average search on the l2sum space") {
    NormOracle oracle = [](const Vec00& x) {
        NormResult r;
        r.lower = ExactValue::of_sqrt(l2sum_norm_sq(x));
        r.upper = r.lower;
        return r;
    };
    // blocks inside one l1 block are isometrically l1
    std::vector<Vec00> blocks;
    auto [lo, hi] = l2sum_block_range(6);
    for (int c = lo; c <= lo + 3; ++c) blocks.push_back(Vec00::unit(c));
    AverageResult res = find_l1_average(blocks, 2, Rat(2), oracle);
    CHECK(res.found);
    CHECK(res.constant <= 2);
    // scaling invariance: doubled inputs give the same normalized output
    std::vector<Vec00> doubled;
    for (const auto& b : blocks) doubled.push_back(b.scaled(Rat(2)));
    AverageResult res2 = find_l1_average(doubled, 2, Rat(2), oracle);
    CHECK(res2.found);
    CHECK(res2.average == res.average);

    // explicit failure when blocks are spread across l2-orthogonal blocks
    std::vector<Vec00> spread;
    for (int b = 10; b < 14; ++b) spread.push_back(Vec00::unit(l2sum_block_range(b).first));
    AverageResult res3 = find_l1_average(spread, 2, Rat(6, 5), oracle);
    CHECK_FALSE(res3.found);
    CHECK_FALSE(res3.note.empty());
}

TEST_CASE("exact lp solves tiny programs") {
    // max x + y subject to x <= 1, y <= 2, x + y <= 5/2, -x <= 0, -y <= 0
    std::vector<LpRow> rows = {
        {{Rat(1), Rat(0)}, Rat(1)},  {{Rat(0), Rat(1)}, Rat(2)},   {{Rat(1), Rat(1)}, Rat(5, 2)},
        {{Rat(-1), Rat(0)}, Rat(0)}, {{Rat(0), Rat(-1)}, Rat(0)},
    };
    auto sol = lp_max({Rat(1), Rat(1)}, rows);
    REQUIRE(sol.has_value());
    CHECK(sol->first == Rat(5, 2));
}
