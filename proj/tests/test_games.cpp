#include "doctest.h"
#include "tslab/config.hpp"
#include "tslab/games.hpp"

using namespace tslab;

namespace {

NormOracle l2sum_oracle() {
    return [](const Vec00& x) {
        NormResult r;
        r.lower = ExactValue::of_sqrt(l2sum_norm_sq(x));
        r.upper = r.lower;
        return r;
    };
}

}  // namespace

TEST_CASE("trivial game on A(1)-like setting: one move wins at xi = 0") {
    // a single normalized vector is maximal S_0-admissible
    GameContext ctx;
    ctx.xi = Ordinal();
    ctx.space = "L2SUM";
    ctx.oracle = l2sum_oracle();
    GameTranscript t = play_game(ctx, s_strategy_tail(), v_strategy_l2blocks(1), Rat(1), 8);
    CHECK(t.verdict == GameTranscript::Verdict::VWins);
    CHECK(t.equivalence == ExactValue::of_rational(Rat(1)));
}

TEST_CASE("l2sum tail game: block disjointness and the exact constant") {
    GameContext ctx;
    ctx.xi = Ordinal(1);
    ctx.space = "L2SUM";
    ctx.oracle = l2sum_oracle();
    GameTranscript t = play_game(ctx, s_strategy_tail(), v_strategy_l2blocks(16), Rat(100), 64);
    REQUIRE(t.v_moves.size() == 16);
    // pairwise block-disjoint replies
    for (size_t i = 0; i + 1 < t.v_moves.size(); ++i)
        CHECK(l2sum_block_of(t.v_moves[i].x.max_support()) <
              l2sum_block_of(t.v_moves[i + 1].x.min_support()));
    // the equivalence constant for k = 16 unit coefficients is exactly 4
    CHECK(t.equivalence == ExactValue::of_rational(Rat(4)));
    // squared-norm additivity across blocks, exact
    Vec00 sum;
    Rat expect(0);
    for (const auto& vm : t.v_moves) {
        sum = sum + vm.x;
        Rat b = vm.x.l1();
        expect += b * b;
    }
    CHECK(l2sum_norm_sq(sum) == expect);
    // V cannot reach any fixed small constant: with C = 2 the verdict flips
    GameTranscript t2 = play_game(ctx, s_strategy_tail(), v_strategy_l2blocks(16), Rat(2), 64);
    CHECK(t2.verdict == GameTranscript::Verdict::SWins);
}

TEST_CASE("special-sequence strategy wins the subsequence game") {
    ParameterProfile p = builtin_profile("game");
    for (const Ordinal& xi : {Ordinal(1), Ordinal(2)}) {
        CodingRegistry reg;
        NormEngine eng(p, reg, xi);
        GameContext ctx;
        ctx.xi = xi;
        ctx.space = "XG";
        ctx.registry = &reg;
        ctx.profile = &p;
        ctx.oracle = [&eng](const Vec00& x) { return eng.ground_norm(x); };
        for (int g = 0; g < 5; ++g) {
            GameTranscript t =
                play_game(ctx, s_strategy_mask(1000 + g), v_strategy_special(xi, reg, p), Rat(1), 64);
            CHECK(t.verdict == GameTranscript::Verdict::VWins);
            CHECK(t.equivalence == ExactValue::of_rational(Rat(1)));
            // produced minima form S_xi members at every prefix
            FamilyEngine fam;
            FinSet minima;
            for (const auto& vm : t.v_moves) {
                minima.push_back(vm.x.min_support());
                CHECK(fam.member(FamilySpec::S(xi), minima));
            }
            CHECK(fam.is_maximal(FamilySpec::S(xi), minima));
        }
    }
}

TEST_CASE("transcript replay validates and is stable") {
    ParameterProfile p = builtin_profile("game");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    GameContext ctx;
    ctx.xi = Ordinal(1);
    ctx.space = "XG";
    ctx.registry = &reg;
    ctx.profile = &p;
    ctx.oracle = [&eng](const Vec00& x) { return eng.ground_norm(x); };
    GameTranscript t = play_game(ctx, s_strategy_mask(5), v_strategy_special(Ordinal(1), reg, p), Rat(1), 64);
    REQUIRE(t.verdict == GameTranscript::Verdict::VWins);
    auto v1 = validate_transcript(t, ctx);
    auto v2 = validate_transcript(t, ctx);
    CHECK(v1 == t.verdict);
    CHECK(v1 == v2);

    // JSON round trip preserves the replayed verdict
    GameTranscript u = GameTranscript::from_json(t.to_json());
    auto v3 = validate_transcript(u, ctx);
    CHECK(v3 == t.verdict);

    // tampering with a move makes the replay fail
    GameTranscript bad = u;
    bad.v_moves[0].x = Vec00::unit(1);
    auto vb = validate_transcript(bad, ctx);
    CHECK(vb != GameTranscript::Verdict::VWins);
}

TEST_CASE("illegal moves abort with the offender") {
    GameContext ctx;
    ctx.xi = Ordinal(1);
    ctx.space = "L2SUM";
    ctx.oracle = l2sum_oracle();
    // a V strategy that ignores the chosen tail
    VStrategy cheat = [](const GameTranscript&, const SMove&) {
        VMove m;
        m.x = Vec00::unit(1);
        return m;
    };
    GameTranscript t = play_game(ctx, s_strategy_tail(), cheat, Rat(1), 4);
    CHECK(t.verdict == GameTranscript::Verdict::Illegal);
    CHECK_FALSE(t.note.empty());
}

TEST_CASE("resignation on a hopeless mask") {
    ParameterProfile p = builtin_profile("game");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    GameContext ctx;
    ctx.xi = Ordinal(1);
    ctx.space = "XG";
    ctx.registry = &reg;
    ctx.profile = &p;
    ctx.oracle = [&eng](const Vec00& x) { return eng.ground_norm(x); };
    SStrategy stingy = [](const GameTranscript&) {
        SMove m;
        m.kind = SMove::Kind::Mask;
        m.mask = {2, 5};  // far too sparse for any G1 block
        return m;
    };
    GameTranscript t = play_game(ctx, stingy, v_strategy_special(Ordinal(1), reg, p), Rat(1), 8);
    CHECK(t.verdict == GameTranscript::Verdict::SWins);
    CHECK(t.note == "V resigned");
}
