#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tslab/analysis.hpp"

namespace tslab {

// Subspace selectors the S player may choose: a tail cutoff or a subsequence
// mask of the basis (finite generator lists reduce to masks at desk scale).
struct SMove {
    enum class Kind { Tail, Mask } kind = Kind::Tail;
    int tail_from = 1;
    std::vector<int> mask;  // sorted coordinates

    bool allows(const Vec00& x) const;
};

struct VMove {
    bool resign = false;
    bool declare_complete = false;
    Vec00 x;
    bool has_witness = false;
    Func witness;  // chain element backing this move, appended to the transcript
};

struct GameTranscript {
    Ordinal xi;
    Rat C = Rat(1);
    std::string space;  // "XG" or "L2SUM"
    std::uint64_t seed = 0;
    std::vector<SMove> s_moves;
    std::vector<VMove> v_moves;
    std::vector<Func> witness_chain;  // special sequence backing the l1 lower bound

    enum class Verdict { VWins, SWins, Undecided, Illegal } verdict = Verdict::Undecided;
    std::string note;
    // certified l1-domination ratio of the played vectors (1 = exact l1 lower
    // bound sum |a_i|); for the l2-sum space the exact equivalence constant
    ExactValue equivalence;
    Rat measured_upper;  // max certified norm upper bound of the played vectors

    std::string to_json() const;
    static GameTranscript from_json(const std::string& text);
};

using SStrategy = std::function<SMove(const GameTranscript&)>;
using VStrategy = std::function<VMove(const GameTranscript&, const SMove&)>;

struct GameContext {
    Ordinal xi;
    std::string space = "XG";
    NormOracle oracle;            // norm of the ambient space
    CodingRegistry* registry = nullptr;
    const ParameterProfile* profile = nullptr;
};

GameTranscript play_game(const GameContext& ctx, const SStrategy& s, const VStrategy& v, const Rat& C,
                         int move_cap);

// Independent replay: re-checks move legality and recomputes the verdict,
// refreshing the transcript's equivalence field.
GameTranscript::Verdict validate_transcript(GameTranscript& t, const GameContext& ctx,
                                            std::string* why = nullptr);

// S always plays the tail beyond V's last support.
SStrategy s_strategy_tail();
// S plays a fresh random subsequence mask each turn (density 1/2 over a
// bounded universe, always containing some small coordinates).
SStrategy s_strategy_mask(std::uint64_t seed, int universe = 1200);

// V extends a sigma1-coded special sequence inside the current mask and
// plays the matching scaled averages; declares completion exactly when the
// minsupp set is maximal.  Resigns explicitly when the mask is too sparse.
VStrategy v_strategy_special(const Ordinal& xi, CodingRegistry& reg, const ParameterProfile& profile);

// V plays normalized single-block vectors of the l2-sum space.
VStrategy v_strategy_l2blocks(int k_target);

}  // namespace tslab
