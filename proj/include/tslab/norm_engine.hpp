#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tslab/norming.hpp"

namespace tslab {

enum class Provenance { Exhaustive, L1Cap, DepthSaturation };

std::string provenance_name(Provenance p);

// Certified two-sided norm evaluation.  The lower bound always comes with an
// evaluable witness; when witness_l2_sup is set the witness is the optimal
// direction of an l2-combination layer, attained only in the closure, and it
// evaluates to sqrt of the sum of squared component actions.
struct NormResult {
    ExactValue lower;
    ExactValue upper;
    Provenance prov = Provenance::Exhaustive;
    int depth = 0;
    bool truncated = false;
    CertNode witness;
    bool witness_l2_sup = false;
    std::vector<CertNode> l2_parts;   // the components behind an l2-sup witness
    std::string note;
};

ExactValue eval_witness(const NormResult& r, const Vec00& x);

// A chain of G1 functionals realizable through the sigma1 registry, i.e. a
// stored prefix together with the index its extension would have to carry.
struct SpecialChain {
    std::vector<Func> comps;
    int next_index = 0;
    bool valid = false;   // passes the full special-sequence conditions
};

class NormEngine {
  public:
    NormEngine(const ParameterProfile& profile, const CodingRegistry& registry, Ordinal xi,
               int paper_index_cap = 5);

    const ParameterProfile& profile() const { return profile_; }
    const CodingRegistry& registry() const { return registry_; }
    const Ordinal& xi() const { return xi_; }

    // Exact sup over the four ground layers (G0, G1, Gsp, Gl2) at finite
    // index horizons; at the paper profile the l2 layer is index-capped and
    // the tail goes into the upper bound.
    NormResult ground_norm(const Vec00& x) const;

    // Lower bound: exact sup over the depth-bounded saturation of the rule
    // set, with l2-combination layers evaluated in closed form at the root
    // and by their best single component inside operations.  Upper bound:
    // min of the l1 norm and the all-operations relaxation bound.
    NormResult extension_norm(const Vec00& x, const RuleSet& rules, int depth) const;

    // Certified rational upper bound for sup{f(x) : f in the relaxation of
    // the rule set}; solves the l2-layer fixed point via 1/(1-c0).
    Rat relaxation_upper(const Vec00& x, const RuleSet& rules) const;

    // Brute-force direct recursion over the depth-bounded saturation,
    // following the layer definitions literally with no memoization or
    // pruning.  Test oracle; exponential.
    ExactValue exhaustive_saturation_value(const Vec00& x, const RuleSet& rules, int depth) const;

    std::vector<SpecialChain> realizable_chains() const;

    struct LayerBest {
        ExactValue value;
        std::optional<CertNode> witness;
        bool l2_sup = false;
        std::vector<CertNode> l2_parts;
    };

    LayerBest ground_layers_public(const Vec00& x, bool allow_sqrt) const;
    int op_horizon() const;

  private:
    const ParameterProfile& profile_;
    const CodingRegistry& registry_;
    Ordinal xi_;
    int paper_index_cap_;

    int index_horizon(int parity_start = 1) const;
    LayerBest ground_layers(const Vec00& x, bool allow_sqrt, Rat* l2_tail_sq = nullptr) const;
    // best G1^j action on x (optimal subset and signs), with witness
    std::pair<Rat, Vec00> g1_best(const Vec00& x, int j) const;
};

// ---- auxiliary exactly-computable example space ----

// (sum of l1^n blocks)_l2 with block sizes 1,2,3,...: returns the exact
// squared norm sum_b (sum_{i in block b} |x_i|)^2.
Rat l2sum_norm_sq(const Vec00& x);
int l2sum_block_of(int coordinate);           // 1-based block index
std::pair<int, int> l2sum_block_range(int b); // coordinate range of block b

// ---- dual and quotient norms, average search ----

struct BracketResult {
    Rat lower;
    Rat upper;
    bool converged = true;
    int iterations = 0;
    std::string note;
};

using NormOracle = std::function<NormResult(const Vec00&)>;

// Brackets sup{f(x) : ||x|| <= 1, supp x in [1,N]} by cutting planes with an
// exact rational vertex-enumeration LP.
BracketResult dual_norm(const Func& f, int n_dim, const NormOracle& oracle, const Rat& tol = Rat(1, 1000000),
                        int max_iter = 64);

// Brackets dist(x, span{e_n : n in L, n <= N}) using coordinate descent with
// exact zeroing candidates plus rational ternary refinement for the upper
// bound and X_L-perp witnesses for the lower bound.
BracketResult quotient_norm(const Vec00& x, int n_dim, const NormOracle& oracle,
                            const std::function<bool(int)>& in_l, const Rat& tol = Rat(1, 1000000));

struct AverageResult {
    bool found = false;
    Vec00 average;                 // the normalized average (l1 mode)
    std::vector<Vec00> parts;      // the x_i with average = (1/k) sum x_i
    std::vector<Func> dual_parts;  // c0 mode output
    Rat constant;                  // certified constant
    std::string note;
};

// l1 mode: doubling search for a normalized C-l1^k average along successive
// averages of the input blocks.  c0 mode: successive functionals with
// ||sum|| <= 1 and each ||f_i|| >= 1/2.  Explicit failure on exhaustion.
AverageResult find_l1_average(const std::vector<Vec00>& blocks, int k, const Rat& C, const NormOracle& oracle);
AverageResult find_c0_average(const std::vector<Func>& blocks, int k, const NormOracle& vector_oracle,
                              const NormOracle& dual_upper_oracle);

// ---- exact miniature linear programming (vertex enumeration) ----

// max c.x subject to rows a_i . x <= b_i; returns nullopt when unbounded or
// infeasible.  Exact rational arithmetic; intended for tiny dimensions.
struct LpRow {
    std::vector<Rat> a;
    Rat b;
};
std::optional<std::pair<Rat, std::vector<Rat>>> lp_max(const std::vector<Rat>& c,
                                                       const std::vector<LpRow>& rows);

}  // namespace tslab
