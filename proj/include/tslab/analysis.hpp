#pragma once

#include "tslab/norm_engine.hpp"

namespace tslab {

// ---- separated sequences ----

struct SeparatedReport {
    bool separated = true;
    // functionals hitting two or more vectors at level >= eps
    std::vector<std::pair<Func, std::vector<int>>> offenders;
};

SeparatedReport separated_check(const std::vector<Vec00>& xs, const std::vector<Func>& universe,
                                const Rat& eps);

struct SeparatedAverages {
    std::vector<Vec00> ys;                    // y_n = (1/n) sum_{i in F_n} x_i
    std::vector<std::pair<int, int>> picks;   // (j_i, l_i) selections
    bool ok = false;
    std::string note;
};

SeparatedAverages build_separated_averages(const std::vector<Vec00>& xs, const Rat& C, const Rat& eps,
                                           const ParameterProfile& profile);

// ---- rapidly increasing sequences ----

struct RISCondition {
    bool ok = true;
    std::string granularity;  // "exact" or "sampled"
    std::string detail;
};

struct RISWitness {
    bool ok = false;
    Rat C;
    Rat eps;
    std::vector<int> jk;
    RISCondition cond_a, cond_b, cond_c;
};

// Verifies the three RIS conditions for (xs, jk): norms via the engine's
// certified upper bounds (a), exact arithmetic (b), and a bounded sample of
// weighted functionals (c).
RISWitness ris_check(const std::vector<Vec00>& xs, const std::vector<int>& jk, const Rat& C,
                     const Rat& eps, const NormEngine& eng, const RuleSet& rules, int sample_window_cap = 10);

// ---- the recursive inequality certifier ----

struct BasicInequalityInput {
    CertNode f;                 // tree analysis of the functional
    std::vector<Vec00> xs;      // the RIS vectors
    std::vector<int> jk;        // associated indices
    Rat C;
    Rat eps;
    std::vector<Rat> coeffs;    // c_k, parallel to xs
    int k_lo = 1, k_hi = 0;     // interval of 1-based positions (k_hi = 0: all)
    int j0 = 2;
    bool flag_ada = false;
};

struct BasicInequalityCertificate {
    bool ok = false;               // preconditions + construction + inequality
    CertNode g;                    // the auxiliary functional with its tree
    ExactValue eps_f;
    bool w_certified = false;
    bool inequality_ok = false;
    Rat lhs;
    ExactValue rhs;
    bool type1_input = false;
    bool type1_shape_ok = false;   // g is 0, a scaled e*, or an operation of the same index
    bool type1_epsf_ok = false;    // eps_f <= eps * w(f)^(-1/2)
    std::string note;
};

BasicInequalityCertificate certify_basic_inequality(const BasicInequalityInput& in, const NormEngine& eng);

// ---- tail index ----

// least j0 with sum_{j > j0} m_{2j-1}^-4 < (eps/D)^2, D = ||x||_1
int tail_index(const Vec00& x, const Rat& eps, const ParameterProfile& profile);

// ---- exact pairs ----

struct ExactPairClause {
    std::string name;
    bool ok;
    std::string detail;
};

struct ExactPair {
    bool built = false;
    Vec00 x;
    Func f;
    CertNode f_cert;
    int index = 0;  // 2j
    Rat C;
    std::vector<ExactPairClause> clauses;
    std::string note;
};

// Builds the averaged pair x = (m_{2j}/n_{2j}) sum x_i, f = m_{2j}^-1 sum f_i
// from flat basis averages in the window, then re-verifies every clause and
// records the outcome (several fail by design at miniature parameters).
ExactPair build_exact_pair(const Interval& window, int j, const NormEngine& eng, int flat_len = 2);

// ---- attracting sequences ----

struct AttractingSequence {
    bool built = false;
    int j = 0;  // parameter: length n_{2j-1}
    Rat C;
    std::vector<Vec00> xs;
    std::vector<Func> fs;
    StoredSequence stored;   // also appended to the registry store
    std::string note;
};

// l_mode draws the even coordinates from L inside the prescribed Lambda class.
AttractingSequence build_attracting_sequence(int j, int support_start, NormEngine& eng,
                                             CodingRegistry& reg, bool l_mode);

// ---- spreading constants ----

struct SpreadingBracket {
    Rat lower;   // certified lower bound for min_{sum |a|=1} ||sum a_i x_i||
    Rat upper;   // value at the best point found
    bool budget_exhausted = false;
    std::vector<FinSet> examined;
};

SpreadingBracket spreading_constant(const std::vector<Vec00>& xs, const Ordinal& xi, int min_start,
                                    const NormOracle& oracle, int budget);

// ---- l1 / c0 tree builders ----

struct L1TreeResult {
    bool complete = false;
    std::vector<std::vector<Func>> chains;      // special sequences per branch
    std::vector<std::vector<Vec00>> vectors;    // primal mode vectors
    FinTree minima_tree;
    int order = 0;
    std::string note;
};

enum class TreeMode { L1Primal, C0Dual };

L1TreeResult build_l1_tree(const std::vector<int>& pool, const Ordinal& xi, TreeMode mode,
                           CodingRegistry& reg, const ParameterProfile& profile, int branch_budget = 4);

// ---- segment-family measurement utilities ----

// closed-form value of the best combination over a segment family with
// pairwise disjoint index sets: sqrt of the sum of squared optimal-sign
// segment actions
ExactValue segment_family_value(const std::vector<std::vector<Func>>& segments, const Vec00& x);

// max over the universe of #{n : |g(y_n)| >= threshold}
int threshold_count(const std::vector<Vec00>& ys, const std::vector<Func>& universe, const Rat& threshold);

}  // namespace tslab
