#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tslab/coding.hpp"
#include "tslab/families.hpp"
#include "tslab/linspace.hpp"
#include "tslab/ordinal.hpp"
#include "tslab/profiles.hpp"

namespace tslab {

// Witness data for membership in one of the ground layers.
struct GroundCert {
    GroundKind kind = GroundKind::G0;
    int j = 0;                      // G1 index
    int sign = 1;                   // global sign (layers are symmetric)
    Interval window{1, kNoBound};   // interval restriction (Gsp and friends)
    std::vector<int> signs;         // Gsp: the epsilon_i
    std::vector<Func> comps;        // Gsp: special sequence; Gl2: components
    std::vector<Rat> lambdas;       // Gl2 coefficients, sum of squares <= 1
    std::vector<GroundCert> sub;    // Gl2: certificate per component
};

struct CertNode;

// The sequence backing an odd operation: an attractor sequence (or the
// special-sequence variant used by the HI rule set), with certificates for
// the entries that are operation results.
struct OddOpWitness {
    std::vector<Func> seq;
    std::vector<CertNode> entry_certs;  // parallel to seq; trivial for e* entries
    int j1 = 0;                         // f_1 carries weight m_{2 j1}
    bool hi_variant = false;
};

// One node of a tree analysis.  The claimed functional at a node is
//   restrict(sign * combine(children | ground), window)
// where combine applies the node's rule.
struct CertNode {
    enum class Rule { GroundLeaf, OpJ, L2Combo, RationalConvex };
    Rule rule = Rule::GroundLeaf;
    Func f;                          // the claimed functional at this node
    int sign = 1;
    Interval window{1, kNoBound};
    int j = 0;                       // OpJ: operation index, weight m_j
    bool odd_op = false;             // OpJ licensed by an attractor/special sequence
    std::shared_ptr<const OddOpWitness> odd;
    std::vector<Rat> coeffs;         // L2Combo / RationalConvex
    std::vector<CertNode> kids;
    GroundCert ground;               // GroundLeaf

    int depth() const;
};

struct MembershipCertificate {
    Func f;
    CertNode root;
    std::string ruleset;
};

struct StoredSequence {
    std::vector<Func> seq;
    std::vector<CertNode> entry_certs;
    int odd_j = 0;   // the attractor parameter 2j-1 comes from this j
    int j1 = 0;
    bool hi_variant = false;
};

struct SequenceStore {
    std::vector<StoredSequence> attractors;
};

enum class OddPolicy { None, Attractors, SpecialSequences };

// Constructive description of a norming set: which ground layer, which
// (A_n, m^-1)-operations, whether l2 combinations and rational convexity
// are allowed.  Instances cover G_xi, K_xi, W_j0, the HI variant and the
// generic extensions.
struct RuleSet {
    std::string name;
    enum class Ground { Gxi, Cj0, Basis } ground = Ground::Gxi;
    bool ops_all_j = false;        // W-style: every j, arity 2 n_j
    bool ops_even_j = false;       // mixed-extension style: even op index, arity n_j
    bool w_arity_doubling = false; // arity 2 n_j instead of n_j
    OddPolicy odd = OddPolicy::None;
    bool l2 = true;
    bool l2_fresh_coords = false;  // W-style type II with fresh coordinates
    bool convex = true;
    int j0 = 0;                    // for Cj0 ground
    Ordinal xi;                    // for Gxi ground (special sequences)

    bool op_allowed(int op_index, bool odd_licensed) const;
    // Maximal number of children of an (A, m^-1)-operation with this index.
    BigInt op_arity(int op_index, const ParameterProfile& p) const;

    static RuleSet G(const Ordinal& xi);
    static RuleSet K(const Ordinal& xi);
    static RuleSet W(int j0);
    static RuleSet HI();
    static RuleSet WG(const Ordinal& xi);   // the enclosing relaxation
    static RuleSet parse(const std::string& text, const Ordinal& default_xi);
};

struct Verdict {
    bool ok = true;
    std::string category;   // stable failure tag, e.g. "s_xi_failure"
    std::string message;

    static Verdict pass() { return {}; }
    static Verdict fail(std::string cat, std::string msg) { return {false, std::move(cat), std::move(msg)}; }
};

// ---- ground layer checks ----

bool is_g0_element(const Func& f, std::string* why = nullptr);
// Coefficients all +-1/m_{2j-1}^2 and support of size <= n_{2j-1}.
bool is_g1_element(const Func& f, int j, const ParameterProfile& profile, std::string* why = nullptr);

Verdict check_special_sequence(const std::vector<Func>& seq, const Ordinal& xi,
                               const CodingRegistry& reg, const ParameterProfile& profile);

Verdict check_gsp_element(const Func& phi, const GroundCert& g, const Ordinal& xi,
                          const CodingRegistry& reg, const ParameterProfile& profile);

// ind set of a windowed special functional: indices of components that
// survive the restriction.
std::vector<int> gsp_ind_set(const std::vector<Func>& comps, const Interval& window);
std::vector<int> ground_ind_set(const GroundCert& g);

Verdict check_ground(const Func& f, const GroundCert& g, const RuleSet& rules,
                     const ParameterProfile& profile, const CodingRegistry& reg);

// ---- sequences ----

Verdict check_attractor_sequence(const StoredSequence& s, int odd_j, const RuleSet& rules,
                                 const CodingRegistry& reg, const ParameterProfile& profile);

// Remark-style tree property for two coded sequences: either no common
// entries at all, or they agree on a prefix and share nothing afterwards.
bool sequences_tree_property(const std::vector<Func>& a, const std::vector<Func>& b);

// ---- certificates ----

Vec00 cert_compose(const CertNode& node);
Verdict verify_node(const CertNode& node, const RuleSet& rules, const ParameterProfile& profile,
                    const CodingRegistry& reg);
Verdict verify_membership(const Func& f, const RuleSet& rules, const MembershipCertificate& cert,
                          const ParameterProfile& profile, const CodingRegistry& reg);

CertNode ground_leaf(const Func& f, GroundCert g);
CertNode op_node(int op_index, std::vector<CertNode> kids, const ParameterProfile& profile,
                 bool odd_op = false, std::shared_ptr<const OddOpWitness> odd = nullptr);
CertNode l2_node(std::vector<Rat> coeffs, std::vector<CertNode> kids);
CertNode convex_node(std::vector<Rat> coeffs, std::vector<CertNode> kids);
// Induced certificate of an interval restriction / sign flip.
CertNode restrict_cert(const CertNode& node, const Interval& e, int sign = 1);

std::string cert_digest(const CertNode& node);

// ---- bounded enumeration ----

struct EnumResult {
    std::vector<Func> funcs;
    bool truncated = false;
};

// All G1^j functionals with support in the window: every subset of size
// <= n_{2j-1} with every sign pattern, deduplicated, deterministic order.
EnumResult g1_enumerate(int j, const Interval& window, const ParameterProfile& profile, size_t cap);

// Layered enumeration of W'_{j0} up to the given depth over the window.
// Type II layers emit canonical uniform-coefficient instances; the
// closed-form coefficient suprema are checked elsewhere.
EnumResult w_enumerate(int j0, int depth, const Interval& window, const ParameterProfile& profile,
                       size_t cap);

}  // namespace tslab
