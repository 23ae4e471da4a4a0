#include "tslab/norming.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tslab {

int CertNode::depth() const {
    int d = 0;
    for (const auto& k : kids) d = std::max(d, k.depth());
    return d + (rule == Rule::GroundLeaf ? 0 : 1);
}

bool RuleSet::op_allowed(int op_index, bool odd_licensed) const {
    if (op_index < 1) return false;
    if (ops_all_j) return true;
    if (!ops_even_j) return false;
    if (op_index % 2 == 0) return true;
    // odd operation indices need an attractor / special sequence behind them
    return odd_licensed && odd != OddPolicy::None;
}

BigInt RuleSet::op_arity(int op_index, const ParameterProfile& p) const {
    BigInt arity = p.n_int(op_index);
    if (w_arity_doubling) arity *= 2;
    return arity;
}

RuleSet RuleSet::G(const Ordinal& xi) {
    RuleSet r;
    r.name = "G";
    r.ground = Ground::Gxi;
    r.ops_all_j = false;
    r.ops_even_j = false;
    r.l2 = false;       // the l2 layer of the ground set lives in GroundCert
    r.convex = false;
    r.xi = xi;
    return r;
}

RuleSet RuleSet::K(const Ordinal& xi) {
    RuleSet r;
    r.name = "K";
    r.ground = Ground::Gxi;
    r.ops_even_j = true;
    r.odd = OddPolicy::Attractors;
    r.l2 = true;
    r.convex = true;
    r.xi = xi;
    return r;
}

RuleSet RuleSet::W(int j0) {
    if (j0 <= 1) throw PreconditionError("W_{j0} needs j0 > 1");
    RuleSet r;
    r.name = "W:" + std::to_string(j0);
    r.ground = Ground::Cj0;
    r.ops_all_j = true;
    r.w_arity_doubling = true;
    r.l2 = true;
    r.l2_fresh_coords = true;
    r.convex = true;
    r.j0 = j0;
    return r;
}

RuleSet RuleSet::HI() {
    RuleSet r;
    r.name = "HI";
    r.ground = Ground::Basis;
    r.ops_even_j = true;
    r.odd = OddPolicy::SpecialSequences;
    r.l2 = true;
    r.convex = true;
    return r;
}

RuleSet RuleSet::WG(const Ordinal& xi) {
    RuleSet r;
    r.name = "WG";
    r.ground = Ground::Gxi;
    r.ops_all_j = true;
    r.l2 = true;
    r.convex = true;
    r.xi = xi;
    return r;
}

RuleSet RuleSet::parse(const std::string& text, const Ordinal& default_xi) {
    if (text == "G") return G(default_xi);
    if (text == "K") return K(default_xi);
    if (text == "HI") return HI();
    if (text == "WG") return WG(default_xi);
    if (text.rfind("W:", 0) == 0) return W(std::stoi(text.substr(2)));
    throw UsageError("unknown rule set: " + text + " (expected G|K|W:j0|HI|WG)");
}

// ---------------------------------------------------------------- ground

bool is_g0_element(const Func& f, std::string* why) {
    if (f.v.support_size() != 1) {
        if (why) *why = "support size != 1";
        return false;
    }
    const Rat& c = f.v.entries().begin()->second;
    if (c != 1 && c != -1) {
        if (why) *why = "coefficient not +-1";
        return false;
    }
    return true;
}

bool is_g1_element(const Func& f, int j, const ParameterProfile& profile, std::string* why) {
    if (j < 1 || !profile.has_index(2 * j - 1)) {
        if (why) *why = "index outside profile horizon";
        return false;
    }
    if (f.v.is_zero()) {
        if (why) *why = "zero functional";
        return false;
    }
    Rat mm = profile.m(2 * j - 1);
    Rat coeff = Rat(1) / (mm * mm);
    for (const auto& [i, c] : f.v.entries()) {
        if (c != coeff && c != -coeff) {
            if (why) *why = "coefficient at " + std::to_string(i) + " not +-1/m_{2j-1}^2";
            return false;
        }
    }
    if (Rat(static_cast<long>(f.v.support_size())) > profile.n(2 * j - 1)) {
        if (why) *why = "support larger than n_{2j-1}";
        return false;
    }
    return true;
}

Verdict check_special_sequence(const std::vector<Func>& seq, const Ordinal& xi,
                               const CodingRegistry& reg, const ParameterProfile& profile) {
    if (seq.empty()) return Verdict::fail("empty", "special sequence must be nonempty");
    for (size_t i = 0; i < seq.size(); ++i) {
        std::string why;
        if (!is_g1_element(seq[i], seq[i].index, profile, &why))
            return Verdict::fail("not_g1", "entry " + std::to_string(i + 1) + ": " + why);
    }
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        if (!blocks_successive(seq[i].v, seq[i + 1].v))
            return Verdict::fail("ordering", "supports not successive at entry " + std::to_string(i + 2));
        if (seq[i].index >= seq[i + 1].index)
            return Verdict::fail("ordering", "indices not strictly increasing at entry " + std::to_string(i + 2));
    }
    if (!CodingRegistry::m1_member(seq[0].index))
        return Verdict::fail("j1_not_m1", "first index " + std::to_string(seq[0].index) + " is not in M1");
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        std::vector<Func> prefix(seq.begin(), seq.begin() + static_cast<long>(i + 1));
        auto v = reg.sigma1_lookup(prefix);
        if (!v)
            return Verdict::fail("sigma1_mismatch",
                                 "prefix of length " + std::to_string(i + 1) + " has no sigma1 assignment");
        if (*v != seq[i + 1].index)
            return Verdict::fail("sigma1_mismatch", "entry " + std::to_string(i + 2) + " has index " +
                                                        std::to_string(seq[i + 1].index) + ", sigma1 says " +
                                                        std::to_string(*v));
    }
    FinSet minima;
    for (const auto& f : seq) minima.push_back(f.v.min_support());
    FamilyEngine fam;
    if (!fam.member(FamilySpec::S(xi), minima))
        return Verdict::fail("s_xi_failure", "minsupp set " + finset_str(minima) + " is not in S(" + xi.str() + ")");
    return Verdict::pass();
}

std::vector<int> gsp_ind_set(const std::vector<Func>& comps, const Interval& window) {
    std::vector<int> out;
    for (const auto& f : comps)
        if (!f.v.restrict_to(window).is_zero()) out.push_back(f.index);
    return out;
}

std::vector<int> ground_ind_set(const GroundCert& g) {
    switch (g.kind) {
        case GroundKind::G1: return {g.j};
        case GroundKind::Gsp: return gsp_ind_set(g.comps, g.window);
        default: return {};
    }
}

Verdict check_gsp_element(const Func& phi, const GroundCert& g, const Ordinal& xi,
                          const CodingRegistry& reg, const ParameterProfile& profile) {
    if (g.kind != GroundKind::Gsp) return Verdict::fail("kind", "certificate kind is not Gsp");
    Verdict v = check_special_sequence(g.comps, xi, reg, profile);
    if (!v.ok) return v;
    if (g.signs.size() != g.comps.size())
        return Verdict::fail("signs", "sign list length mismatch");
    Vec00 sum;
    for (size_t i = 0; i < g.comps.size(); ++i) {
        if (g.signs[i] != 1 && g.signs[i] != -1) return Verdict::fail("signs", "signs must be +-1");
        sum = sum + g.comps[i].v.scaled(Rat(g.signs[i]));
    }
    Vec00 expect = sum.restrict_to(g.window).scaled(Rat(g.sign));
    if (expect != phi.v) return Verdict::fail("composition_mismatch", "Gsp data does not reproduce the functional");
    return Verdict::pass();
}

Verdict check_ground(const Func& f, const GroundCert& g, const RuleSet& rules,
                     const ParameterProfile& profile, const CodingRegistry& reg) {
    std::string why;
    if (g.kind == GroundKind::Zero) {
        if (!f.v.is_zero()) return Verdict::fail("zero", "claimed zero functional is nonzero");
        return Verdict::pass();
    }
    switch (rules.ground) {
        case RuleSet::Ground::Basis:
            if (g.kind != GroundKind::G0) return Verdict::fail("ground_layer", "rule set admits only +-e* ground");
            if (!is_g0_element(f, &why)) return Verdict::fail("g0", why);
            return Verdict::pass();
        case RuleSet::Ground::Cj0: {
            if (g.kind != GroundKind::Cj0 && g.kind != GroundKind::G0)
                return Verdict::fail("ground_layer", "rule set ground layer is C_{j0}");
            for (const auto& [i, c] : f.v.entries())
                if (c != 1 && c != -1) return Verdict::fail("cj0", "coefficients must be +-1");
            if (Rat(static_cast<long>(f.v.support_size())) > profile.n(rules.j0 - 1))
                return Verdict::fail("cj0", "support exceeds n_{j0-1}");
            return Verdict::pass();
        }
        case RuleSet::Ground::Gxi:
            break;
    }
    switch (g.kind) {
        case GroundKind::G0:
            if (!is_g0_element(f, &why)) return Verdict::fail("g0", why);
            return Verdict::pass();
        case GroundKind::G1:
            if (!is_g1_element(f, g.j, profile, &why)) return Verdict::fail("g1", why);
            return Verdict::pass();
        case GroundKind::Gsp:
            return check_gsp_element(f, g, rules.xi, reg, profile);
        case GroundKind::Gl2: {
            if (g.lambdas.size() != g.comps.size() || g.sub.size() != g.comps.size())
                return Verdict::fail("gl2", "component/coefficient arity mismatch");
            if (g.comps.empty()) return Verdict::fail("gl2", "empty combination");
            Rat sq(0);
            for (const auto& l : g.lambdas) sq += l * l;
            if (sq > 1) return Verdict::fail("gl2", "sum of squared coefficients exceeds 1");
            Vec00 sum;
            std::vector<std::vector<int>> inds;
            for (size_t i = 0; i < g.comps.size(); ++i) {
                const GroundCert& sc = g.sub[i];
                if (sc.kind != GroundKind::G1 && sc.kind != GroundKind::Gsp)
                    return Verdict::fail("gl2", "components must come from G1 or Gsp");
                Verdict v = check_ground(g.comps[i], sc, rules, profile, reg);
                if (!v.ok) return v;
                inds.push_back(ground_ind_set(sc));
                sum = sum + g.comps[i].v.scaled(g.lambdas[i]);
            }
            for (size_t a = 0; a < inds.size(); ++a)
                for (size_t b = a + 1; b < inds.size(); ++b)
                    for (int x : inds[a])
                        for (int y : inds[b])
                            if (x == y) return Verdict::fail("gl2_ind", "index sets are not pairwise disjoint");
            if (sum.scaled(Rat(g.sign)) != f.v)
                return Verdict::fail("composition_mismatch", "Gl2 data does not reproduce the functional");
            return Verdict::pass();
        }
        default:
            return Verdict::fail("ground_layer", "certificate kind not admitted by the G ground layer");
    }
}

// ------------------------------------------------------------- sequences

Verdict check_attractor_sequence(const StoredSequence& s, int odd_j, const RuleSet& rules,
                                 const CodingRegistry& reg, const ParameterProfile& profile) {
    const auto& seq = s.seq;
    if (seq.empty()) return Verdict::fail("qs", "empty sequence");
    try {
        validate_qs_prefix(seq);
    } catch (const PreconditionError& e) {
        return Verdict::fail("qs", e.what());
    }
    int odd_index = 2 * odd_j - 1;
    if (!profile.has_index(odd_index))
        return Verdict::fail("qs", "profile has no n_{2j-1} for j=" + std::to_string(odd_j));
    if (Rat(static_cast<long>(seq.size())) > profile.n(odd_index))
        return Verdict::fail("qs", "length exceeds n_{2j-1}");
    if (s.entry_certs.size() != seq.size())
        return Verdict::fail("qs", "missing entry certificates");

    // f_1: an operation result of weight m_{2 j1} with j1 in N1 and
    // m_{2 j1} > n_{2j-1}^3.
    const CertNode& c1 = s.entry_certs[0];
    if (c1.rule != CertNode::Rule::OpJ || c1.j != 2 * s.j1)
        return Verdict::fail("f1_op", "f_1 certificate is not an operation of weight m_{2 j1}");
    if (!CodingRegistry::n1_member(s.j1))
        return Verdict::fail("j1_not_n1", "j1 = " + std::to_string(s.j1) + " is not in N1");
    Rat n3 = profile.n(odd_index);
    if (!(profile.m(2 * s.j1) > n3 * n3 * n3))
        return Verdict::fail("m2j1_growth", "m_{2 j1} <= n_{2j-1}^3");

    for (size_t k = 0; k < seq.size(); ++k) {
        size_t pos = k + 1;  // 1-based
        if (pos % 2 == 1) {
            const CertNode& ck = s.entry_certs[k];
            if (ck.f.v != seq[k].v)
                return Verdict::fail("entry_cert", "certificate functional mismatch at entry " + std::to_string(pos));
            if (pos >= 3) {
                std::vector<Func> prefix(seq.begin(), seq.begin() + static_cast<long>(k));
                auto v = reg.sigma_lookup(prefix);
                if (!v)
                    return Verdict::fail("sigma_mismatch",
                                         "prefix of length " + std::to_string(k) + " has no sigma assignment");
                if (ck.rule != CertNode::Rule::OpJ || ck.j != 2 * *v)
                    return Verdict::fail("weight_mismatch", "entry " + std::to_string(pos) +
                                                                " is not an operation of weight m_{2 sigma}");
            }
            Verdict v = verify_node(ck, rules, profile, reg);
            if (!v.ok) return v;
        } else {
            if (s.hi_variant) {
                const CertNode& ck = s.entry_certs[k];
                std::vector<Func> prefix(seq.begin(), seq.begin() + static_cast<long>(k));
                auto v = reg.sigma_lookup(prefix);
                if (!v)
                    return Verdict::fail("sigma_mismatch",
                                         "prefix of length " + std::to_string(k) + " has no sigma assignment");
                if (ck.rule != CertNode::Rule::OpJ || ck.j != 2 * *v)
                    return Verdict::fail("weight_mismatch", "even entry " + std::to_string(pos) +
                                                                " is not an operation of weight m_{2 sigma}");
                Verdict vv = verify_node(ck, rules, profile, reg);
                if (!vv.ok) return vv;
            } else {
                // f_{2i} = e*_lambda with lambda in the sigma-prescribed class.
                if (seq[k].v.support_size() != 1 || seq[k].v.entries().begin()->second != 1)
                    return Verdict::fail("even_entry", "entry " + std::to_string(pos) + " is not e*_lambda");
                int lambda = seq[k].v.min_support();
                std::vector<Func> prefix(seq.begin(), seq.begin() + static_cast<long>(k));
                auto v = reg.sigma_lookup(prefix);
                if (!v)
                    return Verdict::fail("sigma_mismatch",
                                         "prefix of length " + std::to_string(k) + " has no sigma assignment");
                if (!LambdaPartition::lambda_member(*v, lambda))
                    return Verdict::fail("lambda_class", "entry " + std::to_string(pos) + " coordinate " +
                                                             std::to_string(lambda) + " is not in Lambda_" +
                                                             std::to_string(*v));
            }
        }
    }
    return Verdict::pass();
}

bool sequences_tree_property(const std::vector<Func>& a, const std::vector<Func>& b) {
    size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    // beyond the common prefix no entry may reappear on either side
    for (size_t i = common; i < a.size(); ++i)
        for (size_t r = 0; r < b.size(); ++r)
            if (a[i] == b[r]) return false;
    for (size_t r = common; r < b.size(); ++r)
        for (size_t i = 0; i < a.size(); ++i)
            if (b[r] == a[i]) return false;
    return true;
}

// ----------------------------------------------------------- certificates

Vec00 cert_compose(const CertNode& node) {
    Vec00 sum;
    switch (node.rule) {
        case CertNode::Rule::GroundLeaf:
            return node.f.v;
        case CertNode::Rule::OpJ: {
            for (const auto& k : node.kids) sum = sum + k.f.v;
            Rat mj(0);
            // weight applied by the caller who knows the profile; see verify_node
            (void)mj;
            return sum;  // un-scaled child sum; verify_node scales by 1/m_j
        }
        case CertNode::Rule::L2Combo:
        case CertNode::Rule::RationalConvex: {
            for (size_t i = 0; i < node.kids.size(); ++i)
                sum = sum + node.kids[i].f.v.scaled(node.coeffs[i]);
            return sum;
        }
    }
    return sum;
}

Verdict verify_node(const CertNode& node, const RuleSet& rules, const ParameterProfile& profile,
                    const CodingRegistry& reg) {
    if (node.sign != 1 && node.sign != -1) return Verdict::fail("sign", "node sign must be +-1");
    switch (node.rule) {
        case CertNode::Rule::GroundLeaf:
            return check_ground(node.f, node.ground, rules, profile, reg);

        case CertNode::Rule::OpJ: {
            if (!profile.has_index(node.j))
                return Verdict::fail("op_index", "operation index outside profile horizon");
            if (!rules.op_allowed(node.j, node.odd_op))
                return Verdict::fail("op_not_allowed",
                                     "rule set " + rules.name + " has no operation at index " + std::to_string(node.j));
            if (node.kids.empty()) return Verdict::fail("op_children", "operation with no children");
            if (Rat(static_cast<long>(node.kids.size())) > Rat(rules.op_arity(node.j, profile)))
                return Verdict::fail("arity_exceeded", "operation has too many children");
            for (size_t i = 0; i < node.kids.size(); ++i) {
                if (node.kids[i].f.v.is_zero()) return Verdict::fail("op_children", "zero child in operation");
                if (i > 0 && !blocks_successive(node.kids[i - 1].f.v, node.kids[i].f.v))
                    return Verdict::fail("not_admissible", "children supports are not successive");
            }
            if (node.odd_op) {
                if (rules.odd == OddPolicy::None)
                    return Verdict::fail("op_not_allowed", "rule set has no odd operations");
                if (!node.odd) return Verdict::fail("odd_witness", "odd operation without sequence witness");
                if (node.odd->hi_variant != (rules.odd == OddPolicy::SpecialSequences))
                    return Verdict::fail("odd_witness", "sequence variant does not match the rule set policy");
                if (node.j % 2 != 1) return Verdict::fail("odd_witness", "odd operation at even index");
                StoredSequence s;
                s.seq = node.odd->seq;
                s.entry_certs = node.odd->entry_certs;
                s.j1 = node.odd->j1;
                s.hi_variant = node.odd->hi_variant;
                Verdict v = check_attractor_sequence(s, (node.j + 1) / 2, rules, reg, profile);
                if (!v.ok) return v;
                if (node.kids.size() > node.odd->seq.size())
                    return Verdict::fail("odd_witness", "more children than sequence entries");
                for (size_t i = 0; i < node.kids.size(); ++i)
                    if (!(node.kids[i].f.v == node.odd->seq[i].v))
                        return Verdict::fail("odd_witness", "children do not follow the sequence prefix");
            }
            for (const auto& k : node.kids) {
                Verdict v = verify_node(k, rules, profile, reg);
                if (!v.ok) return v;
            }
            Vec00 composed = cert_compose(node).scaled(Rat(1) / profile.m(node.j));
            composed = composed.restrict_to(node.window).scaled(Rat(node.sign));
            if (composed != node.f.v) return Verdict::fail("composition_mismatch", "operation node mismatch");
            return Verdict::pass();
        }

        case CertNode::Rule::L2Combo: {
            if (!rules.l2) return Verdict::fail("l2_not_allowed", "rule set has no l2 combinations");
            if (node.coeffs.size() != node.kids.size())
                return Verdict::fail("l2", "coefficient/child arity mismatch");
            Rat sq(0);
            for (const auto& c : node.coeffs) sq += c * c;
            if (sq > 1) return Verdict::fail("l2", "sum of squared coefficients exceeds 1");
            std::set<int> weights, coords;
            for (const auto& k : node.kids) {
                if (k.rule == CertNode::Rule::OpJ) {
                    if (!weights.insert(k.j).second)
                        return Verdict::fail("l2_weights", "children weights are not pairwise distinct");
                } else if (rules.l2_fresh_coords && k.rule == CertNode::Rule::GroundLeaf &&
                           k.f.v.support_size() == 1) {
                    if (!coords.insert(k.f.v.min_support()).second)
                        return Verdict::fail("l2_coords", "fresh coordinates are not pairwise distinct");
                } else {
                    return Verdict::fail("l2_children", "l2 children must be type I operations" +
                                                            std::string(rules.l2_fresh_coords
                                                                             ? " or fresh coordinate functionals"
                                                                             : ""));
                }
                Verdict v = verify_node(k, rules, profile, reg);
                if (!v.ok) return v;
            }
            Vec00 composed = cert_compose(node).restrict_to(node.window).scaled(Rat(node.sign));
            if (composed != node.f.v) return Verdict::fail("composition_mismatch", "l2 node mismatch");
            return Verdict::pass();
        }

        case CertNode::Rule::RationalConvex: {
            if (!rules.convex) return Verdict::fail("convex_not_allowed", "rule set is not rationally convex");
            if (node.coeffs.size() != node.kids.size())
                return Verdict::fail("convex", "coefficient/child arity mismatch");
            Rat sum(0);
            for (const auto& c : node.coeffs) {
                if (c < 0) return Verdict::fail("convex", "negative convex coefficient");
                sum += c;
            }
            if (sum > 1) return Verdict::fail("convex", "convex coefficients sum beyond 1");
            Vec00 composed = cert_compose(node);
            Interval hull = composed.is_zero() ? Interval{1, 1} : composed.range();
            for (const auto& k : node.kids) {
                Verdict v = verify_node(k, rules, profile, reg);
                if (!v.ok) return v;
                if (!k.f.v.is_zero() && !composed.is_zero()) {
                    if (k.f.v.min_support() < hull.lo || k.f.v.max_support() > hull.hi)
                        return Verdict::fail("convex_range", "child range escapes the combination range");
                }
            }
            composed = composed.restrict_to(node.window).scaled(Rat(node.sign));
            if (composed != node.f.v) return Verdict::fail("composition_mismatch", "convex node mismatch");
            return Verdict::pass();
        }
    }
    return Verdict::fail("rule", "unknown certificate rule");
}

Verdict verify_membership(const Func& f, const RuleSet& rules, const MembershipCertificate& cert,
                          const ParameterProfile& profile, const CodingRegistry& reg) {
    if (!(cert.f.v == f.v)) return Verdict::fail("claim_mismatch", "certificate is for a different functional");
    if (!(cert.root.f.v == f.v)) return Verdict::fail("claim_mismatch", "certificate root differs from claim");
    return verify_node(cert.root, rules, profile, reg);
}

CertNode ground_leaf(const Func& f, GroundCert g) {
    CertNode n;
    n.rule = CertNode::Rule::GroundLeaf;
    n.f = f;
    n.ground = std::move(g);
    return n;
}

CertNode op_node(int op_index, std::vector<CertNode> kids, const ParameterProfile& profile,
                 bool odd_op, std::shared_ptr<const OddOpWitness> odd) {
    CertNode n;
    n.rule = CertNode::Rule::OpJ;
    n.j = op_index;
    n.odd_op = odd_op;
    n.odd = std::move(odd);
    n.kids = std::move(kids);
    Vec00 sum;
    for (const auto& k : n.kids) sum = sum + k.f.v;
    n.f = Func::type1(sum.scaled(Rat(1) / profile.m(op_index)), op_index);
    return n;
}

CertNode l2_node(std::vector<Rat> coeffs, std::vector<CertNode> kids) {
    CertNode n;
    n.rule = CertNode::Rule::L2Combo;
    n.coeffs = std::move(coeffs);
    n.kids = std::move(kids);
    Vec00 sum;
    for (size_t i = 0; i < n.kids.size(); ++i) sum = sum + n.kids[i].f.v.scaled(n.coeffs[i]);
    n.f.v = sum;
    n.f.tag = FuncTag::TypeII;
    return n;
}

CertNode convex_node(std::vector<Rat> coeffs, std::vector<CertNode> kids) {
    CertNode n;
    n.rule = CertNode::Rule::RationalConvex;
    n.coeffs = std::move(coeffs);
    n.kids = std::move(kids);
    Vec00 sum;
    for (size_t i = 0; i < n.kids.size(); ++i) sum = sum + n.kids[i].f.v.scaled(n.coeffs[i]);
    n.f.v = sum;
    n.f.tag = FuncTag::TypeIII;
    return n;
}

CertNode restrict_cert(const CertNode& node, const Interval& e, int sign) {
    CertNode out = node;
    if (node.rule == CertNode::Rule::GroundLeaf) {
        out.f.v = node.f.v.restrict_to(e).scaled(Rat(sign));
        GroundCert& g = out.ground;
        switch (g.kind) {
            case GroundKind::G0:
                if (out.f.v.is_zero()) g.kind = GroundKind::Zero;
                else if (sign == -1) {
                    // a flipped coordinate functional is again a G0 element
                }
                break;
            case GroundKind::G1:
            case GroundKind::Cj0:
                if (out.f.v.is_zero()) g.kind = GroundKind::Zero;
                break;
            case GroundKind::Gsp: {
                Interval w = g.window;
                w.lo = std::max(w.lo, e.lo);
                if (e.hi != kNoBound) w.hi = w.hi == kNoBound ? e.hi : std::min(w.hi, e.hi);
                g.window = w;
                g.sign *= sign;
                if (out.f.v.is_zero()) g.kind = GroundKind::Zero;
                break;
            }
            case GroundKind::Gl2: {
                GroundCert ng;
                ng.kind = GroundKind::Gl2;
                ng.sign = g.sign * sign;
                for (size_t i = 0; i < g.comps.size(); ++i) {
                    Func rc = g.comps[i];
                    rc.v = rc.v.restrict_to(e);
                    if (rc.v.is_zero()) continue;
                    CertNode sub_leaf = restrict_cert(ground_leaf(g.comps[i], g.sub[i]), e, 1);
                    ng.comps.push_back(sub_leaf.f);
                    ng.sub.push_back(sub_leaf.ground);
                    ng.lambdas.push_back(g.lambdas[i]);
                }
                out.ground = ng;
                if (out.f.v.is_zero()) out.ground.kind = GroundKind::Zero;
                break;
            }
            case GroundKind::Zero:
                break;
        }
        return out;
    }
    out.sign = node.sign * sign;
    Interval w = node.window;
    w.lo = std::max(w.lo, e.lo);
    if (e.hi != kNoBound) w.hi = w.hi == kNoBound ? e.hi : std::min(w.hi, e.hi);
    out.window = w;
    out.f.v = node.f.v.restrict_to(e).scaled(Rat(sign));
    return out;
}

std::string cert_digest(const CertNode& node) {
    std::function<void(const CertNode&, std::ostringstream&)> walk = [&](const CertNode& n, std::ostringstream& os) {
        os << static_cast<int>(n.rule) << "|" << n.j << "|" << n.sign << "|" << n.window.str() << "|"
           << n.f.v.str() << "(";
        for (const auto& k : n.kids) walk(k, os);
        os << ")";
    };
    std::ostringstream os;
    walk(node, os);
    return hex64(fnv1a64(os.str()));
}

// ------------------------------------------------------------ enumeration

EnumResult g1_enumerate(int j, const Interval& window, const ParameterProfile& profile, size_t cap) {
    if (!window.bounded()) throw PreconditionError("g1_enumerate needs a finite window");
    if (!profile.has_index(2 * j - 1)) throw PreconditionError("index outside profile horizon");
    EnumResult out;
    std::vector<int> coords;
    for (int i = window.lo; i <= window.hi; ++i) coords.push_back(i);
    size_t max_size = coords.size();
    {
        Rat nn = profile.n(2 * j - 1);
        if (Rat(static_cast<long>(max_size)) > nn)
            max_size = static_cast<size_t>(profile.n_int(2 * j - 1));
    }
    Rat mm = profile.m(2 * j - 1);
    Rat coeff = Rat(1) / (mm * mm);

    std::vector<int> subset;
    std::function<bool(size_t)> go = [&](size_t from) -> bool {
        if (!subset.empty()) {
            size_t k = subset.size();
            for (std::uint64_t bits = 0; bits < (1ULL << k); ++bits) {
                if (out.funcs.size() >= cap) {
                    out.truncated = true;
                    return false;
                }
                Vec00 v;
                for (size_t i = 0; i < k; ++i)
                    v.set(subset[i], (bits >> i) & 1 ? -coeff : coeff);
                out.funcs.push_back(Func::g1(v, j));
            }
        }
        if (subset.size() == max_size) return true;
        for (size_t c = from; c < coords.size(); ++c) {
            subset.push_back(coords[c]);
            bool keep = go(c + 1);
            subset.pop_back();
            if (!keep) return false;
        }
        return true;
    };
    go(0);
    std::sort(out.funcs.begin(), out.funcs.end(),
              [](const Func& a, const Func& b) { return canonical_serialize(a) < canonical_serialize(b); });
    return out;
}

EnumResult w_enumerate(int j0, int depth, const Interval& window, const ParameterProfile& profile,
                       size_t cap) {
    if (!window.bounded()) throw PreconditionError("w_enumerate needs a finite window");
    if (depth < 0 || depth > 3) throw PreconditionError("w_enumerate depth must be in [0,3]");
    RuleSet rules = RuleSet::W(j0);
    EnumResult out;

    auto push = [&](std::vector<Func>& layer, std::set<std::string>& seen, Func f) -> bool {
        std::string key = canonical_serialize(f);
        if (seen.count(key)) return true;
        if (layer.size() + out.funcs.size() >= cap) {
            out.truncated = true;
            return false;
        }
        seen.insert(key);
        layer.push_back(std::move(f));
        return true;
    };

    // layer 0: C_{j0} over the window
    std::vector<Func> prev;
    {
        std::set<std::string> seen;
        std::vector<int> coords;
        for (int i = window.lo; i <= window.hi; ++i) coords.push_back(i);
        size_t max_size = coords.size();
        if (Rat(static_cast<long>(max_size)) > profile.n(j0 - 1))
            max_size = static_cast<size_t>(profile.n_int(j0 - 1));
        std::vector<int> subset;
        std::function<bool(size_t)> go = [&](size_t from) -> bool {
            if (!subset.empty()) {
                size_t k = subset.size();
                for (std::uint64_t bits = 0; bits < (1ULL << k); ++bits) {
                    Vec00 v;
                    for (size_t i = 0; i < k; ++i) v.set(subset[i], (bits >> i) & 1 ? Rat(-1) : Rat(1));
                    Func f;
                    f.v = v;
                    f.tag = FuncTag::Ground;
                    f.gkind = GroundKind::Cj0;
                    if (!push(prev, seen, f)) return false;
                }
            }
            if (subset.size() == max_size) return true;
            for (size_t c = from; c < coords.size(); ++c) {
                subset.push_back(coords[c]);
                if (!go(c + 1)) return false;
                subset.pop_back();
            }
            return true;
        };
        go(0);
    }
    out.funcs = prev;

    for (int layer = 1; layer <= depth && !out.truncated; ++layer) {
        std::vector<Func> cur;
        std::set<std::string> seen;
        // W_n^1: (A_{2 n_j}, m_j^-1)-operations on successive tuples of the
        // previous layer.
        for (int j = 1; profile.has_index(j) && !out.truncated; ++j) {
            BigInt arity = rules.op_arity(j, profile);
            Rat inv = Rat(1) / profile.m(j);
            std::vector<const Func*> tuple;
            std::function<bool(int)> build = [&](int min_coord) -> bool {
                if (!tuple.empty()) {
                    Vec00 sum;
                    for (const Func* g : tuple) sum = sum + g->v;
                    Func f = Func::type1(sum.scaled(inv), j);
                    if (!push(cur, seen, f)) return false;
                }
                if (Rat(static_cast<long>(tuple.size())) >= Rat(arity)) return true;
                for (const Func& g : prev) {
                    if (g.v.is_zero()) continue;
                    if (g.v.min_support() < min_coord) continue;
                    tuple.push_back(&g);
                    bool keep = build(g.v.max_support() + 1);
                    tuple.pop_back();
                    if (!keep) return false;
                }
                return true;
            };
            build(window.lo);
        }
        // W_n^2: canonical uniform-coefficient instances of the type II rule:
        // distinct-weight type I children from the previous layer plus fresh
        // coordinates, coefficients 1/k with k the number of children.
        if (!out.truncated) {
            std::vector<const Func*> type1;
            for (const Func& g : prev)
                if (g.tag == FuncTag::TypeI) type1.push_back(&g);
            std::vector<int> coords;
            for (int i = window.lo; i <= window.hi; ++i) coords.push_back(i);

            std::vector<const Func*> chosen;
            std::set<int> weights;
            std::function<bool(size_t, size_t)> build = [&](size_t from_f, size_t from_c) -> bool {
                size_t k = chosen.size() + 0;
                (void)k;
                // combos of fresh coordinates appended after functional choices
                std::function<bool(size_t, std::vector<int>&)> fresh = [&](size_t cfrom,
                                                                           std::vector<int>& picked) -> bool {
                    size_t total = chosen.size() + picked.size();
                    if (total >= 1) {
                        Rat lam(1, static_cast<long>(total));
                        Vec00 sum;
                        for (const Func* g : chosen) sum = sum + g->v.scaled(lam);
                        for (int t : picked) sum.add(t, lam);
                        Func f;
                        f.v = sum;
                        f.tag = FuncTag::TypeII;
                        if (!push(cur, seen, f)) return false;
                    }
                    for (size_t c = cfrom; c < coords.size(); ++c) {
                        picked.push_back(coords[c]);
                        bool keep = fresh(c + 1, picked);
                        picked.pop_back();
                        if (!keep) return false;
                    }
                    return true;
                };
                std::vector<int> picked;
                if (!fresh(from_c, picked)) return false;
                for (size_t i = from_f; i < type1.size(); ++i) {
                    if (weights.count(type1[i]->index)) continue;
                    chosen.push_back(type1[i]);
                    weights.insert(type1[i]->index);
                    bool keep = build(i + 1, from_c);
                    weights.erase(type1[i]->index);
                    chosen.pop_back();
                    if (!keep) return false;
                }
                return true;
            };
            build(0, 0);
        }
        for (const Func& f : cur) out.funcs.push_back(f);
        prev = std::move(cur);
    }
    std::sort(out.funcs.begin(), out.funcs.end(),
              [](const Func& a, const Func& b) { return canonical_serialize(a) < canonical_serialize(b); });
    out.funcs.erase(std::unique(out.funcs.begin(), out.funcs.end(),
                                [](const Func& a, const Func& b) {
                                    return canonical_serialize(a) == canonical_serialize(b);
                                }),
                    out.funcs.end());
    return out;
}

}  // namespace tslab
