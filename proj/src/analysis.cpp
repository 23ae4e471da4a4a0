#include "tslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tslab {

SeparatedReport separated_check(const std::vector<Vec00>& xs, const std::vector<Func>& universe,
                                const Rat& eps) {
    SeparatedReport rep;
    for (const auto& phi : universe) {
        std::vector<int> hits;
        for (size_t n = 0; n < xs.size(); ++n)
            if (rat_abs(phi.v.dot(xs[n])) >= eps) hits.push_back(static_cast<int>(n + 1));
        if (hits.size() >= 2) {
            rep.separated = false;
            rep.offenders.push_back({phi, hits});
        }
    }
    return rep;
}

SeparatedAverages build_separated_averages(const std::vector<Vec00>& xs, const Rat& C, const Rat& eps,
                                           const ParameterProfile& profile) {
    SeparatedAverages out;
    // y_n = (1/n) sum_{i in F_n} x_i with #F_n = n, F_n < F_{n+1}
    size_t used = 0, n = 1;
    while (used + n <= xs.size()) {
        Vec00 sum;
        for (size_t i = 0; i < n; ++i) sum = sum + xs[used + i];
        out.ys.push_back(sum.scaled(Rat(1, static_cast<long>(n))));
        used += n;
        ++n;
    }
    if (out.ys.empty()) {
        out.note = "not enough input blocks";
        return out;
    }
    // pick (j_i, l_i): eps * m_{2j_i-1}^2 > C * #ran(y_{l_i}) and
    // eps * l_i > C * n_{2j_{i-1}-1}
    int prev_j = 0;
    size_t next_l = 1;
    while (true) {
        // smallest admissible l_i
        size_t li = next_l;
        if (prev_j > 0) {
            Rat bound = C * profile.n(2 * prev_j - 1) / eps;
            while (Rat(static_cast<long>(li)) <= bound) ++li;
        }
        if (li > out.ys.size()) break;
        const Vec00& y = out.ys[li - 1];
        Rat span(static_cast<long>(y.is_zero() ? 0 : y.max_support() - y.min_support() + 1));
        int ji = 0;
        for (int j = 1; profile.has_index(2 * j - 1); ++j) {
            Rat mm = profile.m(2 * j - 1);
            if (eps * mm * mm > C * span) {
                ji = j;
                break;
            }
        }
        if (ji == 0) {
            out.note = "profile too small to satisfy the first growth inequality";
            return out;
        }
        out.picks.push_back({ji, static_cast<int>(li)});
        prev_j = ji;
        next_l = li + 1;
        if (out.picks.size() >= 8) break;
    }
    if (out.picks.size() < 2) {
        out.note = "profile too small to satisfy the second growth inequality";
        return out;
    }
    out.ok = true;
    return out;
}

RISWitness ris_check(const std::vector<Vec00>& xs, const std::vector<int>& jk, const Rat& C,
                     const Rat& eps, const NormEngine& eng, const RuleSet& rules, int sample_window_cap) {
    RISWitness w;
    w.C = C;
    w.eps = eps;
    w.jk = jk;
    if (xs.size() != jk.size() || xs.empty()) throw PreconditionError("ris_check: xs/jk size mismatch");
    for (size_t i = 0; i + 1 < jk.size(); ++i)
        if (jk[i] >= jk[i + 1]) throw PreconditionError("ris_check: jk must be strictly increasing");
    const ParameterProfile& p = eng.profile();

    // (a) ||x_k|| <= 1, via certified upper bounds
    w.cond_a.granularity = "upper-bound";
    for (size_t k = 0; k < xs.size(); ++k) {
        NormResult r = eng.extension_norm(xs[k], rules, 1);
        if (!(r.upper <= ExactValue::of_rational(Rat(1)))) {
            w.cond_a.ok = false;
            w.cond_a.detail = "upper bound exceeds 1 at k=" + std::to_string(k + 1);
            break;
        }
    }

    // (b) exact arithmetic
    w.cond_b.granularity = "exact";
    {
        Rat m1 = p.m(2 * jk[0]);
        if (!(Rat(1) < eps * eps * m1)) {
            w.cond_b.ok = false;
            w.cond_b.detail = "m_{2j_1}^{-1/2} >= eps";
        }
        for (size_t k = 0; k + 1 < xs.size() && w.cond_b.ok; ++k) {
            if (xs[k].is_zero()) continue;
            Rat span(static_cast<long>(xs[k].max_support() - xs[k].min_support() + 1));
            Rat mnext = p.m(2 * jk[k + 1]);
            if (!(span * span < eps * eps * mnext)) {
                w.cond_b.ok = false;
                w.cond_b.detail = "#ran(x_k) m_{2j_{k+1}}^{-1/2} >= eps at k=" + std::to_string(k + 1);
            }
        }
    }

    // (c) sampled over depth-1 weighted functionals within the joint range
    w.cond_c.granularity = "sampled";
    {
        Interval range{xs.front().min_support(),
                       std::min(xs.back().max_support(), xs.front().min_support() + sample_window_cap * 4)};
        for (size_t k = 0; k < xs.size() && w.cond_c.ok; ++k) {
            for (int oi = 1; oi <= eng.op_horizon() && w.cond_c.ok; ++oi) {
                if (!(p.m(oi) < p.m(2 * jk[k]))) continue;
                // sampled instances (1/m_oi) sum_{i in E} +-e_i* over the vector's range
                Interval vr = xs[k].is_zero() ? range : xs[k].range();
                std::vector<std::pair<Rat, int>> mags;
                for (const auto& [i, c] : xs[k].entries()) mags.push_back({rat_abs(c), i});
                std::sort(mags.rbegin(), mags.rend());
                Rat top(0);
                BigInt arity = p.n_int(oi);
                for (size_t i = 0; i < mags.size() && BigInt(static_cast<long>(i)) < arity; ++i)
                    top += mags[i].first;
                Rat action = top / p.m(oi);
                if (!(action <= C / p.m(oi))) {
                    w.cond_c.ok = false;
                    w.cond_c.detail = "sampled weighted functional exceeds C/w(f) at k=" + std::to_string(k + 1);
                }
                (void)vr;
            }
        }
    }
    w.ok = w.cond_a.ok && w.cond_b.ok && w.cond_c.ok;
    return w;
}

// ------------------------------------------------- basic inequality

namespace {

struct BiCtx {
    const BasicInequalityInput* in;
    const NormEngine* eng;
    const ParameterProfile* p;
    bool failed = false;
    std::string note;
};

CertNode zero_leaf() {
    Func zf;
    zf.gkind = GroundKind::Zero;
    return ground_leaf(zf, GroundCert{GroundKind::Zero});
}

CertNode scaled_unit_leaf(int k, const Rat& scalar) {
    // rational convex combination scalar * e*_k (scalar in [0,1])
    CertNode leaf = ground_leaf(Func::ground0(k), GroundCert{GroundKind::Cj0});
    return convex_node({scalar}, {leaf});
}

// distributes a node's window and sign into its children
CertNode push_down(const CertNode& node) {
    if (node.rule == CertNode::Rule::GroundLeaf) return node;
    if (node.sign == 1 && node.window.lo <= 1 && node.window.hi == kNoBound) return node;
    CertNode out = node;
    out.sign = 1;
    out.window = Interval{1, kNoBound};
    std::vector<CertNode> kids;
    std::vector<Rat> coeffs;
    for (size_t i = 0; i < node.kids.size(); ++i) {
        // the sign distributes into operation children; for combinations it
        // folds into the coefficients below
        CertNode k = restrict_cert(node.kids[i], node.window, node.rule == CertNode::Rule::OpJ ? node.sign : 1);
        if (k.f.v.is_zero()) continue;
        kids.push_back(k);
        if (!node.coeffs.empty())
            coeffs.push_back(node.rule == CertNode::Rule::L2Combo ? node.coeffs[i] * node.sign
                                                                  : node.coeffs[i]);
    }
    out.kids = std::move(kids);
    if (!node.coeffs.empty()) out.coeffs = std::move(coeffs);
    if (node.rule == CertNode::Rule::RationalConvex && node.sign == -1) {
        // convex coefficients must stay nonnegative; flip the children
        for (auto& k : out.kids) k = restrict_cert(k, Interval{1, kNoBound}, -1);
    }
    return out;
}

struct BiOut {
    CertNode g;
    ExactValue eps_f;
};

bool is_scaled_unit(const CertNode& g, int* k, Rat* scalar) {
    if (g.rule != CertNode::Rule::RationalConvex || g.kids.size() != 1 || g.coeffs.size() != 1) return false;
    const CertNode& leaf = g.kids[0];
    if (leaf.rule != CertNode::Rule::GroundLeaf || leaf.f.v.support_size() != 1) return false;
    if (k) *k = leaf.f.v.min_support();
    if (scalar) *scalar = g.coeffs[0];
    return true;
}

BiOut bi_rec(BiCtx& ctx, const CertNode& raw, int lo, int hi) {
    const auto& xs = ctx.in->xs;
    const auto& jk = ctx.in->jk;
    const ParameterProfile& p = *ctx.p;
    BiOut out;
    out.eps_f = ExactValue::of_rational(ctx.in->eps);
    out.g = zero_leaf();
    if (lo > hi || ctx.failed) return out;
    CertNode node = push_down(raw);
    if (node.f.v.is_zero()) return out;

    // restrict to the positions the functional can see
    Interval fr = node.f.v.range();
    while (lo <= hi && (xs[static_cast<size_t>(lo - 1)].is_zero() ||
                        xs[static_cast<size_t>(lo - 1)].max_support() < fr.lo))
        ++lo;
    while (lo <= hi && (xs[static_cast<size_t>(hi - 1)].is_zero() ||
                        xs[static_cast<size_t>(hi - 1)].min_support() > fr.hi))
        --hi;
    if (lo > hi) return out;

    auto hits = [&](const Vec00& fv, int k) {
        const Vec00& x = xs[static_cast<size_t>(k - 1)];
        if (fv.is_zero() || x.is_zero()) return false;
        return fv.min_support() <= x.max_support() && x.min_support() <= fv.max_support();
    };

    switch (node.rule) {
        case CertNode::Rule::GroundLeaf: {
            std::vector<int> rf;
            for (int k = lo; k <= hi; ++k)
                if (rat_abs(node.f.v.dot(xs[static_cast<size_t>(k - 1)])) >= ctx.in->eps) rf.push_back(k);
            if (Rat(static_cast<long>(rf.size())) > p.n(ctx.in->j0 - 1)) {
                ctx.failed = true;
                ctx.note = "ground leaf hits more than n_{j0-1} vectors at level eps";
                return out;
            }
            if (rf.empty()) return out;
            Vec00 gv;
            for (int k : rf) gv.set(k, Rat(1));
            Func gf;
            gf.v = gv;
            gf.tag = FuncTag::Ground;
            gf.gkind = GroundKind::Cj0;
            out.g = ground_leaf(gf, GroundCert{GroundKind::Cj0});
            out.eps_f = ExactValue::of_rational(ctx.in->eps);
            return out;
        }

        case CertNode::Rule::OpJ: {
            Rat w = p.m(node.j);
            Rat eps = ctx.in->eps;
            auto scaled_case = [&](int k0) {
                Rat scalar = rat_abs(node.f.v.dot(xs[static_cast<size_t>(k0 - 1)]));
                if (scalar > 1) scalar = 1;  // convex coefficient cap; verified inequality decides
                BiOut o;
                o.g = scalar == 0 ? zero_leaf() : scaled_unit_leaf(k0, scalar);
                o.eps_f = ExactValue::of_sqrt(eps * eps / w);
                return o;
            };
            if (ctx.in->flag_ada && node.j == ctx.in->j0) {
                // the adapted case: pick the position with the largest |c_k f(x_k)|
                int k0 = lo;
                Rat best(-1);
                for (int k = lo; k <= hi; ++k) {
                    Rat v = rat_abs(ctx.in->coeffs[static_cast<size_t>(k - 1)] *
                                    node.f.v.dot(xs[static_cast<size_t>(k - 1)]));
                    if (v > best) {
                        best = v;
                        k0 = k;
                    }
                }
                return scaled_case(k0);
            }
            bool below_all = true;
            for (int k = lo; k <= hi; ++k)
                if (!(w < p.m(2 * jk[static_cast<size_t>(k - 1)]))) below_all = false;
            if (below_all) {
                // children split the interval
                std::vector<std::vector<int>> hit_lists(node.kids.size());
                std::map<int, int> hit_count;
                for (size_t i = 0; i < node.kids.size(); ++i)
                    for (int k = lo; k <= hi; ++k)
                        if (hits(node.kids[i].f.v, k)) {
                            hit_lists[i].push_back(k);
                            hit_count[k] += 1;
                        }
                std::vector<int> i0;
                for (const auto& [k, c] : hit_count)
                    if (c >= 2) i0.push_back(k);
                std::vector<std::pair<int, CertNode>> children;  // keyed by min position
                Rat eps_child(0);
                for (size_t i = 0; i < node.kids.size(); ++i) {
                    std::vector<int> only;
                    for (int k : hit_lists[i])
                        if (hit_count[k] == 1) only.push_back(k);
                    if (only.empty()) continue;
                    BiOut o = bi_rec(ctx, node.kids[i], only.front(), only.back());
                    if (ctx.failed) return out;
                    eps_child = std::max(eps_child, o.eps_f.upper_rat(192));
                    if (!o.g.f.v.is_zero()) children.push_back({o.g.f.v.min_support(), o.g});
                }
                for (int k : i0) children.push_back({k, ground_leaf(Func::ground0(k), GroundCert{GroundKind::Cj0})});
                if (eps_child == 0) eps_child = eps;
                std::sort(children.begin(), children.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                if (children.empty()) {
                    out.g = zero_leaf();
                } else {
                    std::vector<CertNode> kids;
                    for (auto& [_, c] : children) kids.push_back(std::move(c));
                    out.g = op_node(node.j, std::move(kids), p);
                }
                out.eps_f = ExactValue::of_rational(eps_child / w);
                return out;
            }
            bool above_all = true;
            for (int k = lo; k <= hi; ++k) {
                size_t kk = static_cast<size_t>(k - 1);
                if (kk + 1 >= jk.size()) {
                    above_all = false;  // no next index: treat the bound as infinite
                    break;
                }
                if (!(p.m(2 * jk[kk + 1]) <= w)) above_all = false;
            }
            if (above_all) {
                BiOut o;
                o.g = zero_leaf();
                o.eps_f = ExactValue::of_sqrt(eps * eps / w);
                return o;
            }
            int k0 = 0;
            for (int k = lo; k <= hi; ++k)
                if (p.m(2 * jk[static_cast<size_t>(k - 1)]) <= w) k0 = k;
            if (k0 == 0) k0 = lo;  // defensive; below_all should have caught this
            return scaled_case(k0);
        }

        case CertNode::Rule::L2Combo: {
            std::vector<std::pair<Rat, CertNode>> a_part;  // (|lambda_i|, op-shaped g_i)
            std::map<int, Rat> mu;                         // scalar parts per position
            Rat eps_sum(0);
            for (size_t i = 0; i < node.kids.size(); ++i) {
                int clo = 0, chi = 0;
                for (int k = lo; k <= hi; ++k)
                    if (hits(node.kids[i].f.v, k)) {
                        if (clo == 0) clo = k;
                        chi = k;
                    }
                if (clo == 0) continue;
                BiOut o = bi_rec(ctx, node.kids[i], clo, chi);
                if (ctx.failed) return out;
                Rat lam = rat_abs(node.coeffs[i]);
                eps_sum += lam * o.eps_f.upper_rat(192);
                int kpos;
                Rat scalar;
                if (o.g.f.v.is_zero()) continue;
                if (is_scaled_unit(o.g, &kpos, &scalar)) {
                    mu[kpos] += lam * scalar;
                } else {
                    a_part.push_back({lam, o.g});
                }
            }
            std::vector<Rat> coeffs;
            std::vector<CertNode> kids;
            Rat sq(0);
            for (auto& [lam, gi] : a_part) {
                coeffs.push_back(lam);
                kids.push_back(gi);
                sq += lam * lam;
            }
            for (const auto& [k, s] : mu) {
                coeffs.push_back(s);
                kids.push_back(ground_leaf(Func::ground0(k), GroundCert{GroundKind::Cj0}));
                sq += s * s;
            }
            if (sq > 1) {
                ctx.failed = true;
                ctx.note = "type II recombination escapes the l2 ball";
                return out;
            }
            out.g = kids.empty() ? zero_leaf() : l2_node(std::move(coeffs), std::move(kids));
            out.eps_f = ExactValue::of_rational(eps_sum);
            return out;
        }

        case CertNode::Rule::RationalConvex: {
            std::vector<Rat> coeffs;
            std::vector<CertNode> kids;
            Rat eps_sum(0);
            for (size_t i = 0; i < node.kids.size(); ++i) {
                int clo = 0, chi = 0;
                for (int k = lo; k <= hi; ++k)
                    if (hits(node.kids[i].f.v, k)) {
                        if (clo == 0) clo = k;
                        chi = k;
                    }
                if (clo == 0) continue;
                BiOut o = bi_rec(ctx, node.kids[i], clo, chi);
                if (ctx.failed) return out;
                eps_sum += node.coeffs[i] * o.eps_f.upper_rat(192);
                if (o.g.f.v.is_zero()) continue;
                coeffs.push_back(node.coeffs[i]);
                kids.push_back(o.g);
            }
            out.g = kids.empty() ? zero_leaf() : convex_node(std::move(coeffs), std::move(kids));
            out.eps_f = ExactValue::of_rational(eps_sum);
            return out;
        }
    }
    return out;
}

// every operation node of the given index must satisfy the adapted bound on
// every subinterval
bool ada_holds(const BiCtx& ctx, const CertNode& node, int lo, int hi) {
    const auto& xs = ctx.in->xs;
    if (node.rule == CertNode::Rule::OpJ && node.j == ctx.in->j0) {
        for (int a = lo; a <= hi; ++a)
            for (int b = a; b <= hi; ++b) {
                Rat best(0), sum_abs(0);
                Rat lhs(0);
                Vec00 acc;
                for (int k = a; k <= b; ++k) {
                    const Rat& ck = ctx.in->coeffs[static_cast<size_t>(k - 1)];
                    acc = acc + xs[static_cast<size_t>(k - 1)].scaled(ck);
                    Rat v = rat_abs(ck * node.f.v.dot(xs[static_cast<size_t>(k - 1)]));
                    if (v > best) best = v;
                    sum_abs += rat_abs(ck);
                }
                lhs = rat_abs(node.f.v.dot(acc));
                // lhs <= C(best + eps m_{j0}^{-1/2} sum_abs), squared compare
                Rat slack = lhs - ctx.in->C * best;
                if (slack <= 0) continue;
                Rat rhs_sq = ctx.in->C * ctx.in->C * ctx.in->eps * ctx.in->eps * sum_abs * sum_abs /
                             ctx.eng->profile().m(ctx.in->j0);
                if (slack * slack > rhs_sq) return false;
            }
    }
    for (const auto& k : node.kids)
        if (!ada_holds(ctx, k, lo, hi)) return false;
    return true;
}

}  // namespace

BasicInequalityCertificate certify_basic_inequality(const BasicInequalityInput& in, const NormEngine& eng) {
    BasicInequalityCertificate cert;
    if (in.xs.size() != in.coeffs.size() || in.xs.size() != in.jk.size())
        throw PreconditionError("certify_basic_inequality: xs/coeffs/jk sizes differ");
    int lo = in.k_lo, hi = in.k_hi == 0 ? static_cast<int>(in.xs.size()) : in.k_hi;
    if (lo < 1 || hi > static_cast<int>(in.xs.size()))
        throw PreconditionError("certify_basic_inequality: bad interval");
    BiCtx ctx{&in, &eng, &eng.profile()};
    if (in.flag_ada && !ada_holds(ctx, in.f, lo, hi)) {
        cert.note = "adapted-bound precondition fails for a weight-m_{j0} node";
        return cert;
    }
    BiOut o = bi_rec(ctx, in.f, lo, hi);
    if (ctx.failed) {
        cert.note = ctx.note;
        return cert;
    }
    cert.g = o.g;
    cert.eps_f = o.eps_f;

    // exact verification of the inequality
    Vec00 combo, abs_e;
    Rat sum_abs(0);
    for (int k = lo; k <= hi; ++k) {
        const Rat& ck = in.coeffs[static_cast<size_t>(k - 1)];
        combo = combo + in.xs[static_cast<size_t>(k - 1)].scaled(ck);
        if (ck != 0) abs_e.set(k, rat_abs(ck));
        sum_abs += rat_abs(ck);
    }
    cert.lhs = rat_abs(in.f.f.v.dot(combo));
    Rat g_part = in.C * cert.g.f.v.dot(abs_e);
    if (cert.eps_f.rational) {
        Rat rhs = g_part + in.C * cert.eps_f.value * sum_abs;
        cert.rhs = ExactValue::of_rational(rhs);
        cert.inequality_ok = cert.lhs <= rhs;
    } else {
        // lhs <= g_part + C eps_f sum_abs with eps_f a square root: move the
        // rational part over and compare squares
        Rat slack = cert.lhs - g_part;
        Rat eps_term_sq = cert.eps_f.square * in.C * in.C * sum_abs * sum_abs;
        cert.inequality_ok = slack <= 0 || slack * slack <= eps_term_sq;
        cert.rhs = ExactValue::of_rational(g_part + sqrt_upper(eps_term_sq));  // reporting value
    }

    // W-membership of g
    if (cert.g.f.v.is_zero()) {
        cert.w_certified = true;
    } else {
        RuleSet wr = RuleSet::W(in.j0);
        MembershipCertificate mc{cert.g.f, cert.g, wr.name};
        Verdict v = verify_membership(cert.g.f, wr, mc, eng.profile(), eng.registry());
        cert.w_certified = v.ok;
        if (!v.ok) cert.note = "W certificate: " + v.category + ": " + v.message;
    }

    // type-I refinement
    if (in.f.rule == CertNode::Rule::OpJ) {
        cert.type1_input = true;
        int kpos;
        Rat scalar;
        cert.type1_shape_ok = cert.g.f.v.is_zero() || is_scaled_unit(cert.g, &kpos, &scalar) ||
                              (cert.g.rule == CertNode::Rule::OpJ && cert.g.j == in.f.j);
        Rat w = eng.profile().m(in.f.j);
        // eps_f <= eps w(f)^(-1/2), compared through squares
        cert.type1_epsf_ok = cert.eps_f.square * w <= in.eps * in.eps;
    }
    cert.ok = cert.inequality_ok && cert.w_certified;
    return cert;
}

// --------------------------------------------------------- tail index

int tail_index(const Vec00& x, const Rat& eps, const ParameterProfile& profile) {
    if (eps <= 0 || x.is_zero()) throw PreconditionError("tail_index needs eps > 0 and x != 0");
    Rat d = x.l1();
    Rat target = (eps / d) * (eps / d);
    // certified upper bounds t(j0) for the tail sum beyond j0
    auto tail_upper = [&](int j0) -> Rat {
        Rat sum(0);
        int j = j0 + 1;
        while (profile.has_index(2 * j - 1)) {
            bool materializable = !profile.is_paper() || profile.m_pow2(2 * j - 1).exponent * 4 <= 4096;
            if (!materializable) {
                // remaining terms are below 2^-4096; certify with that bound
                sum += Rat(1, BigInt(1) << 1024);
                return sum;
            }
            Rat mm = profile.m(2 * j - 1);
            sum += Rat(1) / (mm * mm * mm * mm);
            ++j;
            if (!profile.is_paper() && !profile.has_index(2 * j - 1)) break;
            if (profile.is_paper() && j > j0 + 64) {
                sum += Rat(1, BigInt(1) << 1024);
                return sum;
            }
        }
        return sum;
    };
    for (int j0 = 0;; ++j0) {
        if (tail_upper(j0) < target) return j0;
        if (j0 > 2 * profile.horizon() + 64) throw ResourceCapError("tail_index: no admissible j0 found");
    }
}

// --------------------------------------------------------- exact pairs

ExactPair build_exact_pair(const Interval& window, int j, const NormEngine& eng, int flat_len) {
    ExactPair out;
    out.index = 2 * j;
    const ParameterProfile& p = eng.profile();
    if (!p.has_index(2 * j)) {
        out.note = "profile has no index 2j";
        return out;
    }
    BigInt count_b = p.n_int(2 * j);
    if (count_b > 64) count_b = 64;  // desk-scale cap on the number of averages
    int count = static_cast<int>(count_b);
    int need = count * flat_len;
    if (!window.bounded() || window.hi - window.lo + 1 < need) {
        out.note = "window exhaustion: need " + std::to_string(need) + " coordinates";
        return out;
    }
    std::vector<Vec00> xi;
    std::vector<CertNode> fi;
    int pos = window.lo;
    for (int i = 0; i < count; ++i) {
        Vec00 flat;
        std::vector<CertNode> units;
        for (int t = 0; t < flat_len; ++t) {
            flat.set(pos + t, Rat(1, flat_len));
            units.push_back(ground_leaf(Func::ground0(pos + t), GroundCert{GroundKind::G0}));
        }
        pos += flat_len;
        // norming witness with value exactly 1 after rescaling the vector
        NormResult nr = eng.ground_norm(flat);
        if (nr.witness_l2_sup || nr.lower.square == 0) {
            // fall back to a coordinate witness
            nr.witness = units[0];
            nr.lower = ExactValue::of_rational(flat.linfty());
        }
        Rat lowv = nr.witness.f.v.dot(flat);
        if (lowv < 0) {
            nr.witness = restrict_cert(nr.witness, Interval{1, kNoBound}, -1);
            lowv = -lowv;
        }
        if (lowv == 0) {
            out.note = "degenerate norming witness";
            return out;
        }
        xi.push_back(flat.scaled(Rat(1) / lowv));
        fi.push_back(nr.witness);
    }
    CertNode fnode = op_node(2 * j, fi, p);
    Vec00 xsum;
    for (const auto& v : xi) xsum = xsum + v;
    Vec00 x = xsum.scaled(p.m(2 * j) / Rat(count));
    x = x.restrict_to(fnode.f.v.range());
    out.x = x;
    out.f = fnode.f;
    out.f_cert = fnode;
    out.built = true;

    // clause re-verification, recorded
    Rat fx = fnode.f.v.dot(x);
    out.clauses.push_back({"f(x)=1", fx == 1, rat_str(fx)});
    bool ranges = !x.is_zero() && x.range().lo == fnode.f.v.range().lo && x.range().hi == fnode.f.v.range().hi;
    out.clauses.push_back({"ran f = ran x", ranges, ""});
    NormResult nx = eng.extension_norm(x, RuleSet::K(eng.xi()), 2);
    out.C = Rat(3);
    // lower >= 1 holds by the f-witness; the upper side is the certified check
    bool norm_ok = nx.upper <= ExactValue::of_rational(3 * out.C);
    out.clauses.push_back({"1 <= ||x|| <= 3C", norm_ok, nx.lower.str() + " .. " + nx.upper.str()});
    Rat m2j = p.m(2 * j);
    out.clauses.push_back({"||x||_inf <= m_{2j}^{-2}", x.linfty() * m2j * m2j <= 1, rat_str(x.linfty())});
    // sampled type-I action bounds
    bool actions_ok = true;
    for (int oi = 1; oi <= eng.op_horizon(); ++oi) {
        std::vector<Rat> mags;
        for (const auto& [i, c] : x.entries()) mags.push_back(rat_abs(c));
        std::sort(mags.rbegin(), mags.rend());
        Rat top(0);
        BigInt arity = p.n_int(oi);
        for (size_t i = 0; i < mags.size() && BigInt(static_cast<long>(i)) < arity; ++i) top += mags[i];
        Rat action = top / p.m(oi);
        Rat bound = p.m(oi) < m2j ? 5 * out.C / p.m(oi) : 5 * out.C / m2j;
        if (action > bound) actions_ok = false;
    }
    out.clauses.push_back({"type-I action bounds (sampled)", actions_ok, ""});
    return out;
}

// --------------------------------------------------- attracting sequences

AttractingSequence build_attracting_sequence(int j, int support_start, NormEngine& eng,
                                             CodingRegistry& reg, bool l_mode) {
    AttractingSequence out;
    out.j = j;
    const ParameterProfile& p = eng.profile();
    int odd_index = 2 * j - 1;
    if (!p.has_index(odd_index)) {
        out.note = "profile has no n_{2j-1}";
        return out;
    }
    BigInt len_b = p.n_int(odd_index);
    if (len_b > 16) {
        out.note = "attractor length n_{2j-1} exceeds the desk-scale cap";
        return out;
    }
    int len = static_cast<int>(len_b);
    if (len % 2 != 0 || len < 2) {
        out.note = "attractor length must be even and >= 2";
        return out;
    }
    // j1 in N1 with m_{2 j1} > n_{2j-1}^3
    int j1 = 0;
    Rat n3 = p.n(odd_index);
    n3 = n3 * n3 * n3;
    for (int cand = 1; p.has_index(2 * cand); cand += 2)
        if (p.m(2 * cand) > n3) {
            j1 = cand;
            break;
        }
    if (j1 == 0) {
        out.note = "no admissible j1 in N1 within the profile horizon";
        return out;
    }

    StoredSequence st;
    st.j1 = j1;
    st.odd_j = j;
    int pos = support_start;
    std::vector<Func> prefix;
    auto flat_pair = [&](int weight_index, int blocklen) {
        // x = (m/len) sum e_t, f = m^-1 sum e*_t: an averaged pair with
        // f(x) = 1 and matching ranges
        std::vector<CertNode> units;
        Vec00 xv;
        for (int t = 0; t < blocklen; ++t) {
            units.push_back(ground_leaf(Func::ground0(pos + t), GroundCert{GroundKind::G0}));
            xv.set(pos + t, p.m(weight_index) / Rat(blocklen));
        }
        pos += blocklen;
        CertNode fnode = op_node(weight_index, std::move(units), p);
        return std::make_pair(xv, fnode);
    };

    for (int i = 1; i <= len; ++i) {
        if (i % 2 == 1) {
            int weight_index;
            if (i == 1) {
                weight_index = 2 * j1;
            } else {
                int v = reg.sigma_assign(prefix, p);
                weight_index = 2 * v;
            }
            BigInt bl = p.n_int(weight_index);
            int blocklen = bl > 4 ? 4 : static_cast<int>(bl);
            auto [xv, fnode] = flat_pair(weight_index, blocklen);
            out.xs.push_back(xv);
            out.fs.push_back(fnode.f);
            st.seq.push_back(fnode.f);
            st.entry_certs.push_back(fnode);
            prefix.push_back(fnode.f);
        } else {
            int cls = reg.sigma_assign(prefix, p);
            int lambda = LambdaPartition::pick(cls, pos - 1, l_mode);
            pos = lambda + 1;
            Func f = Func::ground0(lambda);
            out.xs.push_back(Vec00::unit(lambda));
            out.fs.push_back(f);
            st.seq.push_back(f);
            st.entry_certs.push_back(ground_leaf(f, GroundCert{GroundKind::G0}));
            prefix.push_back(f);
        }
    }
    Verdict v = check_attractor_sequence(st, j, RuleSet::K(eng.xi()), reg, p);
    if (!v.ok) {
        out.note = "attractor check failed: " + v.category + ": " + v.message;
        return out;
    }
    reg.store().attractors.push_back(st);
    out.stored = st;
    out.C = Rat(3);
    out.built = true;
    return out;
}

// ------------------------------------------------------ spreading constant

namespace {

double upper_eval(const NormOracle& oracle, const std::vector<Vec00>& xs, const std::vector<double>& a) {
    Vec00 combo;
    for (size_t i = 0; i < xs.size(); ++i) {
        // rationalize with denominator 2^20
        long num = std::lround(a[i] * 1048576.0);
        combo = combo + xs[i].scaled(Rat(num, 1048576));
    }
    return oracle(combo).upper.to_double();
}

}  // namespace

SpreadingBracket spreading_constant(const std::vector<Vec00>& xs, const Ordinal& xi, int min_start,
                                    const NormOracle& oracle, int budget) {
    SpreadingBracket out;
    out.lower = 0;
    out.upper = 0;
    FamilyEngine fam;
    // enumerate members of S_xi over positions [min_start, min_start+budget)
    std::vector<FinSet> members;
    {
        FinSet cur;
        std::function<void(int)> go = [&](int from) {
            for (int k = from; k < min_start + budget && static_cast<size_t>(k) <= xs.size(); ++k) {
                cur.push_back(k);
                if (fam.member(FamilySpec::S(xi), cur)) {
                    if (cur.size() >= 2) members.push_back(cur);
                    go(k + 1);
                }
                cur.pop_back();
            }
        };
        go(min_start);
    }
    if (members.size() > static_cast<size_t>(budget)) {
        members.resize(static_cast<size_t>(budget));
        out.budget_exhausted = true;
    }
    bool first = true;
    std::mt19937_64 rng(20240915);
    for (const auto& F : members) {
        std::vector<Vec00> sel;
        for (int i : F) sel.push_back(xs[static_cast<size_t>(i - 1)]);
        size_t n = sel.size();

        // upper bound for min ||sum a x|| via projected subgradient descent
        double best_up = 1e300;
        std::vector<double> best_a;
        for (int restart = 0; restart < 16; ++restart) {
            std::vector<double> a(n);
            double s = 0;
            for (auto& v : a) {
                v = std::uniform_real_distribution<double>(-1, 1)(rng);
                s += std::fabs(v);
            }
            for (auto& v : a) v /= s;
            double step = 0.25;
            double cur = upper_eval(oracle, sel, a);
            for (int it = 0; it < 60; ++it) {
                size_t ci = static_cast<size_t>(rng() % n);
                std::vector<double> b = a;
                b[ci] += (rng() % 2 ? step : -step);
                double t = 0;
                for (auto& v : b) t += std::fabs(v);
                for (auto& v : b) v /= t;
                double val = upper_eval(oracle, sel, b);
                if (val < cur) {
                    cur = val;
                    a = b;
                } else {
                    step *= 0.8;
                }
            }
            if (cur < best_up) {
                best_up = cur;
                best_a = a;
            }
        }
        // exact value at the rationalized best point
        Vec00 combo;
        Rat asum(0);
        std::vector<Rat> ar(n);
        for (size_t i = 0; i < n; ++i) {
            long num = std::lround(best_a[i] * 1048576.0);
            ar[i] = Rat(num, 1048576);
            asum += rat_abs(ar[i]);
        }
        if (asum == 0) {
            ar[0] = 1;
            asum = 1;
        }
        for (size_t i = 0; i < n; ++i) combo = combo + sel[i].scaled(ar[i] / asum);
        Rat up_exact = oracle(combo).upper.upper_rat();

        // certified lower bound: per-orthant exact LP against witness functionals
        if (n > 10) {
            if (first || up_exact < out.upper) out.upper = up_exact;
            if (first) out.lower = 0;
            first = false;
            out.examined.push_back(F);
            out.budget_exhausted = true;
            continue;
        }
        std::vector<Vec00> gs;
        for (size_t i = 0; i < n; ++i) {
            NormResult r = oracle(sel[i]);
            if (!r.witness_l2_sup) gs.push_back(r.witness.f.v);
        }
        {
            Vec00 sum;
            for (const auto& v : sel) sum = sum + v;
            NormResult r = oracle(sum);
            if (!r.witness_l2_sup) gs.push_back(r.witness.f.v);
        }
        Rat lo_f(-1);
        for (std::uint64_t orth = 0; orth < (1ULL << n); ++orth) {
            // vars: a_1..a_n, t ; maximize -t
            std::vector<Rat> c(n + 1, Rat(0));
            c[n] = -1;
            std::vector<LpRow> rows;
            for (const auto& g : gs) {
                LpRow r1;
                r1.a.assign(n + 1, Rat(0));
                for (size_t i = 0; i < n; ++i) r1.a[i] = g.dot(sel[i]);
                r1.a[n] = -1;
                r1.b = 0;
                rows.push_back(r1);
                LpRow r2 = r1;
                for (size_t i = 0; i < n; ++i) r2.a[i] = -r2.a[i];
                rows.push_back(r2);
            }
            for (size_t i = 0; i < n; ++i) {
                LpRow r;
                r.a.assign(n + 1, Rat(0));
                r.a[i] = (orth >> i) & 1 ? Rat(1) : Rat(-1);
                r.b = 0;
                rows.push_back(r);  // sign constraint: sigma_i a_i >= 0
            }
            LpRow sum1, sum2;
            sum1.a.assign(n + 1, Rat(0));
            for (size_t i = 0; i < n; ++i) sum1.a[i] = (orth >> i) & 1 ? Rat(-1) : Rat(1);
            sum1.b = 1;
            sum2 = sum1;
            for (auto& v : sum2.a) v = -v;
            sum2.b = -1;
            rows.push_back(sum1);
            rows.push_back(sum2);
            LpRow tcap;  // t bounded to keep the LP vertex-solvable
            tcap.a.assign(n + 1, Rat(0));
            tcap.a[n] = 1;
            tcap.b = 1000000;
            rows.push_back(tcap);
            auto sol = lp_max(c, rows);
            if (!sol) continue;
            Rat v = -sol->first;  // = min over the orthant of max_g
            if (lo_f < 0 || v < lo_f) lo_f = v;
        }
        if (lo_f < 0) lo_f = 0;
        if (first || up_exact < out.upper) out.upper = up_exact;
        if (first || lo_f < out.lower) out.lower = lo_f;
        first = false;
        out.examined.push_back(F);
    }
    if (out.lower > out.upper) out.lower = out.upper;
    return out;
}

// ---------------------------------------------------------- l1/c0 trees

L1TreeResult build_l1_tree(const std::vector<int>& pool, const Ordinal& xi, TreeMode mode,
                           CodingRegistry& reg, const ParameterProfile& profile, int branch_budget) {
    L1TreeResult out;
    FamilyEngine fam;
    if (pool.empty()) {
        out.note = "empty pool";
        return out;
    }
    // one chain per starting minimum, greedily consuming pool coordinates
    int branches = 0;
    out.complete = true;
    for (size_t start = 0; start < pool.size() && branches < branch_budget; ++start, ++branches) {
        std::vector<Func> chain;
        std::vector<Vec00> vecs;
        size_t cursor = start;
        int jcur = 1;  // j1 in M1
        bool chain_complete = false;
        while (true) {
            if (!profile.has_index(2 * jcur - 1)) break;
            BigInt need_b = profile.n_int(2 * jcur - 1);
            if (need_b > 64) break;
            size_t need = static_cast<size_t>(need_b);
            if (cursor + need > pool.size()) break;
            Rat mm = profile.m(2 * jcur - 1);
            Vec00 fv, xv;
            for (size_t t = 0; t < need; ++t) {
                fv.set(pool[cursor + t], Rat(1) / (mm * mm));
                xv.set(pool[cursor + t], mm * mm / Rat(static_cast<long>(need)));
            }
            cursor += need;
            Func f = Func::g1(fv, jcur);
            // the minima so far must stay admissible
            FinSet minima;
            for (const auto& g : chain) minima.push_back(g.v.min_support());
            minima.push_back(fv.min_support());
            if (!fam.member(FamilySpec::S(xi), minima)) break;
            chain.push_back(f);
            vecs.push_back(xv);
            if (fam.is_maximal(FamilySpec::S(xi), minima)) {
                chain_complete = true;
                break;
            }
            jcur = reg.sigma1_assign(chain, profile);
        }
        if (chain.empty()) continue;
        FinSet minima;
        for (const auto& g : chain) minima.push_back(g.v.min_support());
        out.minima_tree.insert_with_prefixes(minima);
        out.chains.push_back(chain);
        if (mode == TreeMode::L1Primal) out.vectors.push_back(vecs);
        if (!chain_complete) out.complete = false;
    }
    if (out.chains.empty()) {
        out.note = "pool too small for any chain";
        return out;
    }
    out.order = tree_order(out.minima_tree);
    if (!out.complete) out.note = "budget exhausted: some chains are partial";
    return out;
}

ExactValue segment_family_value(const std::vector<std::vector<Func>>& segments, const Vec00& x) {
    // pairwise disjoint index sets required
    std::set<int> seen;
    for (const auto& s : segments)
        for (const auto& f : s)
            if (!seen.insert(f.index).second)
                throw PreconditionError("segment_family_value: index sets are not pairwise disjoint");
    Rat sq(0);
    for (const auto& s : segments) {
        Rat v(0);
        for (const auto& f : s) v += rat_abs(f.v.dot(x));
        sq += v * v;
    }
    return ExactValue::of_sqrt(sq);
}

int threshold_count(const std::vector<Vec00>& ys, const std::vector<Func>& universe, const Rat& threshold) {
    int best = 0;
    for (const auto& g : universe) {
        int c = 0;
        for (const auto& y : ys)
            if (rat_abs(g.v.dot(y)) >= threshold) ++c;
        best = std::max(best, c);
    }
    return best;
}

}  // namespace tslab
