#include "tslab/norm_engine.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace tslab {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Exhaustive: return "exhaustive";
        case Provenance::L1Cap: return "l1-cap";
        case Provenance::DepthSaturation: return "depth-saturation";
    }
    return "?";
}

ExactValue eval_witness(const NormResult& r, const Vec00& x) {
    if (!r.witness_l2_sup) return ExactValue::of_rational(r.witness.f.v.dot(x));
    Rat sq(0);
    for (const auto& part : r.l2_parts) {
        Rat a = part.f.v.dot(x);
        sq += a * a;
    }
    return ExactValue::of_sqrt(sq);
}

NormEngine::NormEngine(const ParameterProfile& profile, const CodingRegistry& registry, Ordinal xi,
                       int paper_index_cap)
    : profile_(profile), registry_(registry), xi_(std::move(xi)), paper_index_cap_(paper_index_cap) {}

int NormEngine::index_horizon(int) const {
    return profile_.is_paper() ? paper_index_cap_ : profile_.horizon();
}

std::pair<Rat, Vec00> NormEngine::g1_best(const Vec00& x, int j) const {
    if (!profile_.has_index(2 * j - 1)) return {Rat(0), Vec00()};
    std::vector<std::pair<Rat, int>> mags;
    for (const auto& [i, c] : x.entries()) mags.push_back({rat_abs(c), i});
    std::sort(mags.begin(), mags.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    size_t t = mags.size();
    if (Rat(static_cast<long>(t)) > profile_.n(2 * j - 1))
        t = static_cast<size_t>(profile_.n_int(2 * j - 1));
    Rat mm = profile_.m(2 * j - 1);
    Rat coeff = Rat(1) / (mm * mm);
    Rat sum(0);
    Vec00 w;
    for (size_t i = 0; i < t; ++i) {
        sum += mags[i].first;
        const Rat& xv = x.at(mags[i].second);
        w.set(mags[i].second, xv >= 0 ? coeff : -coeff);
    }
    return {sum * coeff, w};
}

std::vector<SpecialChain> NormEngine::realizable_chains() const {
    std::vector<SpecialChain> out;
    FamilyEngine fam;
    for (const auto& [key, value] : registry_.sigma1_entries()) {
        SpecialChain ch;
        ch.comps = parse_prefix(key.substr(3));
        ch.next_index = value;
        Verdict v = check_special_sequence(ch.comps, xi_, registry_, profile_);
        ch.valid = v.ok;
        out.push_back(std::move(ch));
    }
    return out;
}

namespace {

struct GspCandidate {
    Rat value;
    std::vector<int> inds;
    GroundCert cert;
    Func f;
};

// candidate interval endpoints: support coordinates plus unbounded right end
std::vector<Interval> candidate_windows(const Vec00& x) {
    std::vector<int> sup = x.support();
    std::vector<Interval> out;
    for (size_t a = 0; a < sup.size(); ++a)
        for (size_t b = a; b < sup.size(); ++b) out.push_back(Interval{sup[a], sup[b]});
    return out;
}

}  // namespace

NormEngine::LayerBest NormEngine::ground_layers(const Vec00& x, bool allow_sqrt, Rat* l2_tail_sq) const {
    LayerBest best;
    if (l2_tail_sq) *l2_tail_sq = 0;
    if (x.is_zero()) {
        Func zf;
        zf.gkind = GroundKind::Zero;
        best.witness = ground_leaf(zf, GroundCert{GroundKind::Zero});
        return best;
    }
    int horizon = index_horizon();

    // G0 layer
    {
        Rat mx(0);
        int arg = 0;
        for (const auto& [i, c] : x.entries()) {
            Rat a = rat_abs(c);
            if (a > mx) {
                mx = a;
                arg = i;
            }
        }
        best.value = ExactValue::of_rational(mx);
        best.witness = ground_leaf(Func::ground0(arg, x.at(arg) >= 0 ? 1 : -1), GroundCert{GroundKind::G0});
    }

    // G1 layer; values retained per index for the l2 layer
    std::map<int, std::pair<Rat, Vec00>> g1_vals;
    for (int j = 1; 2 * j - 1 <= horizon; ++j) {
        auto [val, wvec] = g1_best(x, j);
        if (val == 0) continue;
        g1_vals[j] = {val, wvec};
        if (ExactValue::of_rational(val) < best.value) continue;
        if (ExactValue::of_rational(val) == best.value) continue;
        best.value = ExactValue::of_rational(val);
        GroundCert g;
        g.kind = GroundKind::G1;
        g.j = j;
        best.witness = ground_leaf(Func::g1(wvec, j), g);
        best.l2_sup = false;
    }

    // Gsp layer: registry-realizable chains, all interval restrictions,
    // optimal signs, plus a greedy free-tail extension.
    std::vector<GspCandidate> candidates;
    auto windows = candidate_windows(x);
    FamilyEngine fam;
    for (const auto& ch : realizable_chains()) {
        if (!ch.valid) continue;
        for (const auto& win : windows) {
            Rat val(0);
            std::vector<int> signs;
            Vec00 composed;
            bool any = false;
            for (const auto& f : ch.comps) {
                Vec00 rv = f.v.restrict_to(win);
                Rat a = rv.dot(x);
                int sg = a >= 0 ? 1 : -1;
                signs.push_back(sg);
                if (!rv.is_zero()) any = true;
                val += rat_abs(a);
                composed = composed + rv.scaled(Rat(sg));
            }
            if (!any) continue;
            GspCandidate cand;
            cand.value = val;
            cand.inds = gsp_ind_set(ch.comps, win);
            GroundCert g;
            g.kind = GroundKind::Gsp;
            g.comps = ch.comps;
            g.signs = signs;
            g.window = win;
            cand.cert = g;
            cand.f.v = composed;
            cand.f.tag = FuncTag::Ground;
            cand.f.gkind = GroundKind::Gsp;
            cand.f.ind_set = cand.inds;
            candidates.push_back(cand);

            // free tail: one more G1 element with the registry-prescribed index
            int jn = ch.next_index;
            if (profile_.has_index(2 * jn - 1) && jn > ch.comps.back().index) {
                Interval tail_win{ch.comps.back().v.max_support() + 1, win.hi};
                Vec00 xt = x.restrict_to(tail_win);
                if (!xt.is_zero()) {
                    auto [tval, tw] = g1_best(xt, jn);
                    if (tval > 0) {
                        // only extend full (unrestricted-head) chains
                        bool full_head = true;
                        for (const auto& f : ch.comps)
                            if (f.v.restrict_to(win) != f.v) full_head = false;
                        if (full_head) {
                            FinSet mm;
                            for (const auto& f : ch.comps) mm.push_back(f.v.min_support());
                            mm.push_back(tw.min_support());
                            if (finset_valid(mm) && fam.member(FamilySpec::S(xi_), mm)) {
                                GspCandidate c2 = cand;
                                Func tailf = Func::g1(tw, jn);
                                c2.cert.comps.push_back(tailf);
                                c2.cert.signs.push_back(1);
                                c2.value = val + tval;
                                c2.inds.push_back(jn);
                                c2.f.v = c2.f.v + tw;
                                c2.f.ind_set = c2.inds;
                                candidates.push_back(c2);
                            }
                        }
                    }
                }
            }
        }
    }
    for (const auto& cand : candidates) {
        ExactValue v = ExactValue::of_rational(cand.value);
        if (best.value < v) {
            best.value = v;
            best.witness = ground_leaf(cand.f, cand.cert);
            best.l2_sup = false;
        }
    }

    if (!allow_sqrt) return best;

    // Gl2 layer: best disjoint-index selection, closed form sqrt of the sum
    // of squares.  Chain candidates are pruned to the strongest few.
    std::sort(candidates.begin(), candidates.end(),
              [](const GspCandidate& a, const GspCandidate& b) { return a.value > b.value; });
    if (candidates.size() > 24) candidates.resize(24);

    Rat base_sq(0);
    for (const auto& [j, vw] : g1_vals) base_sq += vw.first * vw.first;

    Rat best_sq = base_sq;
    std::vector<int> best_sel;
    std::vector<int> sel;
    std::function<void(size_t, Rat, std::vector<int>&)> go = [&](size_t from, Rat acc, std::vector<int>& covered) {
        if (acc > best_sq) {
            best_sq = acc;
            best_sel = sel;
        }
        for (size_t i = from; i < candidates.size(); ++i) {
            bool clash = false;
            for (int ind : candidates[i].inds)
                if (std::count(covered.begin(), covered.end(), ind)) clash = true;
            if (clash) continue;
            // swap in the chain: remove the plain G1 squares it covers
            Rat delta = candidates[i].value * candidates[i].value;
            for (int ind : candidates[i].inds) {
                auto it = g1_vals.find(ind);
                if (it != g1_vals.end()) delta -= it->second.first * it->second.first;
            }
            size_t cov0 = covered.size();
            for (int ind : candidates[i].inds) covered.push_back(ind);
            sel.push_back(static_cast<int>(i));
            go(i + 1, acc + delta, covered);
            sel.pop_back();
            covered.resize(cov0);
        }
    };
    std::vector<int> covered;
    go(0, base_sq, covered);

    ExactValue l2v = ExactValue::of_sqrt(best_sq);
    if (best.value < l2v) {
        best.value = l2v;
        best.l2_sup = true;
        best.l2_parts.clear();
        std::vector<int> covered_inds;
        for (int ci : best_sel) {
            best.l2_parts.push_back(ground_leaf(candidates[static_cast<size_t>(ci)].f,
                                                candidates[static_cast<size_t>(ci)].cert));
            for (int ind : candidates[static_cast<size_t>(ci)].inds) covered_inds.push_back(ind);
        }
        for (const auto& [j, vw] : g1_vals) {
            if (std::count(covered_inds.begin(), covered_inds.end(), j)) continue;
            GroundCert g;
            g.kind = GroundKind::G1;
            g.j = j;
            best.l2_parts.push_back(ground_leaf(Func::g1(vw.second, j), g));
        }
        // assemble a display functional for the witness direction
        Func dir;
        dir.tag = FuncTag::Ground;
        dir.gkind = GroundKind::Gl2;
        best.witness = ground_leaf(dir, GroundCert{GroundKind::Gl2});
    }

    if (profile_.is_paper() && l2_tail_sq) {
        // tail of sum_j (||x||_1 / m_{2j-1}^2)^2 beyond the index cap
        BigInt e = 4 * [&] {
            BigInt p = 1;
            for (int i = 0; i < 2 * horizon + 1; ++i) p *= 5;
            return p;
        }();
        unsigned shift = e - 1 > 512 ? 512u : static_cast<unsigned>(e - 1);
        Rat tail = Rat(1, BigInt(1) << shift);
        Rat l1 = x.l1();
        *l2_tail_sq = l1 * l1 * tail;
    }
    return best;
}

NormResult NormEngine::ground_norm(const Vec00& x) const {
    Rat tail_sq(0);
    LayerBest lb = ground_layers(x, true, &tail_sq);
    NormResult r;
    r.lower = lb.value;
    r.witness = lb.witness ? *lb.witness : CertNode{};
    r.witness_l2_sup = lb.l2_sup;
    r.l2_parts = lb.l2_parts;
    if (tail_sq == 0) {
        r.upper = r.lower;
        r.prov = Provenance::Exhaustive;
    } else {
        r.upper = ExactValue::of_sqrt(lb.value.square + tail_sq);
        if (ExactValue::of_rational(x.l1()) < r.upper) r.upper = ExactValue::of_rational(x.l1());
        r.prov = Provenance::DepthSaturation;
        r.note = "l2 layer index-capped at the paper profile; tail folded into upper";
    }
    return r;
}

// ----------------------------------------------------------------- DP

namespace {

struct DpChoice {
    enum class Kind { Ground, Op, Odd } kind = Kind::Ground;
    int op_index = 0;
    std::vector<std::pair<int, int>> splits;  // support-position blocks [a,b]
    int odd_seq = -1;
    Interval odd_window;
    int odd_sign = 1;
    int odd_op_index = 0;
};

struct DpEntry {
    Rat value;
    DpChoice choice;
};

struct DpState {
    const NormEngine* eng;
    const Vec00* x;
    const RuleSet* rules;
    std::vector<int> sup;
    std::map<std::tuple<int, int, int>, DpEntry> memo;
};

}  // namespace

struct NormEngineDp {
    static Rat ground_rational(const NormEngine& eng, const RuleSet& rules, const Vec00& xe,
                               CertNode* wit) {
        if (xe.is_zero()) {
            if (wit) {
                Func zf;
                zf.gkind = GroundKind::Zero;
                *wit = ground_leaf(zf, GroundCert{GroundKind::Zero});
            }
            return Rat(0);
        }
        switch (rules.ground) {
            case RuleSet::Ground::Gxi: {
                auto lb = eng.ground_layers_public(xe, false);
                if (wit && lb.witness) *wit = *lb.witness;
                return lb.value.value;
            }
            case RuleSet::Ground::Basis: {
                Rat mx(0);
                int arg = 0;
                for (const auto& [i, c] : xe.entries())
                    if (rat_abs(c) > mx) {
                        mx = rat_abs(c);
                        arg = i;
                    }
                if (wit) *wit = ground_leaf(Func::ground0(arg, xe.at(arg) >= 0 ? 1 : -1), GroundCert{GroundKind::G0});
                return mx;
            }
            case RuleSet::Ground::Cj0: {
                std::vector<std::pair<Rat, int>> mags;
                for (const auto& [i, c] : xe.entries()) mags.push_back({rat_abs(c), i});
                std::sort(mags.begin(), mags.end(), [](const auto& a, const auto& b) {
                    return a.first != b.first ? a.first > b.first : a.second < b.second;
                });
                size_t t = mags.size();
                const ParameterProfile& p = eng.profile();
                if (Rat(static_cast<long>(t)) > p.n(rules.j0 - 1))
                    t = static_cast<size_t>(p.n_int(rules.j0 - 1));
                Rat sum(0);
                Vec00 w;
                for (size_t i = 0; i < t; ++i) {
                    sum += mags[i].first;
                    w.set(mags[i].second, xe.at(mags[i].second) >= 0 ? Rat(1) : Rat(-1));
                }
                if (wit) {
                    Func f;
                    f.v = w;
                    f.tag = FuncTag::Ground;
                    f.gkind = GroundKind::Cj0;
                    *wit = ground_leaf(f, GroundCert{GroundKind::Cj0});
                }
                return sum;
            }
        }
        return Rat(0);
    }
};

NormEngine::LayerBest NormEngine::ground_layers_public(const Vec00& x, bool allow_sqrt) const {
    return ground_layers(x, allow_sqrt, nullptr);
}

int NormEngine::op_horizon() const { return profile_.is_paper() ? paper_index_cap_ : profile_.horizon(); }

namespace {

Vec00 slice(const Vec00& x, const std::vector<int>& sup, int a, int b) {
    Vec00 out;
    for (int i = a; i <= b; ++i) out.set(sup[static_cast<size_t>(i)], x.at(sup[static_cast<size_t>(i)]));
    return out;
}

// best odd-operation (attractor) value over x|E for a given weight index
// restriction (0 = any odd index); returns value and the choice data
Rat best_odd(const NormEngine& eng, const RuleSet& rules, const Vec00& xe, int want_index, DpChoice* choice) {
    Rat best(0);
    if (rules.odd != OddPolicy::Attractors) return best;
    const auto& store = eng.registry().store();
    const ParameterProfile& p = eng.profile();
    int seq_id = -1;
    for (const auto& s : store.attractors) {
        ++seq_id;
        if (s.hi_variant) continue;
        // smallest valid odd operation index for this sequence
        int oi = 0;
        for (int cand = 1; p.has_index(cand); cand += 2) {
            if (Rat(static_cast<long>(s.seq.size())) > p.n(cand)) continue;
            Rat n3 = p.n(cand);
            if (!(p.m(2 * s.j1) > n3 * n3 * n3)) continue;
            oi = cand;
            break;
        }
        if (oi == 0) continue;
        if (want_index != 0 && oi != want_index) continue;
        if (!rules.op_allowed(oi, true)) continue;
        // windows over the support of xe
        Vec00 total;
        for (const auto& f : s.seq) total = total + f.v;
        for (const auto& win : candidate_windows(xe)) {
            Rat a = total.restrict_to(win).dot(xe);
            Rat v = rat_abs(a) / p.m(oi);
            if (v > best) {
                best = v;
                if (choice) {
                    choice->kind = DpChoice::Kind::Odd;
                    choice->odd_seq = seq_id;
                    choice->odd_window = win;
                    choice->odd_sign = a >= 0 ? 1 : -1;
                    choice->odd_op_index = oi;
                }
            }
        }
    }
    return best;
}

DpEntry dp(DpState& st, int a, int b, int depth);

// best partition of support positions [a,b] into at most `arity` successive
// blocks, maximizing the sum of child values at the given depth
Rat best_split(DpState& st, int a, int b, const BigInt& arity, int depth,
               std::vector<std::pair<int, int>>* blocks) {
    int k = b - a + 1;
    long cap = arity > k ? k : static_cast<long>(arity);
    if (cap < 1) return Rat(0);
    // f[i][c]: best over first i coords (positions a..a+i-1) using <= c blocks
    std::vector<std::vector<Rat>> f(static_cast<size_t>(k + 1), std::vector<Rat>(static_cast<size_t>(cap + 1), Rat(0)));
    std::vector<std::vector<int>> from(static_cast<size_t>(k + 1), std::vector<int>(static_cast<size_t>(cap + 1), -1));
    for (int i = 1; i <= k; ++i) {
        for (long c = 1; c <= cap; ++c) {
            f[i][c] = f[i][c - 1];
            from[i][c] = -2;  // inherited
            for (int p = 0; p < i; ++p) {
                Rat cand = f[p][c - 1] + dp(st, a + p, a + i - 1, depth).value;
                if (cand > f[i][c]) {
                    f[i][c] = cand;
                    from[i][c] = p;
                }
            }
        }
    }
    if (blocks) {
        blocks->clear();
        int i = k;
        long c = cap;
        while (i > 0 && c > 0) {
            if (from[i][c] == -2) {
                --c;
                continue;
            }
            int p = from[i][c];
            blocks->push_back({a + p, a + i - 1});
            i = p;
            --c;
        }
        std::reverse(blocks->begin(), blocks->end());
    }
    return f[static_cast<size_t>(k)][static_cast<size_t>(cap)];
}

DpEntry dp(DpState& st, int a, int b, int depth) {
    auto key = std::make_tuple(a, b, depth);
    auto it = st.memo.find(key);
    if (it != st.memo.end()) return it->second;
    Vec00 xe = slice(*st.x, st.sup, a, b);
    DpEntry e;
    e.value = NormEngineDp::ground_rational(*st.eng, *st.rules, xe, nullptr);
    e.choice.kind = DpChoice::Kind::Ground;
    if (depth >= 1) {
        const ParameterProfile& p = st.eng->profile();
        int horizon = st.eng->op_horizon();
        for (int oi = 1; oi <= horizon; ++oi) {
            if (!st.rules->op_allowed(oi, false)) continue;
            Rat v = best_split(st, a, b, st.rules->op_arity(oi, p), depth - 1, nullptr) / p.m(oi);
            if (v > e.value) {
                e.value = v;
                e.choice = DpChoice{};
                e.choice.kind = DpChoice::Kind::Op;
                e.choice.op_index = oi;
            }
        }
        DpChoice oddc;
        Rat ov = best_odd(*st.eng, *st.rules, xe, 0, &oddc);
        if (ov > e.value) {
            e.value = ov;
            e.choice = oddc;
        }
    }
    st.memo[key] = e;
    return e;
}

CertNode build_witness(DpState& st, int a, int b, int depth) {
    DpEntry e = dp(st, a, b, depth);
    Vec00 xe = slice(*st.x, st.sup, a, b);
    const ParameterProfile& p = st.eng->profile();
    switch (e.choice.kind) {
        case DpChoice::Kind::Ground: {
            CertNode wit;
            NormEngineDp::ground_rational(*st.eng, *st.rules, xe, &wit);
            return wit;
        }
        case DpChoice::Kind::Op: {
            std::vector<std::pair<int, int>> blocks;
            best_split(st, a, b, st.rules->op_arity(e.choice.op_index, p), depth - 1, &blocks);
            std::vector<CertNode> kids;
            for (auto [ba, bb] : blocks) {
                CertNode k = build_witness(st, ba, bb, depth - 1);
                if (k.f.v.is_zero()) continue;
                kids.push_back(k);
            }
            if (kids.empty()) {
                CertNode wit;
                NormEngineDp::ground_rational(*st.eng, *st.rules, xe, &wit);
                return wit;
            }
            return op_node(e.choice.op_index, std::move(kids), p);
        }
        case DpChoice::Kind::Odd: {
            const auto& s = st.eng->registry().store().attractors[static_cast<size_t>(e.choice.odd_seq)];
            auto odd = std::make_shared<OddOpWitness>();
            odd->seq = s.seq;
            odd->entry_certs = s.entry_certs;
            odd->j1 = s.j1;
            odd->hi_variant = s.hi_variant;
            std::vector<CertNode> kids = s.entry_certs;
            CertNode node = op_node(e.choice.odd_op_index, std::move(kids), p, true, odd);
            return restrict_cert(node, e.choice.odd_window, e.choice.odd_sign);
        }
    }
    return CertNode{};
}

}  // namespace

NormResult NormEngine::extension_norm(const Vec00& x, const RuleSet& rules, int depth) const {
    NormResult r;
    r.depth = depth;
    if (x.is_zero()) {
        Func zf;
        zf.gkind = GroundKind::Zero;
        r.witness = ground_leaf(zf, GroundCert{GroundKind::Zero});
        return r;
    }
    DpState st{this, &x, &rules, x.support(), {}};
    int last = static_cast<int>(st.sup.size()) - 1;
    DpEntry top = dp(st, 0, last, depth);
    ExactValue best = ExactValue::of_rational(top.value);
    CertNode wit = build_witness(st, 0, last, depth);
    bool l2sup = false;
    std::vector<CertNode> parts;

    // root ground layer may carry the exact Gl2 sqrt value
    if (rules.ground == RuleSet::Ground::Gxi) {
        Rat tail_sq(0);
        LayerBest g = ground_layers(x, true, &tail_sq);
        if (best < g.value) {
            best = g.value;
            l2sup = g.l2_sup;
            parts = g.l2_parts;
            if (g.witness) wit = *g.witness;
        }
    }

    // root type-II layer: distinct weights, closed form
    if (rules.l2 && depth >= 1) {
        Rat sq(0);
        std::vector<CertNode> t2parts;
        int horizon = profile_.is_paper() ? paper_index_cap_ : profile_.horizon();
        for (int oi = 1; oi <= horizon; ++oi) {
            Rat bi(0);
            DpChoice oddc;
            if (rules.op_allowed(oi, false)) {
                bi = best_split(st, 0, last, rules.op_arity(oi, profile_), depth - 1, nullptr) / profile_.m(oi);
            }
            Rat ov = best_odd(*this, rules, x, oi, &oddc);
            bool use_odd = ov > bi;
            if (use_odd) bi = ov;
            if (bi == 0) continue;
            sq += bi * bi;
            // witness part: rebuild the best type-I tree of this weight
            if (use_odd) {
                const auto& s = registry_.store().attractors[static_cast<size_t>(oddc.odd_seq)];
                auto odd = std::make_shared<OddOpWitness>();
                odd->seq = s.seq;
                odd->entry_certs = s.entry_certs;
                odd->j1 = s.j1;
                odd->hi_variant = s.hi_variant;
                CertNode node = op_node(oi, s.entry_certs, profile_, true, odd);
                t2parts.push_back(restrict_cert(node, oddc.odd_window, oddc.odd_sign));
            } else {
                std::vector<std::pair<int, int>> blocks;
                best_split(st, 0, last, rules.op_arity(oi, profile_), depth - 1, &blocks);
                std::vector<CertNode> kids;
                for (auto [ba, bb] : blocks) {
                    CertNode k = build_witness(st, ba, bb, depth - 1);
                    if (!k.f.v.is_zero()) kids.push_back(k);
                }
                if (!kids.empty()) t2parts.push_back(op_node(oi, std::move(kids), profile_));
            }
        }
        if (rules.l2_fresh_coords)
            for (const auto& [i, c] : x.entries()) {
                sq += c * c;
                t2parts.push_back(ground_leaf(Func::ground0(i, c >= 0 ? 1 : -1), GroundCert{GroundKind::G0}));
            }
        ExactValue t2v = ExactValue::of_sqrt(sq);
        if (best < t2v) {
            best = t2v;
            l2sup = true;
            parts = t2parts;
            Func dir;
            dir.tag = FuncTag::TypeII;
            wit = CertNode{};
            wit.f = dir;
        }
    }

    r.lower = best;
    r.witness = wit;
    r.witness_l2_sup = l2sup;
    r.l2_parts = parts;

    Rat l1 = x.l1();
    Rat relax = relaxation_upper(x, rules);
    if (relax < l1) {
        r.upper = ExactValue::of_rational(relax);
        r.prov = Provenance::DepthSaturation;
    } else {
        r.upper = ExactValue::of_rational(l1);
        r.prov = Provenance::L1Cap;
    }
    if (r.upper < r.lower) r.upper = r.lower;  // lower is certified; tighten
    if (r.upper == r.lower) r.prov = Provenance::Exhaustive;
    return r;
}

// ------------------------------------------------------ relaxation upper

namespace {

struct UpState {
    const NormEngine* eng;
    const Vec00* x;
    const RuleSet* rules;
    std::vector<int> sup;
    std::map<std::pair<int, int>, Rat> memo;
};

Rat up_value(UpState& st, int a, int b);

Rat up_split(UpState& st, int a, int b, const BigInt& arity) {
    // best over partitions into 2..arity successive blocks
    int k = b - a + 1;
    if (k < 2) return Rat(0);
    long cap = arity > k ? k : static_cast<long>(arity);
    if (cap < 2) return Rat(0);
    std::vector<std::vector<Rat>> f(static_cast<size_t>(k + 1), std::vector<Rat>(static_cast<size_t>(cap + 1), Rat(-1)));
    f[0][0] = 0;
    for (int i = 1; i <= k; ++i)
        for (long c = 1; c <= cap; ++c) {
            Rat bestv(-1);
            for (int p = 0; p < i; ++p) {
                if (f[p][c - 1] < 0) continue;
                Rat cand = f[p][c - 1] + up_value(st, a + p, a + i - 1);
                if (cand > bestv) bestv = cand;
            }
            f[i][c] = bestv;
        }
    Rat best(0);
    for (long c = 2; c <= cap; ++c)
        if (f[k][c] > best) best = f[k][c];
    return best;
}

Rat up_value(UpState& st, int a, int b) {
    if (a > b) return Rat(0);
    auto key = std::make_pair(a, b);
    auto it = st.memo.find(key);
    if (it != st.memo.end()) return it->second;
    Vec00 xe = slice(*st.x, st.sup, a, b);
    const ParameterProfile& p = st.eng->profile();
    const RuleSet& rules = *st.rules;

    // ground layer, rounded-up rational
    Rat g;
    if (rules.ground == RuleSet::Ground::Gxi) {
        auto lb = st.eng->ground_layers_public(xe, true);
        g = lb.value.upper_rat();
    } else {
        g = NormEngineDp::ground_rational(*st.eng, rules, xe, nullptr);
    }

    int horizon = st.eng->op_horizon();
    Rat m_best(0);
    Rat b_sq(0);  // sum over weights of (multi-block part / m_j)^2
    for (int oi = 1; oi <= horizon; ++oi) {
        // relaxation: every index carries an operation
        BigInt arity = p.n_int(oi);
        if (rules.w_arity_doubling) arity *= 2;
        Rat part = up_split(st, a, b, arity);
        Rat v = part / p.m(oi);
        if (v > m_best) m_best = v;
        b_sq += v * v;
    }
    Rat best = std::max(g, m_best);
    if (rules.l2 || rules.ground == RuleSet::Ground::Gxi) {
        if (rules.l2_fresh_coords)
            for (const auto& [i, c] : xe.entries()) b_sq += c * c;
        // A type-I child of weight m_j acts at most (1/m_j) max(multi-block
        // part, u), so the l2 layer obeys u >= sqrt(B + c0 u^2); the fixed
        // point u = sqrt(B / (1 - c0)) dominates it.
        Rat c0 = st.eng->profile().c0_upper();
        Rat l2_up = sqrt_upper(b_sq / (Rat(1) - c0));
        if (l2_up > best) best = l2_up;
    }
    st.memo[key] = best;
    return best;
}

}  // namespace

Rat NormEngine::relaxation_upper(const Vec00& x, const RuleSet& rules) const {
    if (x.is_zero()) return Rat(0);
    UpState st{this, &x, &rules, x.support(), {}};
    Rat u = up_value(st, 0, static_cast<int>(st.sup.size()) - 1);
    Rat l1 = x.l1();
    return u < l1 ? u : l1;
}

// ------------------------------------------------- brute-force oracle

namespace {

// literal maximum over the ground layers by enumerating functionals
ExactValue oracle_ground(const NormEngine& eng, const RuleSet& rules, const Vec00& xe, bool at_root) {
    if (xe.is_zero()) return ExactValue();
    const ParameterProfile& p = eng.profile();
    Rat best(0);
    Interval win = xe.range();
    if (rules.ground == RuleSet::Ground::Basis || rules.ground == RuleSet::Ground::Cj0) {
        Rat sum(0);
        std::vector<Rat> mags;
        for (const auto& [i, c] : xe.entries()) mags.push_back(rat_abs(c));
        std::sort(mags.rbegin(), mags.rend());
        size_t t = mags.size();
        if (rules.ground == RuleSet::Ground::Cj0 && Rat(static_cast<long>(t)) > p.n(rules.j0 - 1))
            t = static_cast<size_t>(p.n_int(rules.j0 - 1));
        if (rules.ground == RuleSet::Ground::Basis) t = 1;
        for (size_t i = 0; i < t; ++i) sum += mags[i];
        return ExactValue::of_rational(sum);
    }
    // G0
    for (const auto& [i, c] : xe.entries()) best = std::max(best, rat_abs(c));
    // G1 by literal enumeration
    int horizon = p.is_paper() ? 4 : p.horizon();
    std::map<int, Rat> per_index;
    for (int j = 1; 2 * j - 1 <= horizon; ++j) {
        EnumResult en = g1_enumerate(j, win, p, 4000000);
        if (en.truncated) throw ResourceCapError("oracle window too large for literal G1 enumeration");
        Rat bj(0);
        for (const auto& f : en.funcs) bj = std::max(bj, rat_abs(f.v.dot(xe)));
        per_index[j] = bj;
        best = std::max(best, bj);
    }
    // Gsp chains (registry), every window and sign pattern literally
    std::vector<std::pair<Rat, std::vector<int>>> chain_cands;
    for (const auto& ch : eng.realizable_chains()) {
        if (!ch.valid) continue;
        for (const auto& w : candidate_windows(xe)) {
            size_t d = ch.comps.size();
            Rat bc(0);
            for (std::uint64_t bits = 0; bits < (1ULL << d); ++bits) {
                Vec00 sum;
                for (size_t i = 0; i < d; ++i)
                    sum = sum + ch.comps[i].v.scaled((bits >> i) & 1 ? Rat(-1) : Rat(1));
                bc = std::max(bc, rat_abs(sum.restrict_to(w).dot(xe)));
            }
            chain_cands.push_back({bc, gsp_ind_set(ch.comps, w)});
            best = std::max(best, bc);
        }
    }
    if (!at_root) return ExactValue::of_rational(best);
    // Gl2 selections at the root, closed form over subsets
    Rat best_sq = best * best;
    size_t nc = chain_cands.size();
    if (nc > 12) nc = 12;
    for (std::uint64_t mask = 0; mask < (1ULL << nc); ++mask) {
        std::vector<int> covered;
        Rat sq(0);
        bool ok = true;
        for (size_t i = 0; i < nc && ok; ++i) {
            if (!((mask >> i) & 1)) continue;
            for (int ind : chain_cands[i].second)
                if (std::count(covered.begin(), covered.end(), ind)) ok = false;
            if (!ok) break;
            for (int ind : chain_cands[i].second) covered.push_back(ind);
            sq += chain_cands[i].first * chain_cands[i].first;
        }
        if (!ok) continue;
        for (const auto& [j, bj] : per_index)
            if (!std::count(covered.begin(), covered.end(), j)) sq += bj * bj;
        if (sq > best_sq) best_sq = sq;
    }
    return ExactValue::of_sqrt(best_sq);
}

ExactValue oracle_value(const NormEngine& eng, const RuleSet& rules, const Vec00& xe, int depth, bool at_root);

Rat oracle_type1_best(const NormEngine& eng, const RuleSet& rules, const Vec00& xe, int oi, int depth) {
    const ParameterProfile& p = eng.profile();
    Rat best(0);
    if (xe.is_zero()) return best;
    if (rules.op_allowed(oi, false)) {
        std::vector<int> sup = xe.support();
        size_t k = sup.size();
        BigInt arity = rules.op_arity(oi, p);
        // enumerate every composition into successive blocks (cut bitmask)
        for (std::uint64_t cuts = 0; cuts < (k >= 1 ? (1ULL << (k - 1)) : 1); ++cuts) {
            std::vector<std::pair<size_t, size_t>> blocks;
            size_t start = 0;
            for (size_t i = 0; i + 1 < k; ++i)
                if ((cuts >> i) & 1) {
                    blocks.push_back({start, i});
                    start = i + 1;
                }
            blocks.push_back({start, k - 1});
            if (Rat(static_cast<long>(blocks.size())) > Rat(arity)) continue;
            Rat total(0);
            for (auto [ba, bb] : blocks) {
                Vec00 bx;
                for (size_t i = ba; i <= bb; ++i) bx.set(sup[i], xe.at(sup[i]));
                ExactValue bv = oracle_value(eng, rules, bx, depth, false);
                total += bv.rational ? bv.value : bv.lower_rat();
            }
            best = std::max(best, total / p.m(oi));
        }
    }
    // attractor candidates of this weight
    if (rules.odd == OddPolicy::Attractors && oi % 2 == 1) {
        for (const auto& s : eng.registry().store().attractors) {
            if (s.hi_variant) continue;
            if (Rat(static_cast<long>(s.seq.size())) > p.n(oi)) continue;
            Rat n3 = p.n(oi);
            if (!(p.m(2 * s.j1) > n3 * n3 * n3)) continue;
            Vec00 total;
            for (const auto& f : s.seq) total = total + f.v;
            for (const auto& w : candidate_windows(xe))
                best = std::max(best, rat_abs(total.restrict_to(w).dot(xe)) / p.m(oi));
        }
    }
    return best;
}

ExactValue oracle_value(const NormEngine& eng, const RuleSet& rules, const Vec00& xe, int depth, bool at_root) {
    ExactValue best = oracle_ground(eng, rules, xe, at_root);
    if (depth < 1 || xe.is_zero()) return best;
    const ParameterProfile& p = eng.profile();
    int horizon = p.is_paper() ? 4 : p.horizon();
    Rat t2_sq(0);
    for (int oi = 1; oi <= horizon; ++oi) {
        Rat b1 = oracle_type1_best(eng, rules, xe, oi, depth - 1);
        best = ev_max(best, ExactValue::of_rational(b1));
        t2_sq += b1 * b1;
    }
    if (at_root && rules.l2) {
        if (rules.l2_fresh_coords)
            for (const auto& [i, c] : xe.entries()) t2_sq += c * c;
        best = ev_max(best, ExactValue::of_sqrt(t2_sq));
    }
    return best;
}

}  // namespace

ExactValue NormEngine::exhaustive_saturation_value(const Vec00& x, const RuleSet& rules, int depth) const {
    return oracle_value(*this, rules, x, depth, true);
}

}  // namespace tslab
