#include "tslab/report.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tslab/analysis.hpp"
#include "tslab/games.hpp"

namespace tslab {

namespace {

using Clock = std::chrono::steady_clock;

struct RowTimer {
    ReportRow& row;
    Clock::time_point start = Clock::now();
    ~RowTimer() {
        row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
};

// generator-closure exhaustive checks: heredity via single-point removals,
// spreading via single-point bumps (they generate the full relations)
bool hereditary_exhaustive(FamilyEngine& fam, const FamilySpec& spec, const std::vector<FinSet>& members) {
    for (const auto& f : members) {
        for (size_t drop = 0; drop < f.size(); ++drop) {
            FinSet g;
            for (size_t i = 0; i < f.size(); ++i)
                if (i != drop) g.push_back(f[i]);
            if (!fam.member(spec, g)) return false;
        }
    }
    return true;
}

bool spreading_exhaustive(FamilyEngine& fam, const FamilySpec& spec, const std::vector<FinSet>& members,
                          int n_max) {
    for (const auto& f : members) {
        for (size_t i = 0; i < f.size(); ++i) {
            FinSet g = f;
            int hi = i + 1 < f.size() ? f[i + 1] - 1 : n_max;
            if (f[i] + 1 > hi) continue;
            g[i] = f[i] + 1;
            if (!fam.member(spec, g)) return false;
        }
    }
    return true;
}

bool spreading_randomized(FamilyEngine& fam, const FamilySpec& spec, const std::vector<FinSet>& members,
                          int n_max, std::mt19937_64& rng, int cases) {
    if (members.empty()) return true;
    for (int c = 0; c < cases; ++c) {
        const FinSet& f = members[rng() % members.size()];
        if (f.empty()) continue;
        FinSet g;
        int prev = 0;
        bool ok_build = true;
        for (size_t i = 0; i < f.size(); ++i) {
            int lo = std::max(f[i], prev + 1);
            int hi = n_max - static_cast<int>(f.size() - 1 - i);
            if (lo > hi) {
                ok_build = false;
                break;
            }
            int v = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
            g.push_back(v);
            prev = v;
        }
        if (!ok_build) continue;
        bool mono = true;
        for (size_t i = 0; i + 1 < g.size(); ++i)
            if (g[i] >= g[i + 1]) mono = false;
        if (!mono) continue;
        if (!fam.member(spec, g)) return false;
    }
    return true;
}

std::string ev_report(const ExactValue& v) { return v.str() + " (~" + v.decimal(8) + ")"; }

// ---- criterion 1 ----

ReportRow criterion_schreier(const Config&) {
    ReportRow row;
    row.id = "1-schreier-correctness";
    RowTimer t{row};
    FamilyEngine fam;
    std::mt19937_64 rng(815001);
    bool ok = true;
    std::string note;
    int total_members = 0;
    std::vector<Ordinal> xis = {Ordinal(1), Ordinal(2), Ordinal(3), Ordinal::omega()};
    const int n_max = 20;
    for (const auto& xi : xis) {
        FamilySpec spec = FamilySpec::S(xi);
        auto members = fam.enumerate_restricted(spec, n_max);
        total_members += static_cast<int>(members.size());
        if (!hereditary_exhaustive(fam, spec, members)) {
            ok = false;
            note = "heredity fails for S(" + xi.str() + ")";
            break;
        }
        if (!spreading_exhaustive(fam, spec, members, n_max)) {
            ok = false;
            note = "spreading fails for S(" + xi.str() + ")";
            break;
        }
        if (!spreading_randomized(fam, spec, members, n_max, rng, 2500)) {
            ok = false;
            note = "randomized spreading fails for S(" + xi.str() + ")";
            break;
        }
        // successor identity via enumeration equality
        Ordinal succ = xi.plus_finite(1);
        auto lhs = fam.enumerate_restricted(FamilySpec::S(succ), n_max);
        auto rhs = fam.enumerate_restricted(FamilySpec::Compose(FamilySpec::S(Ordinal(1)), FamilySpec::S(xi)), n_max);
        if (lhs != rhs) {
            ok = false;
            note = "S(xi+1) != S(1)[S(xi)] at xi=" + xi.str();
            break;
        }
        // maximality vs brute force on N <= 15
        auto small = fam.enumerate_restricted(spec, 15);
        for (const auto& f : small) {
            if (f.empty()) continue;
            bool brute = true;  // maximal iff no proper superset within the family
            for (const auto& g : small)
                if (g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end())) brute = false;
            // the family is unbounded to the right: extensions beyond 15 decide too
            if (brute) {
                FinSet ext = f;
                for (int k = f.back() + 1; k <= f.back() + 6; ++k) {
                    ext.push_back(k);
                    if (fam.member(spec, ext)) brute = false;
                    ext.pop_back();
                }
            }
            if (fam.is_maximal(spec, f) != brute) {
                ok = false;
                note = "maximality mismatch at " + finset_str(f) + " for S(" + xi.str() + ")";
                break;
            }
        }
        if (!ok) break;
    }
    row.ok = ok;
    row.note = note;
    row.values["members_total"] = std::to_string(total_members);
    row.values["provenance"] = "exact";
    return row;
}

// ---- criterion 2 ----

ReportRow criterion_las(const Config& cfg) {
    ReportRow row;
    row.id = "2-las-witness";
    RowTimer t{row};
    bool ok = true;
    std::string note;

    // lower bound achieved exactly by the G1 witness at every profile
    for (const std::string& pname : {std::string("paper"), std::string("mini"), std::string("micro")}) {
        ParameterProfile p = cfg.resolve_profile(pname);
        int j = 1;
        BigInt n = p.n_int(2 * j - 1);
        if (n > 256) n = 256;
        long nn = static_cast<long>(n);
        Vec00 x;
        for (long i = 1; i <= nn; ++i) x.set(static_cast<int>(i), Rat(1, nn));
        Rat mm = p.m(2 * j - 1);
        Vec00 wv;
        for (long i = 1; i <= nn; ++i) wv.set(static_cast<int>(i), Rat(1) / (mm * mm));
        Rat val = wv.dot(x);
        if (val != Rat(1) / (mm * mm)) {
            ok = false;
            note = "G1 witness value differs from 1/m^2 at profile " + pname;
        }
        row.values["lower_" + pname] = rat_str(val) + " [exact]";
    }

    // micro profile: the exact norm equals the brute-force value
    {
        ParameterProfile p = cfg.resolve_profile("micro");
        CodingRegistry reg;
        NormEngine eng(p, reg, Ordinal(1));
        BigInt n = p.n_int(1);
        long nn = static_cast<long>(n);
        Vec00 x;
        for (long i = 1; i <= nn; ++i) x.set(static_cast<int>(i), Rat(1, nn));
        NormResult nr = eng.ground_norm(x);
        ExactValue oracle = eng.exhaustive_saturation_value(x, RuleSet::G(Ordinal(1)), 0);
        if (!(nr.lower == oracle) || !(nr.lower == nr.upper)) {
            ok = false;
            note = "micro norm differs from the exhaustive oracle";
        }
        row.values["micro_norm"] = ev_report(nr.lower) + " [exact]";
        row.values["micro_oracle"] = ev_report(oracle) + " [exact]";
    }

    // paper profile: the 2/m^2 upper bound asserted symbolically at j = 2
    {
        ParameterProfile p = cfg.resolve_profile("paper");
        int j = 2;
        // sum over r != j of the per-index layer bounds stays below 1/m^2,
        // all in exponent arithmetic over powers of two
        BigInt ej = 2 * p.m_pow2(2 * j - 1).exponent;  // log2 m^2
        bool sym = true;
        // G0 layer: 1/n_{2j-1} <= 1/(4 m^2)
        if (!(p.n_pow2(2 * j - 1).exponent >= ej + 2)) sym = false;
        // r < j: n_{2r-1} / (n_{2j-1} m_{2r-1}^2) <= 2^-(ej+3)
        for (int r = 1; r < j; ++r) {
            BigInt lhs = p.n_pow2(2 * r - 1).exponent - p.n_pow2(2 * j - 1).exponent -
                         2 * p.m_pow2(2 * r - 1).exponent;
            if (!(lhs <= -(ej + 3))) sym = false;
        }
        // r > j: sum 1/m_{2r-1}^2 <= 2 / m_{2j+1}^2 <= 2^-(ej+2)
        if (!(2 * p.m_pow2(2 * j + 1).exponent - 1 >= ej + 2)) sym = false;
        if (!sym) {
            ok = false;
            note = "symbolic las upper bound fails at the paper profile";
        }
        row.values["paper_upper_symbolic"] = sym ? "2/m^2 holds (j=2) [exact]" : "FAILS";
    }
    row.ok = ok;
    row.note = note;
    return row;
}

// ---- criterion 3 ----

ReportRow criterion_lemma82(const Config& cfg) {
    ReportRow row;
    row.id = "3-aux-coordinate-bound";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("micro");
    int j0 = 2;
    Rat c1sq = p.c1_sq();
    bool ok = true;
    // B(n) = sup |f(e_t)| over layer-n elements (coordinate suprema close
    // under the layer recursion; the type II supremum over coefficients is
    // sqrt(sum_j A(n-1,j)^2 + 1), handled through squares)
    // A(n, j) = B(n-1) / m_j for type-I elements of weight m_j.
    int depth = 2;
    Rat b_prev_sq(1);  // B(0) = 1
    for (int n = 1; n <= depth; ++n) {
        Rat best_b_sq = 1;  // ground layer persists
        Rat t2_sq(1);       // fresh coordinate contributes 1
        for (int j = 1; p.has_index(j); ++j) {
            Rat a_sq = b_prev_sq / (p.m(j) * p.m(j));  // A(n,j)^2
            // type-I bound: |f(e_t)| <= c1 / m_j  <=>  B(n-1)^2 <= c1^2
            if (!(b_prev_sq <= c1sq)) ok = false;
            t2_sq += a_sq;
            if (a_sq > best_b_sq) best_b_sq = a_sq;
        }
        if (t2_sq > best_b_sq) best_b_sq = t2_sq;
        // type-II bound: B(n) <= c1
        if (!(best_b_sq <= c1sq)) ok = false;
        b_prev_sq = best_b_sq;
    }
    row.values["c1_sq"] = rat_str(c1sq) + " [exact]";
    row.values["sup_recursion_depth"] = std::to_string(depth);

    // literal cross-check on a small window
    CodingRegistry reg;
    EnumResult en = w_enumerate(j0, 2, Interval{1, 3}, p, static_cast<size_t>(cfg.enum_cap));
    int checked = 0;
    for (const auto& f : en.funcs) {
        for (const auto& [tt, c] : f.v.entries()) {
            (void)tt;
            Rat u = f.tag == FuncTag::TypeI ? Rat(1) / p.m(f.index) : Rat(1);
            if (!(c * c <= c1sq * u * u)) {
                ok = false;
                row.note = "literal enumeration violates the coordinate bound";
            }
            ++checked;
        }
    }
    row.values["literal_checked"] = std::to_string(checked) + (en.truncated ? " (truncated)" : "");
    row.values["provenance"] = "exact";
    row.ok = ok;
    return row;
}

// ---- criterion 4 ----

CertNode random_k_cert(std::mt19937_64& rng, const ParameterProfile& p, const Interval& win, int depth) {
    auto coord = [&](int lo) {
        int span = win.hi - lo;
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, span)));
    };
    if (depth == 0 || rng() % 4 == 0) {
        if (rng() % 2 == 0) {
            int c = coord(win.lo);
            return ground_leaf(Func::ground0(c, rng() % 2 ? 1 : -1), GroundCert{GroundKind::G0});
        }
        int j = 1 + static_cast<int>(rng() % 2);
        Rat mm = p.m(2 * j - 1);
        Vec00 v;
        int c = coord(win.lo);
        int len = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < len && c + i <= win.hi; ++i)
            v.set(c + i, (rng() % 2 ? Rat(1) : Rat(-1)) / (mm * mm));
        GroundCert g;
        g.kind = GroundKind::G1;
        g.j = j;
        return ground_leaf(Func::g1(v, j), g);
    }
    int pick = static_cast<int>(rng() % 4);
    if (pick == 0) {
        // even operation
        int j = 2 + 2 * static_cast<int>(rng() % 2);
        int count = 2 + static_cast<int>(rng() % 2);
        std::vector<CertNode> kids;
        int lo = win.lo;
        for (int i = 0; i < count && lo <= win.hi; ++i) {
            Interval sub{lo, std::min(win.hi, lo + 2)};
            CertNode k = random_k_cert(rng, p, sub, depth - 1);
            if (!k.f.v.is_zero()) {
                kids.push_back(k);
                lo = k.f.v.max_support() + 1;
            } else {
                lo = sub.hi + 1;
            }
        }
        if (kids.empty()) return ground_leaf(Func::ground0(win.lo), GroundCert{GroundKind::G0});
        return op_node(j, std::move(kids), p);
    }
    if (pick == 1) {
        // type II of two distinct even weights
        CertNode a = random_k_cert(rng, p, Interval{win.lo, (win.lo + win.hi) / 2}, 0);
        CertNode b = random_k_cert(rng, p, Interval{(win.lo + win.hi) / 2 + 1, win.hi}, 0);
        std::vector<CertNode> ka, kb;
        ka.push_back(a);
        kb.push_back(b);
        CertNode fa = op_node(2, std::move(ka), p);
        CertNode fb = op_node(4, std::move(kb), p);
        return l2_node({Rat(3, 5), Rat(4, 5)}, {fa, fb});
    }
    if (pick == 2) {
        CertNode a = random_k_cert(rng, p, win, depth - 1);
        CertNode b = random_k_cert(rng, p, win, depth - 1);
        Vec00 hull = a.f.v + b.f.v;
        if (hull.is_zero()) return a;
        return convex_node({Rat(1, 2), Rat(1, 2)}, {a, b});
    }
    CertNode a = random_k_cert(rng, p, win, depth - 1);
    Interval e{win.lo + 1, win.hi};
    return restrict_cert(a, e, rng() % 2 ? 1 : -1);
}

ReportRow criterion_basic_inequality(const Config& cfg) {
    ReportRow row;
    row.id = "4-basic-inequality";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("mini");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    std::mt19937_64 rng(cfg.seed);
    int trials = 1000;
    int failures = 0, type1_checked = 0, type1_fail = 0;
    for (int trial = 0; trial < trials; ++trial) {
        BasicInequalityInput in;
        in.j0 = 2;
        in.C = Rat(5, 3);
        in.eps = Rat(1, 2);
        // RIS of unit basis vectors on spread coordinates
        int k = 3 + static_cast<int>(rng() % 3);
        int pos = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < k; ++i) {
            in.xs.push_back(Vec00::unit(pos));
            in.jk.push_back(i + 1);
            pos += 1 + static_cast<int>(rng() % 3);
        }
        for (int i = 0; i < k; ++i)
            in.coeffs.push_back(Rat(1 + static_cast<long>(rng() % 8), 1 + static_cast<long>(rng() % 8)) *
                                (rng() % 2 ? 1 : -1));
        Interval win{1, pos + 2};
        in.f = random_k_cert(rng, p, win, 2);
        if (in.f.f.v.is_zero()) continue;
        in.flag_ada = false;
        BasicInequalityCertificate c = certify_basic_inequality(in, eng);
        if (!c.ok) {
            ++failures;
            if (failures == 1) row.note = "first failure: " + c.note;
            continue;
        }
        if (c.type1_input) {
            ++type1_checked;
            if (!c.type1_shape_ok || !c.type1_epsf_ok) ++type1_fail;
        }
    }
    row.ok = failures == 0 && type1_fail == 0;
    row.values["trials"] = std::to_string(trials);
    row.values["violations"] = std::to_string(failures) + " [exact]";
    row.values["type1_checked"] = std::to_string(type1_checked);
    row.values["type1_refinement_failures"] = std::to_string(type1_fail) + " [exact]";
    return row;
}

// ---- criterion 5 ----

ReportRow criterion_attractors(const Config& cfg) {
    ReportRow row;
    row.id = "5-attractor-estimates";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("attr16");
    bool ok = true;
    std::string note;
    int built = 0;
    for (bool l_mode : {false, true}) {
        CodingRegistry reg;
        NormEngine eng(p, reg, Ordinal(1));
        AttractingSequence seq = build_attracting_sequence(1, 1, eng, reg, l_mode);
        if (!seq.built) {
            ok = false;
            note = seq.note;
            break;
        }
        ++built;
        int n_len = static_cast<int>(seq.fs.size());
        Rat m = p.m(1);
        // m (phi + psi) is the odd operation applied to the sequence
        Vec00 sum;
        for (const auto& f : seq.fs) sum = sum + f.v;
        auto odd = std::make_shared<OddOpWitness>();
        odd->seq = seq.stored.seq;
        odd->entry_certs = seq.stored.entry_certs;
        odd->j1 = seq.stored.j1;
        CertNode node = op_node(1, seq.stored.entry_certs, p, true, odd);
        MembershipCertificate mc{node.f, node, "K"};
        Verdict v = verify_membership(node.f, RuleSet::K(Ordinal(1)), mc, p, reg);
        if (!v.ok) {
            ok = false;
            note = "m(phi+psi) rejected: " + v.category + ": " + v.message;
            break;
        }
        // lower witness: the even-entry G1 functional on the alternating average
        Vec00 ft;
        for (int i = 1; i < n_len; i += 2) ft = ft + seq.fs[static_cast<size_t>(i)].v;
        ft = ft.scaled(Rat(1) / (m * m));
        Vec00 alt;
        for (int i = 0; i < n_len; ++i)
            alt = alt + seq.xs[static_cast<size_t>(i)].scaled(Rat(i % 2 == 0 ? 1 : -1, n_len));
        Rat val = rat_abs(ft.dot(alt));
        if (val != Rat(1) / (2 * m * m)) {
            ok = false;
            note = "alternating-average witness is not exactly 1/(2m^2)";
            break;
        }
        std::string key = l_mode ? "_L" : "";
        row.values["witness_value" + key] = rat_str(val) + " [exact]";
        // G-membership of the even-entry functional
        Func ftf = Func::g1(ft, 1);
        GroundCert g;
        g.kind = GroundKind::G1;
        g.j = 1;
        MembershipCertificate gmc{ftf, ground_leaf(ftf, g), "G"};
        Verdict gv = verify_membership(ftf, RuleSet::G(Ordinal(1)), gmc, p, reg);
        if (!gv.ok) {
            ok = false;
            note = "even-entry functional rejected by the G rules";
            break;
        }
    }
    row.values["sequences_built"] = std::to_string(built);
    row.ok = ok && built == 2;
    row.note = note;
    return row;
}

// ---- criterion 6 ----

ReportRow criterion_l2sum_game(const Config& cfg) {
    ReportRow row;
    row.id = "6-l2sum-game";
    RowTimer t{row};
    std::mt19937_64 rng(cfg.seed + 6);
    bool ok = true;
    std::string note;
    GameContext ctx;
    ctx.xi = Ordinal(1);
    ctx.space = "L2SUM";
    ctx.oracle = [](const Vec00& x) {
        NormResult r;
        r.lower = ExactValue::of_sqrt(l2sum_norm_sq(x));
        r.upper = r.lower;
        return r;
    };
    int plays = 100;
    bool saw_k16 = false;
    for (int g = 0; g < plays; ++g) {
        int k = g == 0 ? 16 : 2 + static_cast<int>(rng() % 11);
        GameTranscript tr = play_game(ctx, s_strategy_tail(), v_strategy_l2blocks(k), Rat(100), 64);
        if (static_cast<int>(tr.v_moves.size()) != k) {
            ok = false;
            note = "unexpected transcript length";
            break;
        }
        // exact squared-norm identity for random coefficients
        Vec00 combo;
        Rat rhs(0);
        for (int i = 0; i < k; ++i) {
            Rat a(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4));
            combo = combo + tr.v_moves[static_cast<size_t>(i)].x.scaled(a);
            Rat bsum = tr.v_moves[static_cast<size_t>(i)].x.l1() * rat_abs(a);
            rhs += bsum * bsum;
        }
        if (l2sum_norm_sq(combo) != rhs) {
            ok = false;
            note = "squared-norm identity fails";
            break;
        }
        if (k == 16) {
            saw_k16 = true;
            if (!(tr.equivalence == ExactValue::of_rational(Rat(4)))) {
                ok = false;
                note = "equivalence constant for k=16 is not exactly 4";
                break;
            }
            row.values["k16_constant"] = ev_report(tr.equivalence) + " [exact]";
        }
    }
    row.ok = ok && saw_k16;
    row.note = note;
    row.values["plays"] = std::to_string(plays);
    return row;
}

// ---- criterion 7 ----

ReportRow criterion_v_strategy(const Config& cfg) {
    ReportRow row;
    row.id = "7-v-strategy-xg";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("game");
    bool ok = true;
    std::string note;
    int wins = 0, games = 0;
    for (const Ordinal& xi : {Ordinal(1), Ordinal(2)}) {
        CodingRegistry reg;
        NormEngine eng(p, reg, xi);
        GameContext ctx;
        ctx.xi = xi;
        ctx.space = "XG";
        ctx.registry = &reg;
        ctx.profile = &p;
        ctx.oracle = [&eng](const Vec00& x) { return eng.ground_norm(x); };
        for (int g = 0; g < 25; ++g) {
            ++games;
            GameTranscript tr = play_game(ctx, s_strategy_mask(cfg.seed + 100 * g + (xi == Ordinal(1) ? 0 : 1)),
                                          v_strategy_special(xi, reg, p), Rat(1), 64);
            if (tr.verdict == GameTranscript::Verdict::VWins &&
                tr.equivalence == ExactValue::of_rational(Rat(1)))
                ++wins;
            else if (ok) {
                ok = false;
                note = "game " + std::to_string(games) + " at xi=" + xi.str() + ": " + tr.note;
            }
        }
    }
    row.ok = ok && wins == games;
    row.note = note;
    row.values["games"] = std::to_string(games);
    row.values["v_wins"] = std::to_string(wins) + " [exact]";
    return row;
}

// ---- criterion 8 ----

ReportRow criterion_oracle_equivalence(const Config& cfg) {
    ReportRow row;
    row.id = "8-norm-oracle-equivalence";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("micro");
    CodingRegistry reg;
    NormEngine eng(p, reg, Ordinal(1));
    RuleSet rules = RuleSet::K(Ordinal(1));
    std::mt19937_64 rng(cfg.seed + 8);
    bool ok = true;
    std::string note;
    int vectors = 40;
    for (int v = 0; v < vectors; ++v) {
        Vec00 x;
        int support = 1 + static_cast<int>(rng() % 5);
        int pos = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < support; ++i) {
            Rat c(static_cast<long>(rng() % 17) - 8, 8);
            if (c != 0) x.set(pos, c);
            pos += 1 + static_cast<int>(rng() % 2);
        }
        if (x.is_zero()) continue;
        NormResult nr = eng.extension_norm(x, rules, 3);
        ExactValue oracle = eng.exhaustive_saturation_value(x, rules, 3);
        if (!(nr.lower == oracle)) {
            ok = false;
            note = "saturation mismatch on " + x.str() + ": " + nr.lower.str() + " vs " + oracle.str();
            break;
        }
    }
    row.values["vectors"] = std::to_string(vectors);

    // dual norm vs refined sphere grid search at N <= 4
    if (ok) {
        NormOracle oracle = [&eng, &rules](const Vec00& y) { return eng.extension_norm(y, rules, 2); };
        for (int trial = 0; trial < 3 && ok; ++trial) {
            Vec00 fv;
            int n_dim = 4;
            for (int i = 1; i <= n_dim; ++i) {
                Rat c(static_cast<long>(rng() % 9) - 4, 4);
                if (c != 0) fv.set(i, c);
            }
            if (fv.is_zero()) fv.set(1, Rat(1, 2));
            Func f;
            f.v = fv;
            BracketResult br = dual_norm(f, n_dim, oracle, Rat(1, 1000000), 48);
            // refined grid search on the sphere
            double best = 0;
            std::vector<double> center(static_cast<size_t>(n_dim), 0.0);
            double radius = 1.0, step = 0.25;
            for (int round = 0; round < 9; ++round) {
                std::vector<int> it(static_cast<size_t>(n_dim), 0);
                std::function<void(size_t, std::vector<double>&)> walk = [&](size_t d, std::vector<double>& pt) {
                    if (d == static_cast<size_t>(n_dim)) {
                        Vec00 y;
                        double fy = 0;
                        for (int i = 0; i < n_dim; ++i) {
                            long num = std::lround(pt[static_cast<size_t>(i)] * 4096);
                            if (num != 0) y.set(i + 1, Rat(num, 4096));
                        }
                        if (y.is_zero()) return;
                        double nrm = oracle(y).upper.to_double();
                        if (nrm <= 0) return;
                        fy = 0;
                        for (const auto& [i, c] : fv.entries())
                            fy += static_cast<double>(ExactValue::of_rational(c).to_double()) *
                                  static_cast<double>(ExactValue::of_rational(y.at(i)).to_double());
                        double val = std::fabs(fy) / nrm;
                        if (val > best) {
                            best = val;
                            for (int i = 0; i < n_dim; ++i) center[static_cast<size_t>(i)] = pt[static_cast<size_t>(i)];
                        }
                        return;
                    }
                    for (double dd = -radius; dd <= radius + 1e-12; dd += step) {
                        pt[static_cast<size_t>(d)] = center[d] + dd;
                        walk(d + 1, pt);
                    }
                    pt[static_cast<size_t>(d)] = center[d];
                };
                std::vector<double> pt(static_cast<size_t>(n_dim), 0.0);
                walk(0, pt);
                radius = step;
                step /= 2;
            }
            double upper = static_cast<double>(ExactValue::of_rational(br.upper).to_double());
            double lower = static_cast<double>(ExactValue::of_rational(br.lower).to_double());
            if (!(best <= upper + 1e-3 && upper - best <= 1e-3 && lower <= best + 1e-3)) {
                ok = false;
                note = "dual bracket disagrees with the grid search";
            }
        }
    }
    row.ok = ok;
    row.note = note;
    row.values["provenance"] = "exact / grid 1e-3";
    return row;
}

// ---- criterion 9 ----

ReportRow criterion_paper_arithmetic(const Config& cfg) {
    ReportRow row;
    row.id = "9-paper-arithmetic";
    RowTimer t{row};
    ParameterProfile p = cfg.resolve_profile("paper");
    bool ok = true;
    if (p.m_pow2(2).exponent != 25) ok = false;
    if (p.s(1) != 75) ok = false;
    if (p.n_pow2(2).exponent != 525) ok = false;
    for (int j : {2, 3})
        if (!p.check_growth_260m4(j)) ok = false;
    row.values["m2"] = "2^" + p.m_pow2(2).exponent.str() + " [exact]";
    row.values["s1"] = std::to_string(p.s(1)) + " [exact]";
    row.values["n2"] = "2^" + p.n_pow2(2).exponent.str() + " [exact]";
    row.values["growth_260m4_j2_j3"] = ok ? "holds [exact]" : "FAILS";
    row.ok = ok;
    return row;
}

std::vector<ReportRow> run_criteria_1_to_9(const Config& cfg) {
    std::vector<ReportRow> rows;
    rows.push_back(criterion_schreier(cfg));
    rows.push_back(criterion_las(cfg));
    rows.push_back(criterion_lemma82(cfg));
    rows.push_back(criterion_basic_inequality(cfg));
    rows.push_back(criterion_attractors(cfg));
    rows.push_back(criterion_l2sum_game(cfg));
    rows.push_back(criterion_v_strategy(cfg));
    rows.push_back(criterion_oracle_equivalence(cfg));
    rows.push_back(criterion_paper_arithmetic(cfg));
    return rows;
}

std::string digest_of(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    for (const auto& r : rows) {
        os << r.id << "|";
        for (const auto& [k, v] : r.values) os << k << "=" << v << ";";
        os << "\n";
    }
    return os.str();
}

SuiteResult run_acceptance(const Config& cfg) {
    SuiteResult res;
    res.suite = "acceptance";
    res.rows = run_criteria_1_to_9(cfg);

    ReportRow det;
    det.id = "10-determinism";
    {
        RowTimer t{det};
        std::string first = digest_of(res.rows);
        std::string second = digest_of(run_criteria_1_to_9(cfg));
        det.ok = first == second;
        det.values["value_columns"] = det.ok ? "byte-identical [exact]" : "DIFFER";
        if (!det.ok) det.note = "re-run produced different value columns";
    }
    res.rows.push_back(det);
    for (const auto& r : res.rows) res.all_ok = res.all_ok && r.ok;
    return res;
}

SuiteResult run_estimates(const Config& cfg) {
    SuiteResult res;
    res.suite = "estimates";
    // eq-las measured rows at the mini profile
    {
        ReportRow row;
        row.id = "eq-las";
        RowTimer t{row};
        ParameterProfile p = cfg.resolve_profile("mini");
        CodingRegistry reg;
        NormEngine eng(p, reg, Ordinal(1));
        int j = 1;
        long nn = static_cast<long>(p.n_int(2 * j - 1));
        Vec00 x;
        for (long i = 1; i <= nn; ++i) x.set(static_cast<int>(i), Rat(1, nn));
        NormResult nr = eng.ground_norm(x);
        Rat mm = p.m(2 * j - 1);
        row.values["lower"] = ev_report(nr.lower) + " [exact]";
        row.values["upper"] = ev_report(nr.upper) + " [" + provenance_name(nr.prov) + "]";
        row.values["one_over_m2"] = rat_str(Rat(1) / (mm * mm)) + " [exact]";
        row.values["two_over_m2"] = rat_str(Rat(2) / (mm * mm)) + " [exact]";
        row.ok = ExactValue::of_rational(Rat(1) / (mm * mm)) <= nr.lower;
        res.rows.push_back(row);
    }
    // attractor functional norms, measured
    {
        ReportRow row;
        row.id = "attractor-psi";
        RowTimer t{row};
        ParameterProfile p = cfg.resolve_profile("attr16");
        CodingRegistry reg;
        NormEngine eng(p, reg, Ordinal(1));
        AttractingSequence seq = build_attracting_sequence(1, 1, eng, reg, false);
        if (seq.built) {
            Rat m = p.m(1);
            Vec00 psi, phi;
            for (size_t i = 0; i < seq.fs.size(); ++i)
                (i % 2 == 1 ? psi : phi) = (i % 2 == 1 ? psi : phi) + seq.fs[i].v;
            psi = psi.scaled(Rat(1) / (m * m));
            phi = phi.scaled(Rat(1) / (m * m));
            // ||phi + psi|| <= 1/m by membership of m(phi+psi)
            row.values["phi_plus_psi_upper"] = rat_str(Rat(1) / m) + " [bound]";
            // measured lower bound for ||psi|| via its action on the
            // alternating average normalized by the certified upper bound
            Vec00 alt;
            for (size_t i = 0; i < seq.xs.size(); ++i)
                alt = alt + seq.xs[i].scaled(Rat(i % 2 == 0 ? 1 : -1, static_cast<long>(seq.xs.size())));
            Rat act = rat_abs(psi.dot(alt));
            Rat up = eng.extension_norm(alt, RuleSet::K(Ordinal(1)), 1).upper.upper_rat();
            row.values["psi_lower"] = rat_str(act / up) + " [measured]";
            row.values["one_over_30C"] = rat_str(Rat(1) / (30 * seq.C)) + " [bound]";
            row.ok = true;
        } else {
            row.ok = false;
            row.note = seq.note;
        }
        res.rows.push_back(row);
    }
    // separated-average threshold counts, measured
    {
        ReportRow row;
        row.id = "separated-counts";
        RowTimer t{row};
        ParameterProfile p = cfg.resolve_profile("mini");
        std::vector<Vec00> xs;
        for (int i = 1; i <= 36; ++i) xs.push_back(Vec00::unit(i));
        SeparatedAverages sa = build_separated_averages(xs, Rat(1), Rat(1, 4), p);
        if (sa.ok) {
            std::vector<Func> universe;
            for (int j = 1; 2 * j - 1 <= p.horizon() && j <= 3; ++j) {
                EnumResult en = g1_enumerate(j, Interval{1, 12}, p, 20000);
                for (auto& f : en.funcs) universe.push_back(f);
            }
            int cnt = threshold_count(sa.ys, universe, Rat(1, 4));
            row.values["max_hits"] = std::to_string(cnt) + " [measured]";
            row.values["picks"] = std::to_string(sa.picks.size());
            row.ok = true;
        } else {
            row.note = sa.note;
            row.values["status"] = "builder: " + sa.note;
            row.ok = true;  // recorded measurement; absence at mini scale is expected data
        }
        res.rows.push_back(row);
    }
    // profile constants
    {
        ReportRow row;
        row.id = "profile-constants";
        RowTimer t{row};
        for (const std::string& name : {std::string("paper"), std::string("mini"), std::string("micro")}) {
            ParameterProfile p = cfg.resolve_profile(name);
            row.values["c0_" + name] = rat_str(p.c0()) + (p.is_paper() ? " [bound]" : " [exact]");
            row.values["c1sq_" + name] = rat_str(p.c1_sq()) + " [exact]";
        }
        row.ok = true;
        res.rows.push_back(row);
    }
    for (const auto& r : res.rows) res.all_ok = res.all_ok && r.ok;
    return res;
}

SuiteResult run_games(const Config& cfg) {
    SuiteResult res;
    res.suite = "games";
    {
        ReportRow row;
        row.id = "l2sum-tail-games";
        RowTimer t{row};
        GameContext ctx;
        ctx.xi = Ordinal(1);
        ctx.space = "L2SUM";
        ctx.oracle = [](const Vec00& x) {
            NormResult r;
            r.lower = ExactValue::of_sqrt(l2sum_norm_sq(x));
            r.upper = r.lower;
            return r;
        };
        int plays = 10, done = 0;
        for (int g = 0; g < plays; ++g) {
            GameTranscript tr = play_game(ctx, s_strategy_tail(), v_strategy_l2blocks(4 + g), Rat(100), 64);
            if (tr.verdict != GameTranscript::Verdict::Undecided) ++done;
        }
        row.values["plays"] = std::to_string(done);
        row.ok = done == plays;
        res.rows.push_back(row);
    }
    {
        ReportRow row;
        row.id = "xg-subsequence-games";
        RowTimer t{row};
        ParameterProfile p = cfg.resolve_profile("game");
        CodingRegistry reg;
        NormEngine eng(p, reg, Ordinal(1));
        GameContext ctx;
        ctx.xi = Ordinal(1);
        ctx.space = "XG";
        ctx.registry = &reg;
        ctx.profile = &p;
        ctx.oracle = [&eng](const Vec00& x) { return eng.ground_norm(x); };
        int wins = 0, plays = 10;
        for (int g = 0; g < plays; ++g) {
            GameTranscript tr = play_game(ctx, s_strategy_mask(cfg.seed + g), v_strategy_special(Ordinal(1), reg, p),
                                          Rat(1), 64);
            if (tr.verdict == GameTranscript::Verdict::VWins) ++wins;
        }
        row.values["v_wins"] = std::to_string(wins) + "/" + std::to_string(plays);
        row.ok = wins == plays;
        res.rows.push_back(row);
    }
    for (const auto& r : res.rows) res.all_ok = res.all_ok && r.ok;
    return res;
}

}  // namespace

std::string SuiteResult::value_digest() const { return digest_of(rows); }

std::string SuiteResult::to_jsonl() const {
    std::ostringstream os;
    for (const auto& r : rows) {
        nlohmann::json j;
        j["suite"] = suite;
        j["id"] = r.id;
        j["ok"] = r.ok;
        j["values"] = r.values;
        j["note"] = r.note;
        j["wall_ms"] = r.wall_ms;
        os << j.dump() << "\n";
    }
    return os.str();
}

std::string SuiteResult::to_table() const {
    std::ostringstream os;
    os << "suite: " << suite << "\n";
    for (const auto& r : rows) {
        os << (r.ok ? "[PASS] " : "[FAIL] ") << r.id;
        if (!r.note.empty()) os << "  -- " << r.note;
        os << "\n";
        for (const auto& [k, v] : r.values) os << "    " << k << " = " << v << "\n";
    }
    os << (all_ok ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return os.str();
}

SuiteResult run_suite(const std::string& suite, const Config& cfg) {
    if (suite == "acceptance") return run_acceptance(cfg);
    if (suite == "estimates") return run_estimates(cfg);
    if (suite == "games") return run_games(cfg);
    throw UsageError("unknown suite: " + suite + " (expected acceptance|estimates|games)");
}

}  // namespace tslab
