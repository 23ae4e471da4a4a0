#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tslab/analysis.hpp"
#include "tslab/cert_json.hpp"
#include "tslab/games.hpp"
#include "tslab/report.hpp"

using namespace tslab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitPrecondition = 4;

struct Session {
    Config cfg;
    std::string json_path;
    bool allow_alloc = false;

    void emit(const nlohmann::json& out) const {
        if (!json_path.empty()) {
            std::ofstream f(json_path);
            f << out.dump(2) << "\n";
        }
    }

    CodingRegistry load_registry() const {
        if (!cfg.registry_path.empty() && std::filesystem::exists(cfg.registry_path))
            return CodingRegistry::load(cfg.registry_path);
        return CodingRegistry();
    }

    void store_registry(CodingRegistry& reg) const {
        if (cfg.registry_path.empty() || !reg.dirty()) return;
        if (!allow_alloc)
            throw PreconditionError("registry allocation requires --allow-alloc");
        reg.save(cfg.registry_path);
        reg.clear_dirty();
    }
};

Vec00 parse_vec(const std::string& text) {
    // accepts either the canonical "[(i,p/q),...]" form or "i:p/q,i:p/q"
    if (!text.empty() && text.front() == '[') {
        Func f = parse_func(text + "|G:G0:0:0:{}");
        return f.v;
    }
    Vec00 v;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw UsageError("bad vector entry: " + tok);
        v.set(std::stoi(tok.substr(0, colon)), rat_parse(tok.substr(colon + 1)));
    }
    return v;
}

Interval parse_window(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("window must be lo:hi");
    return Interval{std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

void print_norm_result(const NormResult& r, Session& s) {
    std::cout << "lower = " << r.lower.str() << " (~" << r.lower.decimal(10) << ")\n";
    std::cout << "upper = " << r.upper.str() << " (~" << r.upper.decimal(10) << ")\n";
    std::cout << "provenance = " << provenance_name(r.prov) << ", depth = " << r.depth << "\n";
    nlohmann::json out;
    out["lower"] = r.lower.str();
    out["upper"] = r.upper.str();
    out["provenance"] = provenance_name(r.prov);
    out["depth"] = r.depth;
    out["witness"] = cert_to_json(r.witness);
    out["witness_l2_sup"] = r.witness_l2_sup;
    s.emit(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for Schreier families, miniature norming sets and their games"};
    app.require_subcommand(1);

    Session ses;
    std::string config_path;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--json", ses.json_path, "write machine-readable output to this path");
    app.add_flag("--allow-alloc", ses.allow_alloc, "permit coding-registry allocations to be persisted");

    // families ---------------------------------------------------------
    auto* fam_cmd = app.add_subcommand("families", "regular families of finite sets");
    std::string fam_spec, fam_set;
    int fam_n = 10, fam_cap = 30;
    auto* fam_member = fam_cmd->add_subcommand("member", "membership test");
    fam_member->add_option("--spec", fam_spec)->required();
    fam_member->add_option("--set", fam_set)->required();
    auto* fam_maximal = fam_cmd->add_subcommand("maximal", "maximality test");
    fam_maximal->add_option("--spec", fam_spec)->required();
    fam_maximal->add_option("--set", fam_set)->required();
    auto* fam_enum = fam_cmd->add_subcommand("enumerate", "restricted enumeration");
    fam_enum->add_option("--spec", fam_spec)->required();
    fam_enum->add_option("--n", fam_n)->required();
    fam_enum->add_option("--cap", fam_cap);
    auto* fam_order = fam_cmd->add_subcommand("order", "tree order of the restricted family");
    fam_order->add_option("--spec", fam_spec)->required();
    fam_order->add_option("--n", fam_n)->required();

    // normset ----------------------------------------------------------
    auto* ns_cmd = app.add_subcommand("normset", "norming-set membership and enumeration");
    std::string ns_rules = "G", ns_func, ns_cert_path, ns_window = "1:6", ns_xi = "1";
    int ns_j = 1, ns_depth = 1;
    std::size_t ns_cap = 100000;
    auto* ns_check = ns_cmd->add_subcommand("check", "verify a membership certificate");
    ns_check->add_option("--rules", ns_rules);
    ns_check->add_option("--xi", ns_xi);
    ns_check->add_option("--func", ns_func)->required();
    ns_check->add_option("--cert", ns_cert_path)->required();
    auto* ns_enum = ns_cmd->add_subcommand("enumerate", "bounded enumeration");
    ns_enum->add_option("--rules", ns_rules);
    ns_enum->add_option("--j", ns_j);
    ns_enum->add_option("--depth", ns_depth);
    ns_enum->add_option("--window", ns_window);
    ns_enum->add_option("--cap", ns_cap);

    // norm --------------------------------------------------------------
    auto* norm_cmd = app.add_subcommand("norm", "certified norm evaluation");
    std::string norm_space = "G", norm_x, norm_f, norm_xi = "1";
    int norm_depth = 2, norm_N = 4;
    auto* norm_eval = norm_cmd->add_subcommand("eval", "norm of a vector");
    norm_eval->add_option("--space", norm_space);
    norm_eval->add_option("--x", norm_x)->required();
    norm_eval->add_option("--depth", norm_depth);
    norm_eval->add_option("--xi", norm_xi);
    auto* norm_dual = norm_cmd->add_subcommand("dual", "dual norm bracket");
    norm_dual->add_option("--space", norm_space);
    norm_dual->add_option("--f", norm_f)->required();
    norm_dual->add_option("--N", norm_N)->required();
    norm_dual->add_option("--depth", norm_depth);
    norm_dual->add_option("--xi", norm_xi);
    auto* norm_quot = norm_cmd->add_subcommand("quotient", "quotient norm bracket");
    norm_quot->add_option("--space", norm_space);
    norm_quot->add_option("--x", norm_x)->required();
    norm_quot->add_option("--N", norm_N)->required();
    norm_quot->add_option("--depth", norm_depth);
    norm_quot->add_option("--xi", norm_xi);

    // analysis ----------------------------------------------------------
    auto* an_cmd = app.add_subcommand("analysis", "analytic machinery at finite scale");
    std::string an_xi = "1";
    int an_j = 1, an_start = 1, an_len = 2;
    bool an_lmode = false;
    std::string an_window = "1:64";
    auto* an_pair = an_cmd->add_subcommand("pair", "build an averaged exact pair");
    an_pair->add_option("--j", an_j)->required();
    an_pair->add_option("--window", an_window);
    an_pair->add_option("--flat", an_len);
    auto* an_attract = an_cmd->add_subcommand("attract", "build an attracting sequence");
    an_attract->add_option("--j", an_j);
    an_attract->add_option("--start", an_start);
    an_attract->add_flag("--L", an_lmode, "draw even coordinates from L");
    auto* an_tree = an_cmd->add_subcommand("tree", "build an l1/c0 tree over a coordinate pool");
    std::string an_pool = "5:25", an_mode = "l1";
    an_tree->add_option("--xi", an_xi);
    an_tree->add_option("--pool", an_pool);
    an_tree->add_option("--mode", an_mode);
    auto* an_tail = an_cmd->add_subcommand("tail", "tail index of a vector");
    std::string an_x, an_eps = "1";
    an_tail->add_option("--x", an_x)->required();
    an_tail->add_option("--eps", an_eps);
    auto* an_spread = an_cmd->add_subcommand("spread", "spreading-constant bracket for basis vectors");
    int an_budget = 8, an_minstart = 1, an_count = 6;
    an_spread->add_option("--xi", an_xi);
    an_spread->add_option("--count", an_count);
    an_spread->add_option("--min-start", an_minstart);
    an_spread->add_option("--budget", an_budget);
    auto* an_ris = an_cmd->add_subcommand("ris", "check the rapid-increase conditions for basis vectors");
    std::string an_coords = "1,3,5,7", an_jks = "1,2,3,4";
    an_ris->add_option("--coords", an_coords);
    an_ris->add_option("--jk", an_jks);
    auto* an_bi = an_cmd->add_subcommand("bi", "run one randomized inequality certification");
    std::uint64_t an_seed = 7;
    an_bi->add_option("--seed", an_seed);

    // game ---------------------------------------------------------------
    auto* game_cmd = app.add_subcommand("game", "combinatorial games");
    std::string g_xi = "1", g_space = "XG", g_s = "mask", g_v = "special", g_file;
    std::uint64_t g_seed = 1;
    int g_k = 8, g_cap = 64;
    std::string g_C = "1";
    auto* g_play = game_cmd->add_subcommand("play", "play one game");
    g_play->add_option("--xi", g_xi);
    g_play->add_option("--space", g_space);
    g_play->add_option("--s", g_s);
    g_play->add_option("--v", g_v);
    g_play->add_option("--seed", g_seed);
    g_play->add_option("--k", g_k);
    g_play->add_option("--C", g_C);
    g_play->add_option("--move-cap", g_cap);
    auto* g_verify = game_cmd->add_subcommand("verify", "replay and re-verdict a transcript");
    g_verify->add_option("file", g_file)->required();

    // report ---------------------------------------------------------------
    auto* rep_cmd = app.add_subcommand("report", "batch experiment suites");
    std::string rep_suite = "acceptance";
    auto* rep_export = rep_cmd->add_subcommand("export", "run a suite and emit JSON lines + table");
    rep_export->add_option("--suite", rep_suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return kExitOk;  // --help
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (!config_path.empty()) ses.cfg = Config::load(config_path);
        FamilyEngine fam;

        if (fam_member->parsed()) {
            bool res = fam.member(FamilySpec::parse(fam_spec), finset_parse(fam_set));
            std::cout << (res ? "true" : "false") << "\n";
            ses.emit({{"member", res}});
            return kExitOk;
        }
        if (fam_maximal->parsed()) {
            bool res = fam.is_maximal(FamilySpec::parse(fam_spec), finset_parse(fam_set));
            std::cout << (res ? "true" : "false") << "\n";
            ses.emit({{"maximal", res}});
            return kExitOk;
        }
        if (fam_enum->parsed()) {
            auto members = fam.enumerate_restricted(FamilySpec::parse(fam_spec), fam_n, fam_cap);
            for (const auto& f : members) std::cout << finset_str(f) << "\n";
            std::cout << "count = " << members.size() << "\n";
            nlohmann::json out;
            out["count"] = members.size();
            ses.emit(out);
            return kExitOk;
        }
        if (fam_order->parsed()) {
            auto members = fam.enumerate_restricted(FamilySpec::parse(fam_spec), fam_n, fam_cap);
            int order = tree_order(family_to_tree(members));
            std::cout << order << "\n";
            ses.emit({{"order", order}});
            return kExitOk;
        }

        ParameterProfile profile = ses.cfg.resolve_profile();

        if (ns_check->parsed()) {
            CodingRegistry reg = ses.load_registry();
            std::ifstream cf(ns_cert_path);
            if (!cf) throw UsageError("cannot read certificate file: " + ns_cert_path);
            std::ostringstream os;
            os << cf.rdbuf();
            CertNode cert = cert_from_json(os.str());
            Func f = parse_func(ns_func);
            RuleSet rules = RuleSet::parse(ns_rules, Ordinal::parse(ns_xi));
            MembershipCertificate mc{f, cert, rules.name};
            Verdict v = verify_membership(f, rules, mc, profile, reg);
            std::cout << (v.ok ? "accepted" : "rejected: " + v.category + ": " + v.message) << "\n";
            ses.emit({{"ok", v.ok}, {"category", v.category}, {"message", v.message}});
            return v.ok ? kExitOk : kExitPrecondition;
        }
        if (ns_enum->parsed()) {
            EnumResult en;
            if (ns_rules == "G") {
                en = g1_enumerate(ns_j, parse_window(ns_window), profile, ns_cap);
            } else if (ns_rules.rfind("W:", 0) == 0) {
                en = w_enumerate(std::stoi(ns_rules.substr(2)), ns_depth, parse_window(ns_window), profile, ns_cap);
            } else {
                throw UsageError("enumeration supports --rules G or W:j0");
            }
            for (const auto& f : en.funcs) std::cout << canonical_serialize(f) << "\n";
            std::cout << "count = " << en.funcs.size() << (en.truncated ? " (truncated)" : "") << "\n";
            ses.emit({{"count", en.funcs.size()}, {"truncated", en.truncated}});
            return en.truncated ? kExitResourceCap : kExitOk;
        }

        if (norm_eval->parsed() || norm_dual->parsed() || norm_quot->parsed()) {
            CodingRegistry reg = ses.load_registry();
            Ordinal xi = Ordinal::parse(norm_xi);
            NormEngine eng(profile, reg, xi);
            NormOracle oracle;
            if (norm_space == "L2SUM") {
                oracle = [](const Vec00& y) {
                    NormResult r;
                    r.lower = ExactValue::of_sqrt(l2sum_norm_sq(y));
                    r.upper = r.lower;
                    return r;
                };
            } else if (norm_space == "G") {
                oracle = [&eng](const Vec00& y) { return eng.ground_norm(y); };
            } else {
                RuleSet rules = RuleSet::parse(norm_space, xi);
                int depth = std::min(norm_depth, ses.cfg.depth_cap);
                oracle = [&eng, rules, depth](const Vec00& y) { return eng.extension_norm(y, rules, depth); };
            }
            if (norm_eval->parsed()) {
                if (norm_depth > ses.cfg.depth_cap) {
                    NormResult r = oracle(parse_vec(norm_x));
                    r.truncated = true;
                    print_norm_result(r, ses);
                    std::cerr << "depth capped at " << ses.cfg.depth_cap << "\n";
                    return kExitResourceCap;
                }
                print_norm_result(oracle(parse_vec(norm_x)), ses);
                return kExitOk;
            }
            if (norm_dual->parsed()) {
                Func f = parse_func(norm_f + (norm_f.find('|') == std::string::npos ? "|G:G0:0:0:{}" : ""));
                BracketResult br = dual_norm(f, norm_N, oracle);
                std::cout << "[" << rat_str(br.lower) << ", " << rat_str(br.upper) << "]"
                          << (br.converged ? "" : " (iteration cap)") << "\n";
                ses.emit({{"lower", rat_str(br.lower)}, {"upper", rat_str(br.upper)}, {"converged", br.converged}});
                return kExitOk;
            }
            BracketResult br = quotient_norm(parse_vec(norm_x), norm_N, oracle,
                                             [](int k) { return LambdaPartition::l_member(k); });
            std::cout << "[" << rat_str(br.lower) << ", " << rat_str(br.upper) << "]\n";
            ses.emit({{"lower", rat_str(br.lower)}, {"upper", rat_str(br.upper)}});
            return kExitOk;
        }

        if (an_pair->parsed()) {
            CodingRegistry reg = ses.load_registry();
            NormEngine eng(profile, reg, Ordinal(1));
            ExactPair pr = build_exact_pair(parse_window(an_window), an_j, eng, an_len);
            if (!pr.built) {
                std::cerr << "failed: " << pr.note << "\n";
                return kExitPrecondition;
            }
            std::cout << "f = " << canonical_serialize(pr.f) << "\n";
            nlohmann::json out;
            out["f"] = canonical_serialize(pr.f);
            out["x"] = pr.x.str();
            for (const auto& c : pr.clauses) {
                std::cout << (c.ok ? "[ok]   " : "[fail] ") << c.name << " " << c.detail << "\n";
                out["clauses"][c.name] = c.ok;
            }
            ses.emit(out);
            return kExitOk;
        }
        if (an_attract->parsed()) {
            CodingRegistry reg = ses.load_registry();
            NormEngine eng(profile, reg, Ordinal(1));
            AttractingSequence seq = build_attracting_sequence(an_j, an_start, eng, reg, an_lmode);
            if (!seq.built) {
                std::cerr << "failed: " << seq.note << "\n";
                return kExitPrecondition;
            }
            for (const auto& f : seq.fs) std::cout << canonical_serialize(f) << "\n";
            ses.store_registry(reg);
            nlohmann::json out;
            out["length"] = seq.fs.size();
            ses.emit(out);
            return kExitOk;
        }
        if (an_tree->parsed()) {
            CodingRegistry reg = ses.load_registry();
            Interval pw = parse_window(an_pool);
            std::vector<int> pool;
            for (int c = pw.lo; c <= pw.hi; ++c) pool.push_back(c);
            L1TreeResult tr = build_l1_tree(pool, Ordinal::parse(an_xi),
                                            an_mode == "l1" ? TreeMode::L1Primal : TreeMode::C0Dual, reg, profile);
            std::cout << "chains = " << tr.chains.size() << ", order = " << tr.order
                      << (tr.complete ? "" : " (partial)") << "\n";
            ses.store_registry(reg);
            ses.emit({{"chains", tr.chains.size()}, {"order", tr.order}, {"complete", tr.complete}});
            return kExitOk;
        }
        if (an_tail->parsed()) {
            int j0 = tail_index(parse_vec(an_x), rat_parse(an_eps), profile);
            std::cout << j0 << "\n";
            ses.emit({{"j0", j0}});
            return kExitOk;
        }
        if (an_spread->parsed()) {
            CodingRegistry reg = ses.load_registry();
            NormEngine eng(profile, reg, Ordinal::parse(an_xi));
            std::vector<Vec00> xs;
            for (int i = 1; i <= an_count + an_minstart + 4; ++i) xs.push_back(Vec00::unit(i));
            SpreadingBracket br = spreading_constant(
                xs, Ordinal::parse(an_xi), an_minstart,
                [&eng](const Vec00& y) { return eng.ground_norm(y); }, an_budget);
            std::cout << "[" << rat_str(br.lower) << ", " << rat_str(br.upper) << "]\n";
            ses.emit({{"lower", rat_str(br.lower)}, {"upper", rat_str(br.upper)}});
            return kExitOk;
        }
        if (an_ris->parsed()) {
            CodingRegistry reg = ses.load_registry();
            NormEngine eng(profile, reg, Ordinal(1));
            std::vector<Vec00> xs;
            for (int c : finset_parse(an_coords)) xs.push_back(Vec00::unit(c));
            std::vector<int> jks;
            for (int j : finset_parse(an_jks)) jks.push_back(j);
            RISWitness w = ris_check(xs, jks, Rat(5, 3), Rat(1, 2), eng, RuleSet::K(Ordinal(1)));
            std::cout << (w.ok ? "RIS conditions hold" : "RIS conditions fail") << "\n";
            std::cout << "a: " << (w.cond_a.ok ? "ok" : "fail") << " (" << w.cond_a.granularity << ") "
                      << w.cond_a.detail << "\n";
            std::cout << "b: " << (w.cond_b.ok ? "ok" : "fail") << " (" << w.cond_b.granularity << ") "
                      << w.cond_b.detail << "\n";
            std::cout << "c: " << (w.cond_c.ok ? "ok" : "fail") << " (" << w.cond_c.granularity << ") "
                      << w.cond_c.detail << "\n";
            ses.emit({{"ok", w.ok}});
            return kExitOk;
        }
        if (an_bi->parsed()) {
            CodingRegistry reg = ses.load_registry();
            NormEngine eng(profile, reg, Ordinal(1));
            std::mt19937_64 rng(an_seed);
            BasicInequalityInput in;
            in.j0 = 2;
            in.C = Rat(5, 3);
            in.eps = Rat(1, 2);
            int pos = 1;
            for (int i = 0; i < 4; ++i) {
                in.xs.push_back(Vec00::unit(pos));
                in.jk.push_back(i + 1);
                in.coeffs.push_back(Rat(1, i + 1));
                pos += 2;
            }
            in.f = op_node(2, {ground_leaf(Func::ground0(1), GroundCert{GroundKind::G0}),
                               ground_leaf(Func::ground0(3), GroundCert{GroundKind::G0})},
                           profile);
            BasicInequalityCertificate cert = certify_basic_inequality(in, eng);
            std::cout << (cert.ok ? "certified" : "failed: " + cert.note) << "\n";
            std::cout << "lhs = " << rat_str(cert.lhs) << ", rhs = " << cert.rhs.str()
                      << ", eps_f = " << cert.eps_f.str() << "\n";
            ses.emit({{"ok", cert.ok}, {"lhs", rat_str(cert.lhs)}, {"eps_f", cert.eps_f.str()}});
            return cert.ok ? kExitOk : kExitPrecondition;
        }

        if (g_play->parsed()) {
            CodingRegistry reg = ses.load_registry();
            Ordinal xi = Ordinal::parse(g_xi);
            NormEngine eng(profile, reg, xi);
            GameContext ctx;
            ctx.xi = xi;
            ctx.space = g_space;
            ctx.registry = &reg;
            ctx.profile = &profile;
            if (g_space == "L2SUM")
                ctx.oracle = [](const Vec00& y) {
                    NormResult r;
                    r.lower = ExactValue::of_sqrt(l2sum_norm_sq(y));
                    r.upper = r.lower;
                    return r;
                };
            else
                ctx.oracle = [&eng](const Vec00& y) { return eng.ground_norm(y); };
            SStrategy s = g_s == "tail" ? s_strategy_tail() : s_strategy_mask(g_seed);
            VStrategy v = g_v == "special" ? v_strategy_special(xi, reg, profile) : v_strategy_l2blocks(g_k);
            GameTranscript tr = play_game(ctx, s, v, rat_parse(g_C), g_cap);
            tr.seed = g_seed;
            const char* names[] = {"V-wins", "S-wins", "undecided", "illegal"};
            std::cout << names[static_cast<int>(tr.verdict)] << (tr.note.empty() ? "" : ": " + tr.note) << "\n";
            std::cout << "equivalence = " << tr.equivalence.str() << "\n";
            if (!ses.json_path.empty()) {
                std::ofstream f(ses.json_path);
                f << tr.to_json() << "\n";
            }
            ses.store_registry(reg);
            return kExitOk;
        }
        if (g_verify->parsed()) {
            std::ifstream f(g_file);
            if (!f) throw UsageError("cannot read transcript: " + g_file);
            std::ostringstream os;
            os << f.rdbuf();
            GameTranscript tr = GameTranscript::from_json(os.str());
            CodingRegistry reg = ses.load_registry();
            GameContext ctx;
            ctx.xi = tr.xi;
            ctx.space = tr.space;
            ctx.registry = &reg;
            ctx.profile = &profile;
            ctx.oracle = [](const Vec00&) { return NormResult{}; };
            std::string why;
            auto verdict = validate_transcript(tr, ctx, &why);
            const char* names[] = {"V-wins", "S-wins", "undecided", "illegal"};
            std::cout << names[static_cast<int>(verdict)] << (why.empty() ? "" : ": " + why) << "\n";
            ses.emit({{"verdict", names[static_cast<int>(verdict)]}});
            return kExitOk;
        }

        if (rep_export->parsed()) {
            SuiteResult res = run_suite(rep_suite, ses.cfg);
            std::cout << res.to_table();
            std::filesystem::create_directories(ses.cfg.output_dir);
            std::string path = ses.cfg.output_dir + "/" + rep_suite + ".jsonl";
            std::ofstream f(path);
            f << res.to_jsonl();
            std::cout << "rows written to " << path << "\n";
            return res.all_ok ? kExitOk : kExitPrecondition;
        }

        std::cerr << app.help() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failure: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
}
