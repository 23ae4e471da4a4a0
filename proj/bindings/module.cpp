#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tslab/analysis.hpp"
#include "tslab/cert_json.hpp"
#include "tslab/config.hpp"
#include "tslab/games.hpp"
#include "tslab/report.hpp"

namespace py = pybind11;
using namespace tslab;

namespace {

Vec00 vec_from_pairs(const std::vector<std::pair<int, std::string>>& entries) {
    Vec00 v;
    for (const auto& [i, c] : entries) v.set(i, rat_parse(c));
    return v;
}

py::dict norm_result_dict(const NormResult& r) {
    py::dict d;
    d["lower"] = r.lower.str();
    d["upper"] = r.upper.str();
    d["lower_float"] = r.lower.to_double();
    d["upper_float"] = r.upper.to_double();
    d["provenance"] = provenance_name(r.prov);
    d["witness"] = canonical_serialize(r.witness.f);
    d["witness_l2_sup"] = r.witness_l2_sup;
    return d;
}

// Owns the profile, registry and engine together so lifetimes line up.
struct Workbench {
    ParameterProfile profile;
    CodingRegistry registry;
    Ordinal xi;
    std::unique_ptr<NormEngine> engine;

    Workbench(const std::string& profile_name, const std::string& xi_text)
        : profile(builtin_profile(profile_name)), xi(Ordinal::parse(xi_text)) {
        engine = std::make_unique<NormEngine>(profile, registry, xi);
    }

    py::dict ground_norm(const std::vector<std::pair<int, std::string>>& entries) const {
        return norm_result_dict(engine->ground_norm(vec_from_pairs(entries)));
    }

    py::dict extension_norm(const std::vector<std::pair<int, std::string>>& entries,
                            const std::string& rules, int depth) const {
        RuleSet rs = RuleSet::parse(rules, xi);
        return norm_result_dict(engine->extension_norm(vec_from_pairs(entries), rs, depth));
    }

    py::dict dual_norm_bracket(const std::vector<std::pair<int, std::string>>& entries, int n_dim,
                               int depth) const {
        Func f;
        f.v = vec_from_pairs(entries);
        RuleSet rs = RuleSet::K(xi);
        auto oracle = [this, rs, depth](const Vec00& y) { return engine->extension_norm(y, rs, depth); };
        BracketResult br = dual_norm(f, n_dim, oracle);
        py::dict d;
        d["lower"] = rat_str(br.lower);
        d["upper"] = rat_str(br.upper);
        d["converged"] = br.converged;
        return d;
    }

    py::dict quotient_norm_bracket(const std::vector<std::pair<int, std::string>>& entries, int n_dim,
                                   int depth) const {
        RuleSet rs = RuleSet::K(xi);
        auto oracle = [this, rs, depth](const Vec00& y) { return engine->extension_norm(y, rs, depth); };
        BracketResult br = quotient_norm(vec_from_pairs(entries), n_dim, oracle,
                                         [](int k) { return LambdaPartition::l_member(k); });
        py::dict d;
        d["lower"] = rat_str(br.lower);
        d["upper"] = rat_str(br.upper);
        return d;
    }

    py::dict build_attractor(int j, int start, bool l_mode) {
        AttractingSequence seq = build_attracting_sequence(j, start, *engine, registry, l_mode);
        py::dict d;
        d["built"] = seq.built;
        d["note"] = seq.note;
        py::list fs;
        for (const auto& f : seq.fs) fs.append(canonical_serialize(f));
        d["functionals"] = fs;
        return d;
    }

    py::dict play_xg_game(unsigned long long seed) {
        GameContext ctx;
        ctx.xi = xi;
        ctx.space = "XG";
        ctx.registry = &registry;
        ctx.profile = &profile;
        ctx.oracle = [this](const Vec00& y) { return engine->ground_norm(y); };
        GameTranscript tr =
            play_game(ctx, s_strategy_mask(seed), v_strategy_special(xi, registry, profile), Rat(1), 64);
        py::dict d;
        const char* names[] = {"V-wins", "S-wins", "undecided", "illegal"};
        d["verdict"] = names[static_cast<int>(tr.verdict)];
        d["equivalence"] = tr.equivalence.str();
        d["moves"] = tr.v_moves.size();
        d["transcript"] = tr.to_json();
        return d;
    }

    std::string c0() const { return rat_str(profile.c0()); }
    std::string c1_sq() const { return rat_str(profile.c1_sq()); }
    int horizon() const { return profile.horizon(); }
};

}  // namespace

PYBIND11_MODULE(_tslab, m) {
    m.doc() = "exact-arithmetic workbench for Schreier families, miniature mixed-Tsirelson "
              "norming sets, and the combinatorial games they support";

    m.def("family_member", [](const std::string& spec, const std::string& set) {
        FamilyEngine fam;
        return fam.member(FamilySpec::parse(spec), finset_parse(set));
    });
    m.def("family_maximal", [](const std::string& spec, const std::string& set) {
        FamilyEngine fam;
        return fam.is_maximal(FamilySpec::parse(spec), finset_parse(set));
    });
    m.def("family_enumerate", [](const std::string& spec, int n) {
        FamilyEngine fam;
        std::vector<std::string> out;
        for (const auto& f : fam.enumerate_restricted(FamilySpec::parse(spec), n)) out.push_back(finset_str(f));
        return out;
    });
    m.def("family_order", [](const std::string& spec, int n) {
        FamilyEngine fam;
        return tree_order(family_to_tree(fam.enumerate_restricted(FamilySpec::parse(spec), n)));
    });
    m.def("ordinal_normalize", [](const std::string& text) { return Ordinal::parse(text).str(); });
    m.def("fundamental_sequence", [](const std::string& xi, unsigned long long n) {
        return tslab::fundamental_sequence(Ordinal::parse(xi), n).str();
    });
    m.def("l2sum_norm_sq", [](const std::vector<std::pair<int, std::string>>& entries) {
        return rat_str(l2sum_norm_sq(vec_from_pairs(entries)));
    });
    m.def("lambda_class", &LambdaPartition::class_of);
    m.def("l_member", &LambdaPartition::l_member);
    m.def("profiles", &builtin_profile_names);
    m.def("run_suite", [](const std::string& suite) {
        Config cfg;
        SuiteResult res = run_suite(suite, cfg);
        py::dict d;
        d["all_ok"] = res.all_ok;
        d["table"] = res.to_table();
        return d;
    });

    py::class_<Workbench>(m, "Workbench")
        .def(py::init<const std::string&, const std::string&>(), py::arg("profile") = "mini",
             py::arg("xi") = "1")
        .def("ground_norm", &Workbench::ground_norm)
        .def("extension_norm", &Workbench::extension_norm, py::arg("entries"), py::arg("rules") = "K",
             py::arg("depth") = 2)
        .def("dual_norm", &Workbench::dual_norm_bracket, py::arg("entries"), py::arg("n_dim"),
             py::arg("depth") = 2)
        .def("quotient_norm", &Workbench::quotient_norm_bracket, py::arg("entries"), py::arg("n_dim"),
             py::arg("depth") = 2)
        .def("build_attractor", &Workbench::build_attractor, py::arg("j") = 1, py::arg("start") = 1,
             py::arg("l_mode") = false)
        .def("play_xg_game", &Workbench::play_xg_game, py::arg("seed") = 1)
        .def("c0", &Workbench::c0)
        .def("c1_sq", &Workbench::c1_sq)
        .def("horizon", &Workbench::horizon);
}
