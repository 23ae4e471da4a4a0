#include "tslab/cert_json.hpp"

#include "json.hpp"

namespace tslab {

namespace {

using nlohmann::json;

json ground_to_json(const GroundCert& g) {
    json j;
    j["kind"] = static_cast<int>(g.kind);
    j["j"] = g.j;
    j["sign"] = g.sign;
    j["win_lo"] = g.window.lo;
    j["win_hi"] = g.window.hi == kNoBound ? -1 : g.window.hi;
    j["signs"] = g.signs;
    json comps = json::array();
    for (const auto& f : g.comps) comps.push_back(canonical_serialize(f));
    j["comps"] = comps;
    json lambdas = json::array();
    for (const auto& l : g.lambdas) lambdas.push_back(rat_str(l));
    j["lambdas"] = lambdas;
    json sub = json::array();
    for (const auto& s : g.sub) sub.push_back(ground_to_json(s));
    j["sub"] = sub;
    return j;
}

GroundCert ground_from_json(const json& j) {
    GroundCert g;
    g.kind = static_cast<GroundKind>(j.at("kind").get<int>());
    g.j = j.value("j", 0);
    g.sign = j.value("sign", 1);
    g.window.lo = j.value("win_lo", 1);
    int hi = j.value("win_hi", -1);
    g.window.hi = hi < 0 ? kNoBound : hi;
    for (const auto& s : j.value("signs", std::vector<int>{})) g.signs.push_back(s);
    for (const auto& c : j.at("comps")) g.comps.push_back(parse_func(c.get<std::string>()));
    for (const auto& l : j.at("lambdas")) g.lambdas.push_back(rat_parse(l.get<std::string>()));
    for (const auto& s : j.at("sub")) g.sub.push_back(ground_from_json(s));
    return g;
}

json node_to_json(const CertNode& n) {
    json j;
    j["rule"] = static_cast<int>(n.rule);
    j["f"] = canonical_serialize(n.f);
    j["sign"] = n.sign;
    j["win_lo"] = n.window.lo;
    j["win_hi"] = n.window.hi == kNoBound ? -1 : n.window.hi;
    j["j"] = n.j;
    j["odd_op"] = n.odd_op;
    if (n.odd) {
        json w;
        json seq = json::array();
        for (const auto& f : n.odd->seq) seq.push_back(canonical_serialize(f));
        w["seq"] = seq;
        json certs = json::array();
        for (const auto& c : n.odd->entry_certs) certs.push_back(node_to_json(c));
        w["entry_certs"] = certs;
        w["j1"] = n.odd->j1;
        w["hi_variant"] = n.odd->hi_variant;
        j["odd"] = w;
    }
    json coeffs = json::array();
    for (const auto& c : n.coeffs) coeffs.push_back(rat_str(c));
    j["coeffs"] = coeffs;
    json kids = json::array();
    for (const auto& k : n.kids) kids.push_back(node_to_json(k));
    j["kids"] = kids;
    j["ground"] = ground_to_json(n.ground);
    return j;
}

CertNode node_from_json(const json& j) {
    CertNode n;
    n.rule = static_cast<CertNode::Rule>(j.at("rule").get<int>());
    n.f = parse_func(j.at("f").get<std::string>());
    n.sign = j.value("sign", 1);
    n.window.lo = j.value("win_lo", 1);
    int hi = j.value("win_hi", -1);
    n.window.hi = hi < 0 ? kNoBound : hi;
    n.j = j.value("j", 0);
    n.odd_op = j.value("odd_op", false);
    if (j.contains("odd")) {
        auto w = std::make_shared<OddOpWitness>();
        for (const auto& s : j.at("odd").at("seq")) w->seq.push_back(parse_func(s.get<std::string>()));
        for (const auto& c : j.at("odd").at("entry_certs")) w->entry_certs.push_back(node_from_json(c));
        w->j1 = j.at("odd").value("j1", 0);
        w->hi_variant = j.at("odd").value("hi_variant", false);
        n.odd = w;
    }
    for (const auto& c : j.at("coeffs")) n.coeffs.push_back(rat_parse(c.get<std::string>()));
    for (const auto& k : j.at("kids")) n.kids.push_back(node_from_json(k));
    n.ground = ground_from_json(j.at("ground"));
    return n;
}

}  // namespace

std::string cert_to_json(const CertNode& node) { return node_to_json(node).dump(2); }

CertNode cert_from_json(const std::string& text) { return node_from_json(json::parse(text)); }

}  // namespace tslab
