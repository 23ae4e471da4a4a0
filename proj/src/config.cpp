#include "tslab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tslab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace

std::string Config::str() const {
    std::ostringstream os;
    os << "profile = " << profile << "\n";
    if (!registry_path.empty()) os << "registry = " << registry_path << "\n";
    os << "output_dir = " << output_dir << "\n";
    os << "enum_cap = " << enum_cap << "\n";
    os << "depth_cap = " << depth_cap << "\n";
    os << "time_budget_s = " << time_budget_s << "\n";
    os << "seed = " << seed << "\n";
    for (const auto& [name, spec] : custom_profiles) {
        os << "[profile " << name << "]\n";
        os << "m = ";
        for (size_t i = 0; i < spec.m.size(); ++i) os << (i ? "," : "") << spec.m[i];
        os << "\nn = ";
        for (size_t i = 0; i < spec.n.size(); ++i) os << (i ? "," : "") << spec.n[i];
        os << "\n";
        if (!spec.s.empty()) {
            os << "s = ";
            for (size_t i = 0; i < spec.s.size(); ++i) os << (i ? "," : "") << spec.s[i];
            os << "\n";
        }
        if (!spec.waived.empty()) {
            os << "waive = ";
            for (size_t i = 0; i < spec.waived.size(); ++i) os << (i ? "," : "") << spec.waived[i];
            os << "\n";
        }
    }
    return os.str();
}

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw UsageError("bad section at line " + std::to_string(lineno));
            std::string inner = trim(line.substr(1, line.size() - 2));
            if (inner.rfind("profile ", 0) != 0)
                throw UsageError("unknown section at line " + std::to_string(lineno));
            section = trim(inner.substr(8));
            c.custom_profiles[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) {
            if (key == "profile") c.profile = val;
            else if (key == "registry") c.registry_path = val;
            else if (key == "output_dir") c.output_dir = val;
            else if (key == "enum_cap") c.enum_cap = std::stol(val);
            else if (key == "depth_cap") c.depth_cap = std::stoi(val);
            else if (key == "time_budget_s") c.time_budget_s = std::stol(val);
            else if (key == "seed") c.seed = std::stoull(val);
            else throw UsageError("unknown config key: " + key);
        } else {
            auto& spec = c.custom_profiles[section];
            if (key == "m")
                for (const auto& t : split_list(val)) spec.m.push_back(BigInt(t));
            else if (key == "n")
                for (const auto& t : split_list(val)) spec.n.push_back(BigInt(t));
            else if (key == "s")
                for (const auto& t : split_list(val)) spec.s.push_back(std::stoi(t));
            else if (key == "waive")
                for (const auto& t : split_list(val)) spec.waived.push_back(t);
            else throw UsageError("unknown profile key: " + key);
        }
    }
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

void Config::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write config file: " + path);
    out << str();
}

void Config::validate() const {
    if (enum_cap <= 0 || depth_cap <= 0 || time_budget_s <= 0)
        throw PreconditionError("config caps must be positive");
}

ParameterProfile Config::resolve_profile() const {
    const char* env = std::getenv("WORKBENCH_PROFILE");
    return resolve_profile(env && *env ? env : profile);
}

ParameterProfile Config::resolve_profile(const std::string& name) const {
    auto it = custom_profiles.find(name);
    if (it != custom_profiles.end())
        return ParameterProfile::mini(name, it->second.m, it->second.n, it->second.s, it->second.waived);
    return builtin_profile(name);
}

ParameterProfile builtin_profile(const std::string& name) {
    auto pows = [](std::vector<int> exps) {
        std::vector<BigInt> out;
        for (int e : exps) out.push_back(BigInt(1) << e);
        return out;
    };
    if (name == "paper") return ParameterProfile::paper();
    if (name == "micro")
        return ParameterProfile::mini("micro", {2, 4, 8}, {2, 4, 6}, {}, {"growth_260m4"});
    if (name == "mini")
        return ParameterProfile::mini("mini", {4, 8, 16, 32, 64, 128, 256, 512},
                                      {4, 6, 8, 10, 12, 14, 16, 18}, {}, {"growth_260m4"});
    if (name == "attr16")
        return ParameterProfile::mini(
            "attr16", pows({2, 3, 4, 6, 8, 9, 26, 28, 30, 60, 62, 64, 130, 132, 134, 150}),
            {4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34}, {}, {"growth_260m4"});
    if (name == "game") {
        std::vector<BigInt> m, n;
        for (int j = 1; j <= 400; ++j) {
            m.push_back(BigInt(1) << (j + 1));
            n.push_back(2 * j + 2);
        }
        return ParameterProfile::mini("game", m, n, {}, {"growth_260m4"});
    }
    throw UsageError("unknown profile: " + name);
}

std::vector<std::string> builtin_profile_names() { return {"paper", "mini", "micro", "attr16", "game"}; }

}  // namespace tslab
