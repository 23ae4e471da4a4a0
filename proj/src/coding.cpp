#include "tslab/coding.hpp"

#include <fstream>
#include <sstream>

#include "tslab/norming.hpp"

namespace tslab {

int LambdaPartition::class_of(int k) {
    if (k < 1) throw PreconditionError("Lambda classes partition the naturals >= 1");
    int i = 1;
    while (k % 2 == 0) {
        k /= 2;
        ++i;
    }
    return i;
}

int LambdaPartition::element(int i, int t) {
    if (i < 1 || t < 1) throw PreconditionError("LambdaPartition::element needs i,t >= 1");
    return (1 << (i - 1)) * (2 * t - 1);
}

bool LambdaPartition::l_member(int k) {
    int i = class_of(k);
    int odd = k >> (i - 1);     // = 2t - 1
    int t = (odd + 1) / 2;
    return t % 2 == 0;
}

int LambdaPartition::pick(int i, int floor, bool in_l) {
    for (int t = 1;; ++t) {
        if (in_l && t % 2 != 0) continue;
        long long v = static_cast<long long>(element(i, t));
        if (v > floor) {
            if (v > (1LL << 30)) throw ResourceCapError("Lambda pick overflow");
            return static_cast<int>(v);
        }
    }
}

CodingRegistry::CodingRegistry() : store_(std::make_shared<SequenceStore>()) {}

void validate_u_prefix(const std::vector<Func>& prefix, const ParameterProfile& profile) {
    if (prefix.empty()) throw PreconditionError("empty special-sequence prefix");
    int last_j = 0;
    for (size_t i = 0; i < prefix.size(); ++i) {
        const Func& f = prefix[i];
        std::string why;
        if (!is_g1_element(f, f.index, profile, &why))
            throw PreconditionError("prefix element " + std::to_string(i + 1) + " is not a G1 element: " + why);
        if (f.index <= last_j)
            throw PreconditionError("prefix indices must be strictly increasing");
        last_j = f.index;
        if (i > 0 && !blocks_successive(prefix[i - 1].v, f.v))
            throw PreconditionError("prefix functionals must be successive");
    }
}

void validate_qs_prefix(const std::vector<Func>& prefix) {
    if (prefix.empty()) throw PreconditionError("empty Q_s prefix");
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i].v.is_zero()) throw PreconditionError("Q_s elements must be nonzero");
        if (i > 0 && !blocks_successive(prefix[i - 1].v, prefix[i].v))
            throw PreconditionError("Q_s elements must be successive");
    }
}

int CodingRegistry::smallest_unused_even(const std::map<std::string, int>& used_map, int above) const {
    std::set<int> used;
    for (const auto& [_, v] : used_map) used.insert(v);
    int v = above % 2 == 0 ? above + 2 : above + 1;
    if (v < 2) v = 2;
    while (used.count(v)) v += 2;
    return v;
}

int CodingRegistry::sigma1_assign(const std::vector<Func>& prefix, const ParameterProfile& profile) {
    validate_u_prefix(prefix, profile);
    std::string key = "s1|" + serialize_prefix(prefix);
    auto it = sigma1_.find(key);
    if (it != sigma1_.end()) return it->second;
    int parent_value = 0;
    if (prefix.size() > 1) {
        std::vector<Func> parent(prefix.begin(), prefix.end() - 1);
        auto pit = sigma1_.find("s1|" + serialize_prefix(parent));
        if (pit == sigma1_.end())
            throw PreconditionError("sigma1: parent prefix has no assignment yet");
        parent_value = pit->second;
    }
    int v = smallest_unused_even(sigma1_, parent_value);
    sigma1_[key] = v;
    log_.push_back("s1 " + hex64(fnv1a64(key)) + " -> " + std::to_string(v));
    dirty_ = true;
    return v;
}

std::optional<int> CodingRegistry::sigma1_lookup(const std::vector<Func>& prefix) const {
    auto it = sigma1_.find("s1|" + serialize_prefix(prefix));
    if (it == sigma1_.end()) return std::nullopt;
    return it->second;
}

bool CodingRegistry::sigma_growth_ok(const std::vector<Func>& prefix, int value,
                                     const ParameterProfile& profile) const {
    if (!profile.has_index(2 * value)) return false;
    // m_{2v}^(1/2) > max |f_i(e_l)|^-1 * maxsupp f_d, compared via squares.
    Rat bound(0);
    for (const auto& f : prefix)
        for (const auto& [l, c] : f.v.entries()) bound = std::max(bound, Rat(1) / rat_abs(c));
    bound *= prefix.back().v.max_support();
    return profile.m(2 * value) > bound * bound;
}

int CodingRegistry::sigma_assign(const std::vector<Func>& prefix, const ParameterProfile& profile) {
    validate_qs_prefix(prefix);
    std::string key = "s|" + serialize_prefix(prefix);
    auto it = sigma_.find(key);
    if (it != sigma_.end()) return it->second;
    std::set<int> used;
    for (const auto& [_, v] : sigma_) used.insert(v);
    for (int v = 2; profile.has_index(2 * v) || profile.is_paper(); v += 2) {
        if (used.count(v)) continue;
        if (sigma_growth_ok(prefix, v, profile)) {
            sigma_[key] = v;
            log_.push_back("s " + hex64(fnv1a64(key)) + " -> " + std::to_string(v));
            dirty_ = true;
            return v;
        }
        if (profile.is_paper() && v > 64) break;  // paper m-values explode fast; give up sanely
    }
    throw ResourceCapError("sigma: no admissible unused value within profile horizon");
}

std::optional<int> CodingRegistry::sigma_lookup(const std::vector<Func>& prefix) const {
    auto it = sigma_.find("s|" + serialize_prefix(prefix));
    if (it == sigma_.end()) return std::nullopt;
    return it->second;
}

std::string CodingRegistry::canonical_dump() const {
    std::map<std::string, int> all;
    for (const auto& [k, v] : sigma1_) all[k] = v;
    for (const auto& [k, v] : sigma_) all[k] = v;
    std::ostringstream os;
    for (const auto& [k, v] : all)
        os << hex64(fnv1a64(k)) << "\t" << k << "\t" << v << "\n";
    return os.str();
}

void CodingRegistry::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write registry file: " + path);
    out << canonical_dump();
}

CodingRegistry CodingRegistry::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read registry file: " + path);
    CodingRegistry reg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw UsageError("malformed registry line " + std::to_string(lineno));
        std::string hash = line.substr(0, t1);
        std::string key = line.substr(t1 + 1, t2 - t1 - 1);
        int value = std::stoi(line.substr(t2 + 1));
        if (hash != hex64(fnv1a64(key)))
            throw UsageError("registry key hash mismatch at line " + std::to_string(lineno));
        if (key.rfind("s1|", 0) == 0)
            reg.sigma1_[key] = value;
        else if (key.rfind("s|", 0) == 0)
            reg.sigma_[key] = value;
        else
            throw UsageError("registry key with unknown map prefix at line " + std::to_string(lineno));
    }
    reg.dirty_ = false;
    return reg;
}

}  // namespace tslab
