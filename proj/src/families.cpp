#include "tslab/families.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tslab {

bool finset_valid(const FinSet& f) {
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 1) return false;
        if (i > 0 && f[i - 1] >= f[i]) return false;
    }
    return true;
}

std::string finset_str(const FinSet& f) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) os << ",";
        os << f[i];
    }
    os << "}";
    return os.str();
}

FinSet finset_parse(const std::string& s) {
    FinSet out;
    std::string body = s;
    if (!body.empty() && body.front() == '{') body = body.substr(1);
    if (!body.empty() && body.back() == '}') body.pop_back();
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (!finset_valid(out)) throw UsageError("set is not strictly increasing: " + s);
    return out;
}

FamilySpec FamilySpec::A(std::uint64_t n) {
    FamilySpec s;
    s.kind_ = Kind::A;
    s.n_ = n;
    return s;
}

FamilySpec FamilySpec::S(const Ordinal& xi) {
    FamilySpec s;
    s.kind_ = Kind::S;
    s.xi_ = xi;
    return s;
}

FamilySpec FamilySpec::Compose(FamilySpec outer, FamilySpec inner) {
    FamilySpec s;
    s.kind_ = Kind::Compose;
    s.outer_ = std::make_shared<FamilySpec>(std::move(outer));
    s.inner_ = std::make_shared<FamilySpec>(std::move(inner));
    return s;
}

FamilySpec FamilySpec::Restrict(FamilySpec base, int cap) {
    FamilySpec s;
    s.kind_ = Kind::Restrict;
    s.outer_ = std::make_shared<FamilySpec>(std::move(base));
    s.cap_ = cap;
    return s;
}

std::string FamilySpec::str() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::A: os << "A(" << n_ << ")"; break;
        case Kind::S: os << "S(" << xi_.str() << ")"; break;
        case Kind::Compose: os << outer_->str() << "[" << inner_->str() << "]"; break;
        case Kind::Restrict: os << outer_->str() << "|N=" << cap_; break;
    }
    return os.str();
}

namespace {

// Parses one atom "A(..)" or "S(..)", leaving pos after it.
FamilySpec parse_atom(const std::string& s, size_t& pos) {
    if (pos >= s.size()) throw UsageError("truncated family spec: " + s);
    char c = s[pos];
    if (c != 'A' && c != 'S') throw UsageError("family spec must start with A or S: " + s);
    ++pos;
    if (pos >= s.size() || s[pos] != '(') throw UsageError("expected '(' in family spec: " + s);
    ++pos;
    int depth = 1;
    size_t start = pos;
    while (pos < s.size() && depth > 0) {
        if (s[pos] == '(') ++depth;
        if (s[pos] == ')') --depth;
        ++pos;
    }
    if (depth != 0) throw UsageError("unbalanced parentheses in family spec: " + s);
    std::string arg = s.substr(start, pos - 1 - start);
    if (c == 'A') return FamilySpec::A(std::stoull(arg));
    return FamilySpec::S(Ordinal::parse(arg));
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    size_t pos = 0;
    FamilySpec spec = parse_atom(s, pos);
    while (pos < s.size() && s[pos] == '[') {
        ++pos;
        FamilySpec inner = parse_atom(s, pos);
        // allow nested composition inside brackets
        while (pos < s.size() && s[pos] == '[') {
            ++pos;
            FamilySpec inner2 = parse_atom(s, pos);
            if (pos >= s.size() || s[pos] != ']') throw UsageError("expected ']' in family spec: " + s);
            ++pos;
            inner = FamilySpec::Compose(std::move(inner), std::move(inner2));
        }
        if (pos >= s.size() || s[pos] != ']') throw UsageError("expected ']' in family spec: " + s);
        ++pos;
        spec = FamilySpec::Compose(std::move(spec), std::move(inner));
    }
    if (pos < s.size() && s[pos] == '|') {
        ++pos;
        if (s.compare(pos, 2, "N=") != 0) throw UsageError("expected 'N=' in family spec: " + s);
        pos += 2;
        spec = FamilySpec::Restrict(std::move(spec), std::stoi(s.substr(pos)));
        pos = s.size();
    }
    if (pos != s.size()) throw UsageError("trailing characters in family spec: " + s);
    return spec;
}

bool FamilyEngine::member(const FamilySpec& spec, const FinSet& f) {
    if (!finset_valid(f)) throw PreconditionError("not a valid finite set");
    return member_impl(spec.str(), spec, f);
}

bool FamilyEngine::member_impl(const std::string& key, const FamilySpec& spec, const FinSet& f) {
    if (f.empty()) return true;  // the empty set belongs to every family handled here
    auto mk = std::make_pair(key, f);
    auto it = memo_.find(mk);
    if (it != memo_.end()) return it->second;
    bool res = false;
    switch (spec.kind()) {
        case FamilySpec::Kind::A:
            res = f.size() <= spec.a_n();
            break;
        case FamilySpec::Kind::S:
            res = member_s(spec.xi(), f);
            break;
        case FamilySpec::Kind::Compose:
            res = member_compose(spec.outer(), spec.inner(), f);
            break;
        case FamilySpec::Kind::Restrict:
            res = f.back() <= spec.cap() && member(spec.outer(), f);
            break;
    }
    memo_[mk] = res;
    return res;
}

bool FamilyEngine::member_s(const Ordinal& xi, const FinSet& f) {
    if (f.empty()) return true;
    if (xi.is_zero()) return f.size() == 1;
    if (xi.is_finite()) {
        // S_k for finite k equals S_1[S_{k-1}]; S_1 = {F : #F <= min F}.
        if (xi.finite_value() == 1) return static_cast<int>(f.size()) <= f.front();
        return member_compose(FamilySpec::S(Ordinal(1)), FamilySpec::S(xi.predecessor()), f);
    }
    if (xi.is_successor())
        return member_compose(FamilySpec::S(Ordinal(1)), FamilySpec::S(xi.predecessor()), f);
    // Limit case: F in S_xi iff F in S_{xi_n} for some n <= min F.
    for (int n = 1; n <= f.front(); ++n) {
        Ordinal xin = fundamental_sequence(xi, static_cast<std::uint64_t>(n));
        if (member_impl(FamilySpec::S(xin).str(), FamilySpec::S(xin), f)) return true;
    }
    return false;
}

bool FamilyEngine::member_compose(const FamilySpec& outer, const FamilySpec& inner, const FinSet& f) {
    if (f.empty()) return true;
    // Split f into successive nonempty blocks, each in `inner`, whose minima
    // form a member of `outer`.  Cut positions explored left to right with
    // the smallest first block tried first.
    size_t k = f.size();
    std::vector<size_t> cuts;  // block start indices, cuts[0] == 0
    std::string inner_key = inner.str();
    std::string outer_key = outer.str();

    std::vector<int> minima;
    std::function<bool(size_t)> go = [&](size_t start) -> bool {
        if (start == k) return member_impl(outer_key, outer, minima);
        for (size_t end = start + 1; end <= k; ++end) {
            FinSet block(f.begin() + static_cast<long>(start), f.begin() + static_cast<long>(end));
            if (!member_impl(inner_key, inner, block)) continue;
            minima.push_back(f[start]);
            bool ok = go(end);
            minima.pop_back();
            if (ok) return true;
        }
        return false;
    };
    return go(0);
}

bool FamilyEngine::is_maximal(const FamilySpec& spec, const FinSet& f) {
    if (!member(spec, f)) throw PreconditionError("is_maximal requires a member of the family");
    if (f.empty()) return false;
    FinSet g = f;
    g.push_back(f.back() + 1);
    return !member(spec, g);
}

bool FamilyEngine::admissible(const FamilySpec& spec, const std::vector<Vec00>& blocks) {
    if (blocks.empty()) throw PreconditionError("admissible requires nonempty block list");
    FinSet minima;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].is_zero()) throw PreconditionError("admissible requires nonzero blocks");
        if (i > 0 && !blocks_successive(blocks[i - 1], blocks[i])) return false;
        minima.push_back(blocks[i].min_support());
    }
    return member(spec, minima);
}

std::vector<FinSet> FamilyEngine::enumerate_restricted(const FamilySpec& spec, int n_max, int cap) {
    if (n_max > cap) throw ResourceCapError("enumerate_restricted: N exceeds safety cap");
    std::vector<FinSet> out;
    out.push_back({});
    FinSet cur;
    // DFS in increasing last element; since the families are spreading, once
    // some extension by k succeeds all larger k succeed too, but we still test
    // each (memoized) to stay faithful to arbitrary composed specs.
    std::function<void(int)> go = [&](int from) {
        for (int k = from; k <= n_max; ++k) {
            cur.push_back(k);
            if (member(spec, cur)) {
                out.push_back(cur);
                go(k + 1);
            }
            cur.pop_back();
        }
    };
    go(1);
    std::sort(out.begin(), out.end());
    return out;
}

void FinTree::insert_with_prefixes(const Node& n) {
    for (size_t len = 1; len <= n.size(); ++len)
        nodes_.insert(Node(n.begin(), n.begin() + static_cast<long>(len)));
}

int tree_order(const FinTree& t) {
    std::set<FinTree::Node> cur = t.nodes();
    int alpha = 0;
    while (!cur.empty()) {
        std::set<FinTree::Node> next;
        for (const auto& n : cur) {
            if (n.size() <= 1) continue;
            FinTree::Node parent(n.begin(), n.end() - 1);
            next.insert(parent);
        }
        // D keeps exactly the nodes having an extension in the current tree;
        // the parents collected above are those nodes (prefix-closedness).
        cur = std::move(next);
        ++alpha;
    }
    return alpha;
}

FinTree family_to_tree(const std::vector<FinSet>& family) {
    FinTree t;
    for (const auto& f : family)
        if (!f.empty()) t.insert_with_prefixes(f);
    return t;
}

std::vector<FinSet> tree_to_family(const FinTree& t) {
    std::set<FinSet> out;
    out.insert({});
    for (const auto& n : t.nodes()) {
        // all subsets of the node's range
        size_t k = n.size();
        for (std::uint64_t mask = 1; mask < (1ULL << k); ++mask) {
            FinSet sub;
            for (size_t i = 0; i < k; ++i)
                if (mask & (1ULL << i)) sub.push_back(n[i]);
            out.insert(sub);
        }
    }
    return std::vector<FinSet>(out.begin(), out.end());
}

}  // namespace tslab
