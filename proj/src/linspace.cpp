#include "tslab/linspace.hpp"

#include <algorithm>
#include <sstream>

namespace tslab {

std::string Interval::str() const {
    std::ostringstream os;
    os << "[" << lo << ",";
    if (hi == kNoBound)
        os << "inf";
    else
        os << hi;
    os << "]";
    return os.str();
}

Vec00 Vec00::unit(int i, const Rat& c) {
    Vec00 v;
    v.set(i, c);
    return v;
}

const Rat& Vec00::at(int i) const {
    static const Rat zero(0);
    auto it = entries_.find(i);
    return it == entries_.end() ? zero : it->second;
}

void Vec00::set(int i, const Rat& c) {
    if (i < 1) throw PreconditionError("coordinates are 1-based");
    if (c == 0)
        entries_.erase(i);
    else
        entries_[i] = c;
}

void Vec00::add(int i, const Rat& c) { set(i, at(i) + c); }

std::vector<int> Vec00::support() const {
    std::vector<int> s;
    s.reserve(entries_.size());
    for (const auto& [i, _] : entries_) s.push_back(i);
    return s;
}

int Vec00::min_support() const {
    if (entries_.empty()) throw PreconditionError("min_support of zero vector");
    return entries_.begin()->first;
}

int Vec00::max_support() const {
    if (entries_.empty()) throw PreconditionError("max_support of zero vector");
    return entries_.rbegin()->first;
}

Interval Vec00::range() const { return Interval{min_support(), max_support()}; }

Vec00 Vec00::restrict_to(const Interval& e) const {
    Vec00 out;
    for (const auto& [i, c] : entries_)
        if (e.contains(i)) out.entries_[i] = c;
    return out;
}

Vec00 Vec00::operator+(const Vec00& o) const {
    Vec00 out = *this;
    for (const auto& [i, c] : o.entries_) out.add(i, c);
    return out;
}

Vec00 Vec00::operator-(const Vec00& o) const {
    Vec00 out = *this;
    for (const auto& [i, c] : o.entries_) out.add(i, -c);
    return out;
}

Vec00 Vec00::scaled(const Rat& c) const {
    Vec00 out;
    if (c == 0) return out;
    for (const auto& [i, v] : entries_) out.entries_[i] = v * c;
    return out;
}

Rat Vec00::dot(const Vec00& o) const {
    // Iterate over the smaller support.
    const Vec00& a = entries_.size() <= o.entries_.size() ? *this : o;
    const Vec00& b = entries_.size() <= o.entries_.size() ? o : *this;
    Rat s(0);
    for (const auto& [i, c] : a.entries_) {
        auto it = b.entries_.find(i);
        if (it != b.entries_.end()) s += c * it->second;
    }
    return s;
}

Rat Vec00::linfty() const {
    Rat m(0);
    for (const auto& [_, c] : entries_) m = std::max(m, rat_abs(c));
    return m;
}

Rat Vec00::l1() const {
    Rat s(0);
    for (const auto& [_, c] : entries_) s += rat_abs(c);
    return s;
}

std::string Vec00::str() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& [i, c] : entries_) {
        if (!first) os << ",";
        first = false;
        os << "(" << i << "," << rat_str(c);
        if (den(c) == 1) os << "/1";
        os << ")";
    }
    os << "]";
    return os.str();
}

bool blocks_successive(const Vec00& x, const Vec00& y) {
    if (x.is_zero() || y.is_zero()) return false;
    return x.max_support() < y.min_support();
}

Func Func::ground0(int i, int sign) {
    Func f;
    f.v = Vec00::unit(i, Rat(sign));
    f.tag = FuncTag::Ground;
    f.gkind = GroundKind::G0;
    return f;
}

Func Func::g1(const Vec00& v, int j) {
    Func f;
    f.v = v;
    f.tag = FuncTag::TypeI;
    f.index = j;
    f.odd_squared = true;
    return f;
}

Func Func::type1(const Vec00& v, int j) {
    Func f;
    f.v = v;
    f.tag = FuncTag::TypeI;
    f.index = j;
    f.odd_squared = false;
    return f;
}

bool Func::operator==(const Func& o) const {
    return v == o.v && tag == o.tag && gkind == o.gkind && index == o.index &&
           odd_squared == o.odd_squared && ind_set == o.ind_set && analysis_hash == o.analysis_hash;
}

bool Func::operator<(const Func& o) const {
    return canonical_serialize(*this) < canonical_serialize(o);
}

Rat apply(const Func& f, const Vec00& x) { return f.v.dot(x); }

Vec00 restrict_vec(const Vec00& x, const Interval& e) { return x.restrict_to(e); }

Func restrict_func(const Func& f, const Interval& e) {
    Func out = f;
    out.v = f.v.restrict_to(e);
    out.analysis_hash.clear();
    return out;
}

namespace {

const char* tag_name(FuncTag t) {
    switch (t) {
        case FuncTag::Ground: return "G";
        case FuncTag::TypeI: return "T1";
        case FuncTag::TypeII: return "T2";
        case FuncTag::TypeIII: return "T3";
    }
    return "?";
}

const char* gkind_name(GroundKind k) {
    switch (k) {
        case GroundKind::G0: return "G0";
        case GroundKind::G1: return "G1";
        case GroundKind::Gsp: return "GSP";
        case GroundKind::Gl2: return "GL2";
        case GroundKind::Cj0: return "C";
        case GroundKind::Zero: return "Z";
    }
    return "?";
}

}  // namespace

std::string canonical_serialize(const Func& f) {
    std::ostringstream os;
    os << f.v.str() << "|" << tag_name(f.tag);
    if (f.tag == FuncTag::Ground) os << ":" << gkind_name(f.gkind);
    os << ":" << f.index << ":" << (f.odd_squared ? 1 : 0) << ":{";
    bool first = true;
    for (int i : f.ind_set) {
        if (!first) os << ",";
        first = false;
        os << i;
    }
    os << "}";
    if (!f.analysis_hash.empty()) os << "|h:" << f.analysis_hash;
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }
    char take() {
        if (pos >= s.size()) throw UsageError("truncated functional literal");
        return s[pos++];
    }
    void expect(char c) {
        if (take() != c) throw UsageError("bad functional literal near position " + std::to_string(pos));
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string until(const std::string& stops) {
        size_t start = pos;
        while (pos < s.size() && stops.find(s[pos]) == std::string::npos) ++pos;
        return s.substr(start, pos - start);
    }
};

}  // namespace

Func parse_func(const std::string& s) {
    Cursor c{s};
    Func f;
    c.expect('[');
    if (!c.eat(']')) {
        while (true) {
            c.expect('(');
            int i = std::stoi(c.until(","));
            c.expect(',');
            Rat val = rat_parse(c.until(")"));
            c.expect(')');
            f.v.set(i, val);
            if (c.eat(']')) break;
            c.expect(',');
        }
    }
    c.expect('|');
    std::string tag = c.until(":");
    c.expect(':');
    if (tag == "G") {
        f.tag = FuncTag::Ground;
        std::string gk = c.until(":");
        c.expect(':');
        if (gk == "G0") f.gkind = GroundKind::G0;
        else if (gk == "G1") f.gkind = GroundKind::G1;
        else if (gk == "GSP") f.gkind = GroundKind::Gsp;
        else if (gk == "GL2") f.gkind = GroundKind::Gl2;
        else if (gk == "C") f.gkind = GroundKind::Cj0;
        else if (gk == "Z") f.gkind = GroundKind::Zero;
        else throw UsageError("bad ground kind: " + gk);
    } else if (tag == "T1") {
        f.tag = FuncTag::TypeI;
    } else if (tag == "T2") {
        f.tag = FuncTag::TypeII;
    } else if (tag == "T3") {
        f.tag = FuncTag::TypeIII;
    } else {
        throw UsageError("bad functional tag: " + tag);
    }
    f.index = std::stoi(c.until(":"));
    c.expect(':');
    f.odd_squared = c.take() == '1';
    c.expect(':');
    c.expect('{');
    std::string inds = c.until("}");
    c.expect('}');
    if (!inds.empty()) {
        std::istringstream is(inds);
        std::string tok;
        while (std::getline(is, tok, ',')) f.ind_set.push_back(std::stoi(tok));
    }
    if (c.eat('|')) {
        c.expect('h');
        c.expect(':');
        f.analysis_hash = c.until(";");
    }
    return f;
}

std::string serialize_prefix(const std::vector<Func>& prefix) {
    std::ostringstream os;
    bool first = true;
    for (const auto& f : prefix) {
        if (!first) os << ";";
        first = false;
        os << canonical_serialize(f);
    }
    return os.str();
}

std::vector<Func> parse_prefix(const std::string& s) {
    std::vector<Func> out;
    if (s.empty()) return out;
    size_t start = 0;
    while (true) {
        size_t semi = s.find(';', start);
        std::string piece = semi == std::string::npos ? s.substr(start) : s.substr(start, semi - start);
        out.push_back(parse_func(piece));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

}  // namespace tslab
