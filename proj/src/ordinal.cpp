#include "tslab/ordinal.hpp"

#include <algorithm>
#include <sstream>

namespace tslab {

Ordinal::Ordinal(std::uint64_t n) {
    if (n > 0) terms_.push_back({0, n});
}

Ordinal Ordinal::omega() { return omega_pow(1, 1); }

Ordinal Ordinal::omega_pow(std::uint32_t k, std::uint64_t c) {
    Ordinal o;
    if (c > 0) o.terms_.push_back({k, c});
    return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
    Ordinal o;
    o.terms_ = std::move(terms);
    o.validate();
    return o;
}

void Ordinal::validate() const {
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coefficient == 0) throw PreconditionError("ordinal term with zero coefficient");
        if (i > 0 && terms_[i - 1].exponent <= terms_[i].exponent)
            throw PreconditionError("ordinal exponents not strictly decreasing");
    }
}

bool Ordinal::is_finite() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0);
}

std::uint64_t Ordinal::finite_value() const {
    if (!is_finite()) throw PreconditionError("ordinal is not finite");
    return terms_.empty() ? 0 : terms_[0].coefficient;
}

bool Ordinal::is_limit() const {
    return !terms_.empty() && terms_.back().exponent >= 1;
}

bool Ordinal::is_successor() const {
    return !terms_.empty() && terms_.back().exponent == 0;
}

Ordinal Ordinal::predecessor() const {
    if (!is_successor()) throw PreconditionError("predecessor of non-successor");
    Ordinal o = *this;
    if (o.terms_.back().coefficient == 1)
        o.terms_.pop_back();
    else
        o.terms_.back().coefficient -= 1;
    return o;
}

Ordinal Ordinal::plus_finite(std::uint64_t n) const {
    if (n == 0) return *this;
    Ordinal o = *this;
    if (!o.terms_.empty() && o.terms_.back().exponent == 0)
        o.terms_.back().coefficient += n;
    else
        o.terms_.push_back({0, n});
    return o;
}

int Ordinal::compare(const Ordinal& o) const {
    size_t n = std::min(terms_.size(), o.terms_.size());
    for (size_t i = 0; i < n; ++i) {
        if (terms_[i].exponent != o.terms_[i].exponent)
            return terms_[i].exponent < o.terms_[i].exponent ? -1 : 1;
        if (terms_[i].coefficient != o.terms_[i].coefficient)
            return terms_[i].coefficient < o.terms_[i].coefficient ? -1 : 1;
    }
    if (terms_.size() != o.terms_.size()) return terms_.size() < o.terms_.size() ? -1 : 1;
    return 0;
}

std::string Ordinal::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << "+";
        first = false;
        if (t.exponent == 0) {
            os << t.coefficient;
        } else if (t.exponent == 1) {
            os << "w*" << t.coefficient;
        } else {
            os << "w^" << t.exponent << "*" << t.coefficient;
        }
    }
    return os.str();
}

namespace {

std::uint64_t parse_uint(const std::string& s, size_t& pos) {
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw UsageError("expected number in ordinal at position " + std::to_string(start));
    return std::stoull(s.substr(start, pos - start));
}

}  // namespace

Ordinal Ordinal::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw UsageError("empty ordinal literal");
    if (s == "0") return Ordinal();

    std::vector<Term> terms;
    size_t pos = 0;
    while (true) {
        Term t{0, 1};
        if (s[pos] == 'w') {
            ++pos;
            t.exponent = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                t.exponent = static_cast<std::uint32_t>(parse_uint(s, pos));
            }
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                t.coefficient = parse_uint(s, pos);
            }
        } else {
            t.exponent = 0;
            t.coefficient = parse_uint(s, pos);
        }
        terms.push_back(t);
        if (pos == s.size()) break;
        if (s[pos] != '+') throw UsageError("bad ordinal literal: " + text);
        ++pos;
        if (pos == s.size()) throw UsageError("trailing '+' in ordinal literal: " + text);
    }
    return from_terms(std::move(terms));
}

Ordinal fundamental_sequence(const Ordinal& xi, std::uint64_t n) {
    if (n < 1) throw PreconditionError("fundamental_sequence requires n >= 1");
    if (!xi.is_limit()) throw PreconditionError("fundamental_sequence requires a limit ordinal");
    std::vector<Ordinal::Term> terms = xi.terms();
    Ordinal::Term last = terms.back();
    terms.pop_back();
    // xi = beta + w^k*c  ->  beta + w^k*(c-1) + w^(k-1)*n
    if (last.coefficient > 1) terms.push_back({last.exponent, last.coefficient - 1});
    terms.push_back({last.exponent - 1, n});
    return Ordinal::from_terms(std::move(terms));
}

}  // namespace tslab
