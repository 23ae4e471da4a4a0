#include "tslab/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <sstream>

namespace tslab {

BigInt isqrt(const BigInt& n) {
    if (n < 0) throw PreconditionError("isqrt of negative");
    if (n == 0) return 0;
    BigInt x = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / 2 + 1);
    while (true) {
        BigInt y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    return x;
}

bool is_perfect_square(const BigInt& n, BigInt& root) {
    if (n < 0) return false;
    root = isqrt(n);
    return root * root == n;
}

Rat sqrt_upper(const Rat& s, unsigned bits) {
    if (s < 0) throw PreconditionError("sqrt of negative");
    if (s == 0) return Rat(0);
    // sqrt(p/q) = sqrt(p*q)/q; scale so the integer sqrt carries enough bits.
    BigInt p = num(s), q = den(s);
    BigInt scale = BigInt(1) << bits;
    BigInt t = p * q * scale * scale;
    BigInt r = isqrt(t) + 1;
    return Rat(r, q * scale);
}

Rat sqrt_lower(const Rat& s, unsigned bits) {
    if (s < 0) throw PreconditionError("sqrt of negative");
    if (s == 0) return Rat(0);
    BigInt p = num(s), q = den(s);
    BigInt scale = BigInt(1) << bits;
    BigInt t = p * q * scale * scale;
    BigInt r = isqrt(t);
    return Rat(r, q * scale);
}

ExactValue ExactValue::of_rational(const Rat& v) {
    ExactValue e;
    e.value = rat_abs(v);
    e.square = e.value * e.value;
    e.rational = true;
    return e;
}

ExactValue ExactValue::of_sqrt(const Rat& square) {
    if (square < 0) throw PreconditionError("ExactValue: negative square");
    // Collapse to rational when the square is a perfect square of rationals.
    BigInt rp, rq;
    if (is_perfect_square(num(square), rp) && is_perfect_square(den(square), rq)) {
        ExactValue e;
        e.square = square;
        e.rational = true;
        e.value = Rat(rp, rq);
        return e;
    }
    ExactValue e;
    e.square = square;
    e.rational = false;
    e.value = 0;
    return e;
}

ExactValue ExactValue::scaled(const Rat& c) const {
    Rat a = rat_abs(c);
    if (rational) return of_rational(value * a);
    return of_sqrt(square * a * a);
}

Rat ExactValue::upper_rat(unsigned bits) const {
    if (rational) return value;
    return sqrt_upper(square, bits);
}

Rat ExactValue::lower_rat(unsigned bits) const {
    if (rational) return value;
    return sqrt_lower(square, bits);
}

double ExactValue::to_double() const {
    using F = boost::multiprecision::cpp_bin_float_quad;
    if (rational) return static_cast<double>(F(value));
    return std::sqrt(static_cast<double>(F(square)));
}

std::string ExactValue::str() const {
    if (rational) return rat_str(value);
    return "sqrt(" + rat_str(square) + ")";
}

std::string ExactValue::decimal(int digits) const {
    using F = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>>;
    F v = rational ? F(value) : sqrt(F(square));
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << num(r);
    if (den(r) != 1) os << "/" << den(r);
    return os.str();
}

Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt p(s.substr(0, slash));
        BigInt q(s.substr(slash + 1));
        if (q == 0) throw UsageError("rational with zero denominator: " + s);
        return Rat(p, q);
    } catch (const std::exception&) {
        throw UsageError("bad rational literal: " + s);
    }
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace tslab
