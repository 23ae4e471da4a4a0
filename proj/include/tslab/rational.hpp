#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tslab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// floor(sqrt(n)) for n >= 0.
BigInt isqrt(const BigInt& n);

bool is_perfect_square(const BigInt& n, BigInt& root);

// Rational bracket of sqrt(s) with denominator-controlled error <= 2^-bits.
Rat sqrt_upper(const Rat& s, unsigned bits = 96);
Rat sqrt_lower(const Rat& s, unsigned bits = 96);

// A nonnegative value that is either an exact rational or sqrt of a rational.
// Norm layers produce both kinds; comparisons go through exact squares.
struct ExactValue {
    Rat square;        // always the exact square of the value
    bool rational;     // true when the value itself is rational
    Rat value;         // meaningful only when rational

    ExactValue() : square(0), rational(true), value(0) {}

    static ExactValue of_rational(const Rat& v);
    static ExactValue of_sqrt(const Rat& square);

    bool operator==(const ExactValue& o) const { return square == o.square; }
    bool operator<(const ExactValue& o) const { return square < o.square; }
    bool operator<=(const ExactValue& o) const { return square <= o.square; }

    ExactValue scaled(const Rat& c) const;   // value * |c|

    // Directed rational bounds on the value.
    Rat upper_rat(unsigned bits = 96) const;
    Rat lower_rat(unsigned bits = 96) const;

    double to_double() const;
    std::string str() const;                 // exact rendering: "p/q" or "sqrt(p/q)"
    std::string decimal(int digits = 12) const;
};

inline ExactValue ev_max(const ExactValue& a, const ExactValue& b) { return a < b ? b : a; }

std::string rat_str(const Rat& r);
Rat rat_parse(const std::string& s);

// 64-bit FNV-1a, used for registry key hashes and canonical digests.
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t v);

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tslab
