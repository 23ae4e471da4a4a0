#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tslab/rational.hpp"

namespace tslab {

// Ordinals below w^w in Cantor normal form: sum of w^exponent * coefficient
// terms with strictly decreasing exponents and coefficients >= 1.
// Text syntax used by the CLI and configs: "w^2*3+w*1+4".
class Ordinal {
  public:
    struct Term {
        std::uint32_t exponent;
        std::uint64_t coefficient;
        bool operator==(const Term& o) const {
            return exponent == o.exponent && coefficient == o.coefficient;
        }
    };

    Ordinal() = default;                      // zero
    explicit Ordinal(std::uint64_t n);        // finite ordinal
    static Ordinal omega();                   // w
    static Ordinal omega_pow(std::uint32_t k, std::uint64_t c = 1);

    static Ordinal from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_finite() const;
    std::uint64_t finite_value() const;       // requires is_finite()
    bool is_limit() const;                    // nonzero with last exponent >= 1
    bool is_successor() const;

    Ordinal predecessor() const;              // requires is_successor()
    Ordinal plus_finite(std::uint64_t n) const;

    int compare(const Ordinal& o) const;      // -1, 0, 1
    bool operator==(const Ordinal& o) const { return compare(o) == 0; }
    bool operator!=(const Ordinal& o) const { return compare(o) != 0; }
    bool operator<(const Ordinal& o) const { return compare(o) < 0; }
    bool operator<=(const Ordinal& o) const { return compare(o) <= 0; }

    std::string str() const;
    static Ordinal parse(const std::string& text);

  private:
    std::vector<Term> terms_;                 // highest exponent first
    void validate() const;
};

// Canonical fundamental sequence for limit ordinals below w^w:
// if xi = beta + w^k * c (k >= 1) then xi_n = beta + w^k*(c-1) + w^(k-1)*n.
// Rejects 0 and successors; requires n >= 1.
Ordinal fundamental_sequence(const Ordinal& xi, std::uint64_t n);

}  // namespace tslab
