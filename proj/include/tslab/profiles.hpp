#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tslab/rational.hpp"

namespace tslab {

// Exact power of two with a big exponent; the paper-scale sequences are all
// powers of two and their exponents are what stays tractable.
struct Pow2 {
    BigInt exponent;
    bool materializable(unsigned max_bits = 1u << 20) const { return exponent <= max_bits; }
    BigInt materialize(unsigned max_bits = 1u << 20) const;
};

// The sequences (m_j), (n_j), (s_j) with the derived constants
// c0 = sum m_j^-2 and c1 = (sum c0^n)^(1/2), i.e. c1^2 = 1/(1-c0).
//
// kind "paper": m_1 = 2^5, m_{j+1} = m_j^5, n_1 = 2^6, n_{j+1} = (2 n_j)^{s_j}
// with 2^{s_j} = m_{j+1}^3; everything lazily materialized from exponents.
//
// kind "mini": explicit finite lists; the finite index horizon makes norm
// suprema exactly computable.  Minis declare which growth facts they waive.
class ParameterProfile {
  public:
    enum class Kind { Paper, Mini };

    static ParameterProfile paper(int horizon = 6);
    static ParameterProfile mini(std::string name, std::vector<BigInt> m, std::vector<BigInt> n,
                                 std::vector<int> s = {}, std::vector<std::string> waived = {});

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }
    bool is_paper() const { return kind_ == Kind::Paper; }

    // Largest index j with m_j, n_j defined (mini) or materialization horizon (paper).
    int horizon() const { return horizon_; }
    bool has_index(int j) const;

    Rat m(int j) const;
    Rat n(int j) const;
    BigInt n_int(int j) const;
    BigInt m_int(int j) const;
    int s(int j) const;

    Pow2 m_pow2(int j) const;  // paper profile only
    Pow2 n_pow2(int j) const;

    // c0 as an exact rational (mini) or a truncation with certified error
    // < 2^-64 (paper); c0_upper includes the tail bound.
    Rat c0() const { return c0_; }
    Rat c0_upper() const { return c0_upper_; }
    // Exact square of c1 computed from c0_upper, so inequalities asserted
    // against it are conservative.
    Rat c1_sq() const { return c1_sq_; }

    const std::vector<std::string>& waived() const { return waived_; }
    bool waives(const std::string& fact) const;

    // Named growth facts a profile may satisfy; mini profiles must waive the
    // ones they fail.  Checked for paper profiles in exponent arithmetic.
    //   "growth_260m4":  260 m_{2j}^4 <= n_{2j-1} for applicable j >= 2
    bool check_growth_260m4(int j) const;

    void validate() const;  // throws PreconditionError on an invalid profile

  private:
    std::string name_;
    Kind kind_ = Kind::Mini;
    int horizon_ = 0;
    std::vector<BigInt> m_, n_;
    std::vector<int> s_;
    std::vector<std::string> waived_;
    Rat c0_, c0_upper_, c1_sq_;
    void compute_constants();
};

}  // namespace tslab
