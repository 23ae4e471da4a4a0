#include "tslab/profiles.hpp"

#include <algorithm>

namespace tslab {

namespace {

// Paper exponents: m_j = 2^(5^j), s_j = 3*5^(j+1),
// n_j: E_1 = 6, E_{j+1} = (E_j + 1) * s_j.
BigInt paper_m_exp(int j) {
    BigInt e = 1;
    for (int i = 0; i < j; ++i) e *= 5;
    return e;
}

BigInt paper_s(int j) {
    BigInt e = 3;
    for (int i = 0; i < j + 1; ++i) e *= 5;
    return e;
}

BigInt paper_n_exp(int j) {
    BigInt e = 6;
    for (int i = 1; i < j; ++i) e = (e + 1) * paper_s(i);
    return e;
}

}  // namespace

BigInt Pow2::materialize(unsigned max_bits) const {
    if (exponent < 0) throw PreconditionError("negative power of two exponent");
    if (exponent > max_bits) throw ResourceCapError("power of two too large to materialize");
    return BigInt(1) << static_cast<unsigned>(exponent);
}

ParameterProfile ParameterProfile::paper(int horizon) {
    ParameterProfile p;
    p.name_ = "paper";
    p.kind_ = Kind::Paper;
    p.horizon_ = horizon;
    p.compute_constants();
    p.validate();
    return p;
}

ParameterProfile ParameterProfile::mini(std::string name, std::vector<BigInt> m, std::vector<BigInt> n,
                                        std::vector<int> s, std::vector<std::string> waived) {
    ParameterProfile p;
    p.name_ = std::move(name);
    p.kind_ = Kind::Mini;
    p.m_ = std::move(m);
    p.n_ = std::move(n);
    p.s_ = std::move(s);
    p.waived_ = std::move(waived);
    p.horizon_ = static_cast<int>(std::min(p.m_.size(), p.n_.size()));
    p.compute_constants();
    p.validate();
    return p;
}

bool ParameterProfile::has_index(int j) const {
    if (j < 1) return false;
    if (is_paper()) return true;
    return j <= horizon_;
}

BigInt ParameterProfile::m_int(int j) const {
    if (j < 1) throw PreconditionError("index must be >= 1");
    if (is_paper()) return m_pow2(j).materialize();
    if (j > horizon_) throw PreconditionError("profile " + name_ + " has no m_" + std::to_string(j));
    return m_[static_cast<size_t>(j - 1)];
}

BigInt ParameterProfile::n_int(int j) const {
    if (j < 1) throw PreconditionError("index must be >= 1");
    if (is_paper()) return n_pow2(j).materialize();
    if (j > horizon_) throw PreconditionError("profile " + name_ + " has no n_" + std::to_string(j));
    return n_[static_cast<size_t>(j - 1)];
}

Rat ParameterProfile::m(int j) const { return Rat(m_int(j)); }
Rat ParameterProfile::n(int j) const { return Rat(n_int(j)); }

int ParameterProfile::s(int j) const {
    if (is_paper()) {
        BigInt v = paper_s(j);
        if (v > 1'000'000'000) throw ResourceCapError("paper s_j too large for int");
        return static_cast<int>(v);
    }
    if (j >= 1 && j <= static_cast<int>(s_.size())) return s_[static_cast<size_t>(j - 1)];
    throw PreconditionError("profile " + name_ + " has no s_" + std::to_string(j));
}

Pow2 ParameterProfile::m_pow2(int j) const {
    if (!is_paper()) throw PreconditionError("m_pow2 is paper-profile only");
    return Pow2{paper_m_exp(j)};
}

Pow2 ParameterProfile::n_pow2(int j) const {
    if (!is_paper()) throw PreconditionError("n_pow2 is paper-profile only");
    return Pow2{paper_n_exp(j)};
}

void ParameterProfile::compute_constants() {
    if (is_paper()) {
        // Sum m_j^-2 = sum 2^(-2*5^j) until the term drops below 2^-70;
        // remaining tail < 2 * next term < 2^-64 certified.
        Rat sum(0);
        int j = 1;
        Rat term;
        while (true) {
            BigInt e = 2 * paper_m_exp(j);
            if (e > 70) break;
            term = Rat(1, BigInt(1) << static_cast<unsigned>(e));
            sum += term;
            ++j;
        }
        BigInt e_next = 2 * paper_m_exp(j);
        Rat tail_bound = e_next > 512 ? Rat(1, BigInt(1) << 512) * 2 : Rat(2, BigInt(1) << static_cast<unsigned>(e_next));
        c0_ = sum;
        c0_upper_ = sum + tail_bound;
    } else {
        Rat sum(0);
        for (const auto& mj : m_) sum += Rat(1, mj * mj);
        c0_ = sum;
        c0_upper_ = sum;
    }
    if (c0_upper_ >= 1) {
        c1_sq_ = 0;  // flagged invalid in validate()
    } else {
        c1_sq_ = Rat(1) / (Rat(1) - c0_upper_);
    }
}

void ParameterProfile::validate() const {
    if (is_paper()) {
        if (c0_upper_ >= 1) throw PreconditionError("paper profile with c0 >= 1");
        return;
    }
    if (m_.empty() || n_.empty()) throw PreconditionError("mini profile needs nonempty m, n");
    if (m_[0] < 2) throw PreconditionError("m_1 must be >= 2");
    for (size_t i = 0; i < m_.size(); ++i) {
        if (i > 0 && m_[i] <= m_[i - 1]) throw PreconditionError("m must be strictly increasing");
    }
    for (size_t i = 0; i < n_.size(); ++i) {
        if (n_[i] < 2 || n_[i] % 2 != 0) throw PreconditionError("n_j must be positive even");
        if (i > 0 && n_[i] <= n_[i - 1]) throw PreconditionError("n must be strictly increasing");
    }
    if (c0_upper_ >= 1) throw PreconditionError("profile must satisfy c0 = sum m_j^-2 < 1");
    // Growth facts that fail must be declared.
    for (int j = 2; 2 * j <= horizon_; ++j) {
        if (!check_growth_260m4(j) && !waives("growth_260m4"))
            throw PreconditionError("profile " + name_ + " fails 260*m_{2j}^4 <= n_{2j-1} at j=" +
                                    std::to_string(j) + " and does not waive growth_260m4");
    }
}

bool ParameterProfile::waives(const std::string& fact) const {
    return std::find(waived_.begin(), waived_.end(), fact) != waived_.end();
}

bool ParameterProfile::check_growth_260m4(int j) const {
    if (j < 2) return true;
    if (is_paper()) {
        // 260 * 2^(4*5^(2j)) <= 2^E  iff  E - 4*5^(2j) >= 9  (2^9 = 512 >= 260,
        // and 2^8 = 256 < 260 so the exponent gap must be at least 9).
        BigInt gap = paper_n_exp(2 * j - 1) - 4 * paper_m_exp(2 * j);
        return gap >= 9;
    }
    BigInt m2j = m_int(2 * j);
    BigInt lhs = 260 * m2j * m2j * m2j * m2j;
    return lhs <= n_int(2 * j - 1);
}

}  // namespace tslab
