#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tslab/linspace.hpp"
#include "tslab/profiles.hpp"

namespace tslab {

struct SequenceStore;  // verified special/attractor sequences, defined in norming.hpp

// Partition of N into infinite sets Lambda_i via 2-adic valuation:
// Lambda_i = {k : 2^(i-1) exactly divides k}, so the t-th element of
// Lambda_i is 2^(i-1) * (2t - 1).  The quotient subset L keeps the
// even-position elements of every Lambda_i, so L meets each Lambda_i
// infinitely and the complement of L is infinite too.
struct LambdaPartition {
    static int class_of(int k);              // the unique i with k in Lambda_i
    static bool lambda_member(int i, int k) { return class_of(k) == i; }
    static int element(int i, int t);        // t-th smallest element of Lambda_i
    static bool l_member(int k);
    // Smallest element of Lambda_i that is > floor and (when in_l) lies in L.
    static int pick(int i, int floor, bool in_l);
};

// Allocate-on-first-use coding registries for the two coding functions.
//
// sigma1 maps special-sequence prefixes into M2 (= even naturals), strictly
// increasing along prefixes.  sigma maps Q_s prefixes into N2 (= even
// naturals) subject to the growth constraint
//   m_{2 sigma(f_1..f_d)}^(1/2) > max |f_i(e_l)|^-1 * maxsupp f_d.
//
// Keys are canonical serializations; the text persistence format is one
// "keyhash TAB canonical-key TAB value" line per entry, sorted by key.
class CodingRegistry {
  public:
    CodingRegistry();

    static bool m1_member(int j) { return j >= 1 && j % 2 == 1; }
    static bool m2_member(int j) { return j >= 2 && j % 2 == 0; }
    static bool n1_member(int j) { return j >= 1 && j % 2 == 1; }
    static bool n2_member(int j) { return j >= 2 && j % 2 == 0; }

    // Returns the stored value if the key exists; otherwise allocates the
    // smallest unused element of M2 exceeding the parent's value, stores and
    // logs it.  Validates that the prefix is a legal U-element.
    int sigma1_assign(const std::vector<Func>& prefix, const ParameterProfile& profile);
    std::optional<int> sigma1_lookup(const std::vector<Func>& prefix) const;

    // Allocates the smallest unused N2 element whose m-value satisfies the
    // growth constraint for this Q_s prefix.  Throws ResourceCapError when
    // the profile's finite horizon has no admissible unused value.
    int sigma_assign(const std::vector<Func>& prefix, const ParameterProfile& profile);
    std::optional<int> sigma_lookup(const std::vector<Func>& prefix) const;

    bool sigma_growth_ok(const std::vector<Func>& prefix, int value, const ParameterProfile& profile) const;

    const std::map<std::string, int>& sigma1_entries() const { return sigma1_; }
    const std::map<std::string, int>& sigma_entries() const { return sigma_; }
    const std::vector<std::string>& allocation_log() const { return log_; }

    // Internal stores of verified sequences built through this registry;
    // the norm engine treats them as the realizable odd-operation inputs.
    SequenceStore& store() { return *store_; }
    const SequenceStore& store() const { return *store_; }

    std::string canonical_dump() const;
    void save(const std::string& path) const;
    static CodingRegistry load(const std::string& path);

    bool dirty() const { return dirty_; }
    void clear_dirty() { dirty_ = false; }

  private:
    std::map<std::string, int> sigma1_;  // key: "s1|" + prefix serialization
    std::map<std::string, int> sigma_;   // key: "s|"  + prefix serialization
    std::vector<std::string> log_;
    std::shared_ptr<SequenceStore> store_;
    bool dirty_ = false;

    int smallest_unused_even(const std::map<std::string, int>& used, int above) const;
};

// Checks a prefix against the U-set conditions: f_1 < ... < f_d, each f_i a
// G1-layer element of index j_i with j_i strictly increasing.
void validate_u_prefix(const std::vector<Func>& prefix, const ParameterProfile& profile);

// Q_s: nonzero successive finitely supported rational functionals.
void validate_qs_prefix(const std::vector<Func>& prefix);

}  // namespace tslab
