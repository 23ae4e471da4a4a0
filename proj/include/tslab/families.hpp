#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tslab/linspace.hpp"
#include "tslab/ordinal.hpp"

namespace tslab {

// Strictly increasing list of naturals >= 1; may be empty.
using FinSet = std::vector<int>;

bool finset_valid(const FinSet& f);
std::string finset_str(const FinSet& f);
FinSet finset_parse(const std::string& s);   // "3,4,5" or "{3,4,5}"

// A regular family of finite subsets of N, lazily evaluated:
//   A(n), S(xi), Compose(outer, inner) = outer[inner], Restrict(base, N).
// Text syntax: "A(5)", "S(1)", "S(w*1+2)", "S(2)[S(1)]", "S(2)|N=20".
class FamilySpec {
  public:
    enum class Kind { A, S, Compose, Restrict };

    static FamilySpec A(std::uint64_t n);
    static FamilySpec S(const Ordinal& xi);
    static FamilySpec Compose(FamilySpec outer, FamilySpec inner);
    static FamilySpec Restrict(FamilySpec base, int cap);

    Kind kind() const { return kind_; }
    std::uint64_t a_n() const { return n_; }
    const Ordinal& xi() const { return xi_; }
    const FamilySpec& outer() const { return *outer_; }
    const FamilySpec& inner() const { return *inner_; }
    int cap() const { return cap_; }

    std::string str() const;
    static FamilySpec parse(const std::string& text);

  private:
    Kind kind_ = Kind::A;
    std::uint64_t n_ = 0;
    Ordinal xi_;
    std::shared_ptr<const FamilySpec> outer_, inner_;
    int cap_ = 0;
};

// Memoization shared across membership queries; keyed by (family key, set).
class FamilyEngine {
  public:
    bool member(const FamilySpec& spec, const FinSet& f);

    // Gasparis criterion: F maximal iff F + {maxF + 1} leaves the family.
    // Requires member(spec, f); the empty set is never maximal.
    bool is_maximal(const FamilySpec& spec, const FinSet& f);

    // Supports successive and the set of minima belongs to spec.
    bool admissible(const FamilySpec& spec, const std::vector<Vec00>& blocks);

    // All members with elements <= n_max, in lexicographic order (as the
    // sorted element lists compare).  n_max is checked against `cap`.
    std::vector<FinSet> enumerate_restricted(const FamilySpec& spec, int n_max, int cap = 30);

  private:
    std::map<std::pair<std::string, FinSet>, bool> memo_;
    bool member_impl(const std::string& key, const FamilySpec& spec, const FinSet& f);
    bool member_s(const Ordinal& xi, const FinSet& f);
    bool member_compose(const FamilySpec& outer, const FamilySpec& inner, const FinSet& f);
};

// Finite prefix-closed set of nonempty strictly increasing sequences.
class FinTree {
  public:
    using Node = std::vector<int>;

    void insert_with_prefixes(const Node& n);
    bool contains(const Node& n) const { return nodes_.count(n) > 0; }
    size_t size() const { return nodes_.size(); }
    const std::set<Node>& nodes() const { return nodes_; }

  private:
    std::set<Node> nodes_;
};

// Least alpha with D^alpha(T) empty, where D keeps nodes extendable in T.
int tree_order(const FinTree& t);

// T_F: all nonempty initial segments of the increasing enumerations.
FinTree family_to_tree(const std::vector<FinSet>& family);

// F_T: the hereditary family of subsets of node ranges (includes the empty set).
std::vector<FinSet> tree_to_family(const FinTree& t);

}  // namespace tslab
