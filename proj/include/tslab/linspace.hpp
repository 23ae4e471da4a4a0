#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tslab/rational.hpp"

namespace tslab {

constexpr int kNoBound = std::numeric_limits<int>::max();

// Interval of naturals [lo, hi]; hi == kNoBound means unbounded above.
struct Interval {
    int lo = 1;
    int hi = kNoBound;
    bool contains(int k) const { return k >= lo && (hi == kNoBound || k <= hi); }
    bool bounded() const { return hi != kNoBound; }
    std::string str() const;
};

// Finitely supported vector with exact rational entries, coordinates >= 1.
// No zero entries are ever stored.
class Vec00 {
  public:
    Vec00() = default;

    static Vec00 unit(int i, const Rat& c = Rat(1));

    const Rat& at(int i) const;          // 0 when absent
    void set(int i, const Rat& c);       // erases on zero
    void add(int i, const Rat& c);

    bool is_zero() const { return entries_.empty(); }
    size_t support_size() const { return entries_.size(); }
    std::vector<int> support() const;
    int min_support() const;             // requires nonzero
    int max_support() const;
    Interval range() const;              // [minsupp, maxsupp]

    Vec00 restrict_to(const Interval& e) const;
    Vec00 operator+(const Vec00& o) const;
    Vec00 operator-(const Vec00& o) const;
    Vec00 scaled(const Rat& c) const;
    Vec00 negated() const { return scaled(Rat(-1)); }

    Rat dot(const Vec00& o) const;       // sum over common support
    Rat linfty() const;
    Rat l1() const;

    bool operator==(const Vec00& o) const { return entries_ == o.entries_; }
    bool operator!=(const Vec00& o) const { return entries_ != o.entries_; }
    bool operator<(const Vec00& o) const { return entries_ < o.entries_; }

    const std::map<int, Rat>& entries() const { return entries_; }

    std::string str() const;             // "[(i,p/q),...]"

  private:
    std::map<int, Rat> entries_;
};

// x < y as blocks: maxsupp x < minsupp y (both nonzero).
bool blocks_successive(const Vec00& x, const Vec00& y);

enum class FuncTag { Ground, TypeI, TypeII, TypeIII };
enum class GroundKind { G0, G1, Gsp, Gl2, Cj0, Zero };

// A finitely supported functional with its classification tag.
//
// index/odd_squared carry the weight bookkeeping: a TypeI functional with
// odd_squared=false arose from an (A_{n_j}, m_j^-1)-operation with j=index
// (weight m_j); with odd_squared=true it is a G1-layer element of index j
// (weight m_{2j-1}^2).  ind_set lists the index set of Gsp/Gl2 elements.
struct Func {
    Vec00 v;
    FuncTag tag = FuncTag::Ground;
    GroundKind gkind = GroundKind::G0;
    int index = 0;
    bool odd_squared = false;
    std::vector<int> ind_set;
    std::string analysis_hash;           // opaque digest of an attached tree analysis

    static Func ground0(int i, int sign = 1);
    static Func g1(const Vec00& v, int j);
    static Func type1(const Vec00& v, int j);

    Rat operator()(const Vec00& x) const { return v.dot(x); }

    bool operator==(const Func& o) const;
    bool operator<(const Func& o) const;
};

Rat apply(const Func& f, const Vec00& x);

// Interval restriction.  Tags are preserved; for Gsp elements the index set
// is recomputed by the caller who knows the component split (see norming).
Func restrict_func(const Func& f, const Interval& e);
Vec00 restrict_vec(const Vec00& x, const Interval& e);

// Canonical, injective text encoding: sorted support with rationals in lowest
// terms, then the tag block, then the optional analysis hash.  Round-trips
// bit-exactly through parse_func.
std::string canonical_serialize(const Func& f);
Func parse_func(const std::string& s);

std::string serialize_prefix(const std::vector<Func>& prefix);  // ";"-joined
std::vector<Func> parse_prefix(const std::string& s);

}  // namespace tslab
