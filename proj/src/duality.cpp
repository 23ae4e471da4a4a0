#include <algorithm>

#include "tslab/norm_engine.hpp"

namespace tslab {

// ---------------------------------------------------------------- l2 sum

int l2sum_block_of(int coordinate) {
    if (coordinate < 1) throw PreconditionError("coordinates are 1-based");
    int b = 1;
    long long end = 1;
    while (end < coordinate) {
        ++b;
        end += b;
    }
    return b;
}

std::pair<int, int> l2sum_block_range(int b) {
    long long start = static_cast<long long>(b - 1) * b / 2 + 1;
    long long end = start + b - 1;
    return {static_cast<int>(start), static_cast<int>(end)};
}

Rat l2sum_norm_sq(const Vec00& x) {
    Rat total(0);
    Rat blocksum(0);
    int cur = -1;
    for (const auto& [i, c] : x.entries()) {
        int b = l2sum_block_of(i);
        if (b != cur) {
            total += blocksum * blocksum;
            blocksum = 0;
            cur = b;
        }
        blocksum += rat_abs(c);
    }
    total += blocksum * blocksum;
    return total;
}

// ------------------------------------------------------------------- LP

namespace {

// Gaussian elimination solve of an n x n rational system; false if singular.
bool solve_square(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& out) {
    size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat factor = a[r][col] / a[col][col];
            for (size_t c2 = col; c2 < n; ++c2) a[r][c2] -= factor * a[col][c2];
            b[r] -= factor * b[col];
        }
    }
    out.assign(n, Rat(0));
    for (size_t i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
    return true;
}

}  // namespace

std::optional<std::pair<Rat, std::vector<Rat>>> lp_max(const std::vector<Rat>& c,
                                                       const std::vector<LpRow>& rows) {
    size_t n = c.size();
    if (n == 0 || rows.size() < n) return std::nullopt;
    std::optional<std::pair<Rat, std::vector<Rat>>> best;
    std::vector<size_t> idx(n);
    std::function<void(size_t, size_t)> choose = [&](size_t from, size_t k) {
        if (k == n) {
            std::vector<std::vector<Rat>> a;
            std::vector<Rat> b;
            for (size_t i = 0; i < n; ++i) {
                a.push_back(rows[idx[i]].a);
                b.push_back(rows[idx[i]].b);
            }
            std::vector<Rat> x;
            if (!solve_square(a, b, x)) return;
            for (const auto& row : rows) {
                Rat lhs(0);
                for (size_t i = 0; i < n; ++i) lhs += row.a[i] * x[i];
                if (lhs > row.b) return;
            }
            Rat val(0);
            for (size_t i = 0; i < n; ++i) val += c[i] * x[i];
            if (!best || val > best->first) best = {val, x};
            return;
        }
        for (size_t i = from; i + (n - k) <= rows.size(); ++i) {
            idx[k] = i;
            choose(i + 1, k + 1);
        }
    };
    choose(0, 0);
    return best;
}

// ------------------------------------------------------------ dual norm

BracketResult dual_norm(const Func& f, int n_dim, const NormOracle& oracle, const Rat& tol, int max_iter) {
    if (n_dim < 1) throw PreconditionError("dual_norm needs N >= 1");
    if (!f.v.is_zero() && f.v.max_support() > n_dim)
        throw PreconditionError("dual_norm: functional support exceeds [1,N]");
    BracketResult res;
    std::vector<Rat> c(static_cast<size_t>(n_dim), Rat(0));
    for (const auto& [i, v] : f.v.entries()) c[static_cast<size_t>(i - 1)] = v;

    std::vector<LpRow> rows;
    auto add_cut = [&](const Vec00& g) {
        LpRow r1;
        r1.a.assign(static_cast<size_t>(n_dim), Rat(0));
        for (const auto& [i, v] : g.entries()) r1.a[static_cast<size_t>(i - 1)] = v;
        r1.b = 1;
        LpRow r2 = r1;
        for (auto& v : r2.a) v = -v;
        rows.push_back(r1);
        rows.push_back(r2);
    };
    for (int i = 1; i <= n_dim; ++i) add_cut(Vec00::unit(i));

    Rat lower(0), upper(0);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        auto sol = lp_max(c, rows);
        if (!sol) {
            res.note = "LP degenerate";
            res.converged = false;
            break;
        }
        upper = sol->first;
        Vec00 xstar;
        for (int i = 1; i <= n_dim; ++i) xstar.set(i, sol->second[static_cast<size_t>(i - 1)]);
        if (xstar.is_zero()) {
            lower = std::max(lower, Rat(0));
            break;
        }
        NormResult nr = oracle(xstar);
        Rat nx_up = nr.upper.upper_rat();
        if (nx_up > 0) {
            Rat cand = f.v.dot(xstar) / nx_up;
            if (cand > lower) lower = cand;
        }
        if (upper - lower < tol) break;
        // separate: add the norming witness as a cutting plane
        if (!nr.witness_l2_sup) {
            add_cut(nr.witness.f.v);
        } else {
            Rat ssq(0);
            Vec00 dir;
            for (const auto& part : nr.l2_parts) {
                Rat a = part.f.v.dot(xstar);
                ssq += a * a;
                dir = dir + part.f.v.scaled(a);
            }
            Rat s = sqrt_upper(ssq);
            if (s == 0) {
                res.note = "zero witness";
                res.converged = false;
                break;
            }
            add_cut(dir.scaled(Rat(1) / s));
        }
        if (it + 1 == max_iter) res.converged = false;
    }
    res.lower = lower;
    res.upper = upper;
    if (res.upper < res.lower) res.upper = res.lower;
    return res;
}

// -------------------------------------------------------- quotient norm

BracketResult quotient_norm(const Vec00& x, int n_dim, const NormOracle& oracle,
                            const std::function<bool(int)>& in_l, const Rat& tol) {
    BracketResult res;
    if (!x.is_zero() && x.max_support() > n_dim)
        throw PreconditionError("quotient_norm: vector support exceeds [1,N]");

    // lower: norming functionals supported off L annihilate X_L
    Vec00 xc;
    for (const auto& [i, c] : x.entries())
        if (!in_l(i)) xc.set(i, c);
    Rat lower = xc.is_zero() ? Rat(0) : oracle(xc).lower.lower_rat();

    // upper: coordinate descent over y in span{e_n : n in L, n <= N}
    Vec00 y;
    auto value = [&](const Vec00& yy) { return oracle(x - yy).upper.upper_rat(); };
    Rat cur = value(y);
    const int rounds = 8;
    for (int round = 0; round < rounds; ++round) {
        bool improved = false;
        for (int nc = 1; nc <= n_dim; ++nc) {
            if (!in_l(nc)) continue;
            Rat resid = (x - y).at(nc);
            if (resid != 0) {
                Vec00 y2 = y;
                y2.add(nc, resid);  // exact zeroing candidate
                Rat v2 = value(y2);
                if (v2 < cur) {
                    y = y2;
                    cur = v2;
                    improved = true;
                    continue;
                }
            }
            // rational ternary refinement on t -> value(y + t e_nc)
            Rat lo = -x.l1() - Rat(1), hi = x.l1() + Rat(1);
            for (int step = 0; step < 24; ++step) {
                Rat t1 = lo + (hi - lo) / 3;
                Rat t2 = hi - (hi - lo) / 3;
                Vec00 ya = y, yb = y;
                ya.add(nc, t1);
                yb.add(nc, t2);
                if (value(ya) <= value(yb))
                    hi = t2;
                else
                    lo = t1;
                if (hi - lo < tol / 4) break;
            }
            Vec00 yc = y;
            yc.add(nc, (lo + hi) / 2);
            Rat vc = value(yc);
            if (vc < cur) {
                y = yc;
                cur = vc;
                improved = true;
            }
        }
        if (!improved) break;
    }
    res.lower = lower;
    res.upper = cur;
    if (res.upper < res.lower) res.upper = res.lower;
    return res;
}

// ------------------------------------------------------- average search

AverageResult find_l1_average(const std::vector<Vec00>& blocks, int k, const Rat& C, const NormOracle& oracle) {
    AverageResult out;
    if (k < 2) throw PreconditionError("find_l1_average needs k >= 2");
    if (blocks.size() < static_cast<size_t>(k)) {
        out.note = "not enough blocks";
        return out;
    }
    // certified upper norm 1 after scaling by the upper bound
    std::vector<Vec00> level;
    for (const auto& b : blocks) {
        if (b.is_zero()) continue;
        Rat up = oracle(b).upper.upper_rat();
        if (up == 0) continue;
        level.push_back(b.scaled(Rat(1) / up));
    }
    int max_levels = 12;
    for (int lvl = 0; lvl < max_levels && level.size() >= static_cast<size_t>(k); ++lvl) {
        std::vector<Vec00> next;
        for (size_t g = 0; g + static_cast<size_t>(k) <= level.size(); g += static_cast<size_t>(k)) {
            Vec00 sum;
            std::vector<Vec00> parts;
            for (int i = 0; i < k; ++i) {
                sum = sum + level[g + static_cast<size_t>(i)];
                parts.push_back(level[g + static_cast<size_t>(i)]);
            }
            Vec00 avg = sum.scaled(Rat(1, k));
            NormResult nr = oracle(avg);
            Rat low = nr.lower.lower_rat();
            if (low > 0 && Rat(1) <= C * low) {
                // each part has norm <= 1 <= C * ||avg||
                out.found = true;
                out.average = avg;
                out.parts = parts;
                out.constant = Rat(1) / low;
                return out;
            }
            Rat up = nr.upper.upper_rat();
            if (up > 0) next.push_back(avg.scaled(Rat(1) / up));
        }
        level = std::move(next);
    }
    out.note = "search exhausted: profile too small for the requested average";
    return out;
}

AverageResult find_c0_average(const std::vector<Func>& blocks, int k, const NormOracle& vector_oracle,
                              const NormOracle& dual_upper_oracle) {
    AverageResult out;
    if (k < 2) throw PreconditionError("find_c0_average needs k >= 2");
    std::vector<Func> level = blocks;
    int max_levels = 10;
    for (int lvl = 0; lvl < max_levels && level.size() >= static_cast<size_t>(k); ++lvl) {
        for (size_t g = 0; g + static_cast<size_t>(k) <= level.size(); g += static_cast<size_t>(k)) {
            Vec00 sum;
            for (int i = 0; i < k; ++i) sum = sum + level[g + static_cast<size_t>(i)].v;
            Func total;
            total.v = sum;
            Rat up = dual_upper_oracle(sum).upper.upper_rat();
            if (up <= 1) {
                bool all_big = true;
                std::vector<Func> parts;
                for (int i = 0; i < k; ++i) {
                    const Func& fi = level[g + static_cast<size_t>(i)];
                    Rat flow = dual_upper_oracle(fi.v).lower.lower_rat();
                    if (flow * 2 < 1) all_big = false;
                    parts.push_back(fi);
                }
                if (all_big) {
                    out.found = true;
                    out.dual_parts = parts;
                    out.constant = Rat(2);
                    return out;
                }
            }
        }
        // rescale groups down and move a level up
        std::vector<Func> next;
        for (size_t g = 0; g + static_cast<size_t>(k) <= level.size(); g += static_cast<size_t>(k)) {
            Vec00 sum;
            for (int i = 0; i < k; ++i) sum = sum + level[g + static_cast<size_t>(i)].v;
            Rat up = dual_upper_oracle(sum).upper.upper_rat();
            Func f;
            f.v = up > 1 ? sum.scaled(Rat(1) / up) : sum;
            next.push_back(f);
        }
        level = std::move(next);
        (void)vector_oracle;
    }
    out.note = "search exhausted: no c0 average found at this width";
    return out;
}

}  // namespace tslab
