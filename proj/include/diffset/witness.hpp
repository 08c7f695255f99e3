#pragma once

// Difference witnesses: given a family F and a target X, produce F1, F2 in F
// with F1 \ F2 = X. witness_oracle is the brute-force fallback that works on
// any family; the remaining routines are constructive for the odd/even
// constructions and are validated against the family before returning.

#include <optional>
#include <stdexcept>
#include <vector>

#include "construct.hpp"
#include "ground.hpp"
#include "matchings.hpp"

namespace diffset {

struct WitnessPair {
    ESet f1, f2, x;
};

struct WitnessConfig {
    int max_residue_swaps = 3;  // bounded fix-up attempts before oracle fallback
};

struct SmallWitnessStats {
    int swaps_used = 0;
    bool used_oracle = false;
};

namespace detail {

inline void check_witness(const Family& f, ESet X, ESet f1, ESet f2, const char* who) {
    if (!(f1.minus(f2) == X))
        throw ConstructionError(std::string(who) + ": produced pair does not realize X=" + to_string(X) +
                                " (f1=" + to_string(f1) + ", f2=" + to_string(f2) + ")");
    if (f1.size() != f.k || f2.size() != f.k)
        throw ConstructionError(std::string(who) + ": produced sets are not k-sets");
    if (!f.contains(f1) || !f.contains(f2))
        throw ConstructionError(std::string(who) + ": produced sets are not members of the family");
}

}  // namespace detail

// Colex-first witness by exhaustive scan: the first member F1 containing X,
// paired with the first member F2 containing F1 \ X and avoiding X.
inline std::optional<WitnessPair> witness_oracle(const Family& f, ESet X) {
    if (X.size() >= f.k) throw std::invalid_argument("witness_oracle: |X| must be < k");
    for (ESet f1 : f.sets) {
        if (!X.subset_of(f1)) continue;
        ESet rest = f1.minus(X);
        for (ESet f2 : f.sets) {
            if (rest.subset_of(f2) && !f2.intersects(X)) return WitnessPair{f1, f2, X};
        }
    }
    return std::nullopt;
}

// (k-1)-sets X with no residue class fully inside X, for the even
// construction's base class R_i: with l = sum(X) mod 3 pick the smallest
// y' in Y with y' = i - l (mod 3) and the smallest y'' in Y with
// y'' = y' + 1 (mod 3); then X + {y'} and Y - {y''} both land in R_i.
inline WitnessPair witness_normal(const GroundSet& g, const Family& f, ESet X) {
    if (X.size() != g.k() - 1 || !X.subset_of(g.all()))
        throw std::invalid_argument("witness_normal: X must be a (k-1)-subset of the ground set");
    for (Residue r : {Residue::A, Residue::B, Residue::C})
        if (g.cls(r).subset_of(X))
            throw std::invalid_argument("witness_normal: X fully contains a residue class; use witness_extremal");
    const int i = base_residue(g.mod_case());
    const int l = X.sum_mod(3);
    const ESet Y = g.complement(X);
    const int want1 = ((i - l) % 3 + 3) % 3;
    const int want2 = (want1 + 1) % 3;

    const ESet y1pool = Y & g.cls(static_cast<Residue>(want1));
    const ESet y2pool = Y & g.cls(static_cast<Residue>(want2));
    if (y1pool.empty() || y2pool.empty())
        throw ConstructionError("witness_normal: residue class missing from the complement");
    ESet f1 = X.with(y1pool.min_element());
    ESet f2 = Y.without(y2pool.min_element());
    detail::check_witness(f, X, f1, f2, "witness_normal");
    return WitnessPair{f1, f2, X};
}

// (k-1)-sets X that fully contain a residue class: replay the same case-table
// routing that emitted the family's extra sets.
inline WitnessPair witness_extremal(const GroundSet& g, const Family& f, const ExtremalContext& ctx) {
    const AuxMatching aux = build_aux(g);
    RouteOutcome out = route_extremal(g, aux, ctx.x);
    detail::check_witness(f, ctx.x, out.f1, out.f2, "witness_extremal");
    return WitnessPair{out.f1, out.f2, ctx.x};
}

namespace detail {

// Swap elements between `inside` and `pool_outside` until sum(inside)+fixed
// hits `target_res` mod m; at most cfg.max_residue_swaps exchanges.
inline bool fix_residue(ESet& inside, ESet pool_outside, int fixed_sum, int m, int target_res,
                        const WitnessConfig& cfg, int& swaps) {
    auto deficit = [&] { return ((target_res - (fixed_sum + inside.sum()) % m) % m + m) % m; };
    for (int round = 0; round < cfg.max_residue_swaps; ++round) {
        int d = deficit();
        if (d == 0) return true;
        bool swapped = false;
        for (std::uint64_t ub = inside.bits; ub != 0 && !swapped; ub &= ub - 1) {
            int u = std::countr_zero(ub);
            for (std::uint64_t wb = pool_outside.bits; wb != 0; wb &= wb - 1) {
                int w = std::countr_zero(wb);
                if (((w - u) % m + m) % m != d) continue;
                inside = inside.without(u).with(w);
                pool_outside = pool_outside.without(w).with(u);
                ++swaps;
                swapped = true;
                break;
            }
        }
        if (!swapped) {
            // No single exchange bridges the gap; take any parity-changing
            // swap and retry, so two-step fixes remain reachable.
            for (std::uint64_t ub = inside.bits; ub != 0 && !swapped; ub &= ub - 1) {
                int u = std::countr_zero(ub);
                for (std::uint64_t wb = pool_outside.bits; wb != 0; wb &= wb - 1) {
                    int w = std::countr_zero(wb);
                    if (((w - u) % m + m) % m == 0) continue;
                    inside = inside.without(u).with(w);
                    pool_outside = pool_outside.without(w).with(u);
                    ++swaps;
                    swapped = true;
                    break;
                }
            }
            if (!swapped) return false;
        }
    }
    return deficit() == 0;
}

// Singleton witness mirroring the base construction: replace x by the
// smallest other element of its residue class, sharing a common (k-1)-set T
// drawn from the two neighbouring classes (smallest elements first, the class
// split adjusted until the base residue is hit).
inline std::optional<WitnessPair> witness_singleton(const GroundSet& g, const Family& f, ESet X, int m, int r) {
    const int x = X.min_element();
    const int k = g.k();
    if (m == 3) {
        const Residue tx = g.residue_class(x);
        ESet same = g.cls(tx).without(x);
        if (same.empty()) return std::nullopt;
        const int x2 = same.min_element();
        const std::vector<int> P = to_elements(g.cls(static_cast<Residue>((static_cast<int>(tx) + 1) % 3)));
        const std::vector<int> Q = to_elements(g.cls(static_cast<Residue>((static_cast<int>(tx) + 2) % 3)));
        const int mid = (k - 1 + 1) / 2;
        for (int step = 0; step <= k - 1; ++step) {
            for (int sign : {-1, 1}) {
                int np = mid + sign * step;
                if (sign == 1 && step == 0) continue;
                int nq = k - 1 - np;
                if (np < 0 || nq < 0 || np > static_cast<int>(P.size()) || nq > static_cast<int>(Q.size()))
                    continue;
                ESet T;
                for (int i = 0; i < np; ++i) T = T.with(P[static_cast<std::size_t>(i)]);
                for (int i = 0; i < nq; ++i) T = T.with(Q[static_cast<std::size_t>(i)]);
                if ((x + T.sum()) % m != r) continue;
                ESet f1 = T.with(x), f2 = T.with(x2);
                if (f.contains(f1) && f.contains(f2)) return WitnessPair{f1, f2, X};
            }
        }
        return std::nullopt;
    }
    // parity base: same-parity replacement, T scanned colex-first
    ESet same;
    for (int e = 0; e < g.n(); ++e)
        if (e != x && (e - x) % 2 == 0) same = same.with(e);
    if (same.empty()) return std::nullopt;
    const int x2 = same.min_element();
    ESet pool = g.all().without(x).without(x2);
    std::optional<WitnessPair> res;
    for_each_subset(g.n(), k - 1, [&](ESet T) {
        if (res || !T.subset_of(pool)) return;
        if ((x + T.sum()) % m != r) return;
        ESet f1 = T.with(x), f2 = T.with(x2);
        if (f.contains(f1) && f.contains(f2)) res = WitnessPair{f1, f2, X};
    });
    return res;
}

}  // namespace detail

// 1 <= |X| <= k-2, odd or even construction. Pad X with I from the complement
// so X+I lands in the base class, then pick Z disjoint from I with I+Z in the
// base class; X+I minus I+Z leaves exactly X. Residues are corrected by a
// bounded number of element swaps; on failure falls back to witness_oracle
// (recorded in stats).
inline WitnessPair witness_small(const GroundSet& g, const Family& f, ESet X, SmallWitnessStats* stats = nullptr,
                                 WitnessConfig cfg = {}) {
    const int k = g.k();
    if (X.empty() || X.size() > k - 2 || !X.subset_of(g.all()))
        throw std::invalid_argument("witness_small: need 1 <= |X| <= k-2 inside the ground set");
    const bool parity_base = (f.kind == "odd");
    const int m = parity_base ? 2 : 3;
    const int r = parity_base ? 1 : base_residue(g.mod_case());
    const ESet Y = g.complement(X);
    SmallWitnessStats local;
    SmallWitnessStats& st = stats ? *stats : local;

    // The greedy pad occasionally corners itself (a residue-valid I can leave
    // no residue-valid Z in the remaining pool), so before surrendering to the
    // oracle scan the pads in colex order; first (I, Z) landing both sets in
    // the family wins. Total whenever a base-class witness exists at all.
    auto pad_scan = [&]() -> std::optional<WitnessPair> {
        std::optional<WitnessPair> res;
        detail::for_each_subset_of(Y, k - X.size(), [&](ESet pad) {
            if (res || (X.sum() + pad.sum()) % m != r) return;
            detail::for_each_subset_of(Y.minus(pad), X.size(), [&](ESet zpart) {
                if (res || (pad.sum() + zpart.sum()) % m != r) return;
                ESet c1 = X | pad, c2 = pad | zpart;
                if (f.contains(c1) && f.contains(c2)) res = WitnessPair{c1, c2, X};
            });
        });
        return res;
    };

    auto fallback = [&]() -> WitnessPair {
        if (auto w = pad_scan()) {
            detail::check_witness(f, X, w->f1, w->f2, "witness_small");
            return *w;
        }
        st.used_oracle = true;
        auto w = witness_oracle(f, X);
        if (!w) throw ConstructionError("witness_small: X is not covered by the family");
        return *w;
    };

    if (X.size() == 1) {
        if (auto w = detail::witness_singleton(g, f, X, m, r)) {
            detail::check_witness(f, X, w->f1, w->f2, "witness_small");
            return *w;
        }
        return fallback();
    }
    // Pad I: smallest k-|X| elements of Y, residue-fixed.
    ESet I;
    {
        ESet y = Y;
        for (int i = 0; i < k - X.size(); ++i) {
            I = I.with(y.min_element());
            y = y.minus(I);
        }
    }
    if (!detail::fix_residue(I, Y.minus(I), X.sum(), m, r, cfg, st.swaps_used)) return fallback();
    // Partner part Z: smallest |X| elements of Y - I, residue-fixed.
    const ESet pool = Y.minus(I);
    ESet Z;
    {
        ESet y = pool;
        for (int i = 0; i < X.size(); ++i) {
            Z = Z.with(y.min_element());
            y = y.minus(Z);
        }
    }
    if (!detail::fix_residue(Z, pool.minus(Z), I.sum(), m, r, cfg, st.swaps_used)) return fallback();
    ESet f1 = X | I, f2 = I | Z;
    if (!f.contains(f1) || !f.contains(f2)) return fallback();
    detail::check_witness(f, X, f1, f2, "witness_small");
    return WitnessPair{f1, f2, X};
}

namespace detail {

// Odd construction, |X| = k-1: complete X to an odd-sum k-set with the
// smallest suitable y', then drop from the complementary side the smallest
// element of opposite parity to y'.
inline WitnessPair witness_odd_top(const GroundSet& g, const Family& f, ESet X) {
    const ESet Y = g.complement(X);
    int y1 = -1;
    for (std::uint64_t b = Y.bits; b != 0; b &= b - 1) {
        int y = std::countr_zero(b);
        if ((X.sum() + y) % 2 == 1) {
            y1 = y;
            break;
        }
    }
    if (y1 < 0) throw ConstructionError("witness_odd_top: no completion found");
    ESet f1 = X.with(y1);
    ESet rest = Y.without(y1);
    int drop = -1;
    for (std::uint64_t b = rest.bits; b != 0; b &= b - 1) {
        int e = std::countr_zero(b);
        if ((e - y1) % 2 != 0) {
            drop = e;
            break;
        }
    }
    if (drop < 0) throw ConstructionError("witness_odd_top: no parity partner found");
    ESet f2 = rest.with(y1).without(drop);
    check_witness(f, X, f1, f2, "witness_odd_top");
    return WitnessPair{f1, f2, X};
}

}  // namespace detail

// Dispatcher covering every |X| <= k-1 for the odd/even constructions, with
// the oracle handling all other family kinds.
inline std::optional<WitnessPair> witness_any(const Family& f, ESet X, SmallWitnessStats* stats = nullptr) {
    if (X.size() >= f.k) throw std::invalid_argument("witness_any: |X| must be < k");
    if (X.empty()) {
        if (f.sets.empty()) return std::nullopt;
        return WitnessPair{f.sets.front(), f.sets.front(), X};
    }
    if ((f.kind == "even" || f.kind == "odd") && f.n == 2 * f.k) {
        GroundSet g(f.k);
        if (X.size() == f.k - 1) {
            if (f.kind == "odd") return detail::witness_odd_top(g, f, X);
            bool extremal = false;
            for (Residue r : {Residue::A, Residue::B, Residue::C})
                if (g.cls(r).subset_of(X)) extremal = true;
            if (extremal) return witness_extremal(g, f, ExtremalContext::of(g, X));
            return witness_normal(g, f, X);
        }
        return witness_small(g, f, X, stats);
    }
    return witness_oracle(f, X);
}

}  // namespace diffset
