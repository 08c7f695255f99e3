#pragma once

// Auxiliary matchings between residue classes and the two parity lemmas used
// by the even-k construction. For each ordered class pair (AB = (A,B),
// BC = (B,C), CA = (C,A)) we keep a partial matching whose shape is one of
//   Z1: perfect on both sides (s pairs),
//   Z2: one extra unmatched vertex u_{s+1} on the U side,
//   Z3: one extra unmatched vertex v_{s+1} on the V side.
// For subsets U of the U side and V of the V side, e(U,V) counts matched
// pairs spanning U and V.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ground.hpp"

namespace diffset {

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PairKind { AB, BC, CA };
enum class Shape { Z1, Z2, Z3 };

inline const char* to_string(PairKind p) {
    switch (p) {
        case PairKind::AB: return "AB";
        case PairKind::BC: return "BC";
        default: return "CA";
    }
}

struct PairMatching {
    PairKind kind = PairKind::AB;
    Shape shape = Shape::Z1;
    Residue u_class = Residue::A, v_class = Residue::B;
    ESet u_side, v_side;
    int s = 0;  // number of matched pairs
    std::array<std::int8_t, 64> partner{};
    std::optional<int> special_u, special_v;  // the unmatched side vertex, if any

    bool matched(int x) const { return partner[static_cast<std::size_t>(x)] >= 0; }
    int partner_of(int x) const { return partner[static_cast<std::size_t>(x)]; }

    // Image of the matched part of S under the matching.
    ESet neighbors(ESet S) const {
        ESet out;
        for (std::uint64_t b = S.bits; b != 0; b &= b - 1) {
            int x = std::countr_zero(b);
            if (matched(x)) out = out.with(partner_of(x));
        }
        return out;
    }
};

struct AuxMatching {
    ModCase mod_case = ModCase::Mod0;
    int k = 0;
    PairMatching ab, bc, ca;

    const PairMatching& pair(PairKind p) const {
        switch (p) {
            case PairKind::AB: return ab;
            case PairKind::BC: return bc;
            default: return ca;
        }
    }
};

namespace detail {

inline void link(PairMatching& m, int u, int v) {
    m.partner[static_cast<std::size_t>(u)] = static_cast<std::int8_t>(v);
    m.partner[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(u);
    ++m.s;
}

inline void require_sides(const PairMatching& m, ESet U, ESet V, const char* who) {
    if (!U.subset_of(m.u_side))
        throw std::invalid_argument(std::string(who) + ": U is not a subset of the " + to_string(m.u_class) +
                                    " side of pair " + to_string(m.kind));
    if (!V.subset_of(m.v_side))
        throw std::invalid_argument(std::string(who) + ": V is not a subset of the " + to_string(m.v_class) +
                                    " side of pair " + to_string(m.kind));
}

}  // namespace detail

// Builds the three pair matchings for even k >= 4. The edges come from the
// consecutive triples {3a, 3a+1, 3a+2}; the leftover vertices per k mod 3:
//   Mod0 (k=3p): all three pairs perfect, s = 2p.
//   Mod1 (k=3p+1): extra edge {6p, 6p+1} completes AB (s = 2p+1);
//                  BC leaves 6p+1 in B unmatched (Z2), CA leaves 6p in A (Z3).
//   Mod2 (k=3p+2): BC perfect (s = 2p+1); AB and CA each match only
//                  {0,3,...,6p} on the A side, leaving the top A vertex 6p+3
//                  unmatched (AB is Z2, CA is Z3), s = 2p+1.
inline AuxMatching build_aux(const GroundSet& g) {
    if (g.k() % 2 != 0 || g.k() < 4) throw std::invalid_argument("build_aux: k must be even and >= 4");
    AuxMatching aux;
    aux.mod_case = g.mod_case();
    aux.k = g.k();
    const int p = g.p();

    auto init = [&](PairMatching& m, PairKind kind, Residue uc, Residue vc) {
        m.kind = kind;
        m.u_class = uc;
        m.v_class = vc;
        m.u_side = g.cls(uc);
        m.v_side = g.cls(vc);
        m.partner.fill(-1);
        m.s = 0;
    };
    init(aux.ab, PairKind::AB, Residue::A, Residue::B);
    init(aux.bc, PairKind::BC, Residue::B, Residue::C);
    init(aux.ca, PairKind::CA, Residue::C, Residue::A);

    switch (g.mod_case()) {
        case ModCase::Mod0:
            for (int a = 0; a < 2 * p; ++a) {
                detail::link(aux.ab, 3 * a, 3 * a + 1);
                detail::link(aux.bc, 3 * a + 1, 3 * a + 2);
                detail::link(aux.ca, 3 * a + 2, 3 * a);
            }
            aux.ab.shape = aux.bc.shape = aux.ca.shape = Shape::Z1;
            break;
        case ModCase::Mod1:
            for (int a = 0; a < 2 * p; ++a) {
                detail::link(aux.ab, 3 * a, 3 * a + 1);
                detail::link(aux.bc, 3 * a + 1, 3 * a + 2);
                detail::link(aux.ca, 3 * a + 2, 3 * a);
            }
            detail::link(aux.ab, 6 * p, 6 * p + 1);
            aux.ab.shape = Shape::Z1;
            aux.bc.shape = Shape::Z2;
            aux.bc.special_u = 6 * p + 1;
            aux.ca.shape = Shape::Z3;
            aux.ca.special_v = 6 * p;
            break;
        case ModCase::Mod2:
            for (int a = 0; a <= 2 * p; ++a) {
                detail::link(aux.ab, 3 * a, 3 * a + 1);
                detail::link(aux.bc, 3 * a + 1, 3 * a + 2);
                detail::link(aux.ca, 3 * a + 2, 3 * a);
            }
            aux.ab.shape = Shape::Z2;
            aux.ab.special_u = 6 * p + 3;
            aux.bc.shape = Shape::Z1;
            aux.ca.shape = Shape::Z3;
            aux.ca.special_v = 6 * p + 3;
            break;
    }
    return aux;
}

inline int matched_pairs(const PairMatching& m, ESet U, ESet V) {
    detail::require_sides(m, U, V, "matched_pairs");
    int e = 0;
    for (std::uint64_t b = U.bits; b != 0; b &= b - 1) {
        int u = std::countr_zero(b);
        if (m.matched(u) && V.contains(m.partner_of(u))) ++e;
    }
    return e;
}

inline int matched_pairs(const AuxMatching& m, PairKind p, ESet U, ESet V) {
    return matched_pairs(m.pair(p), U, V);
}

// Predicted parity of e(U,V) + e(U',V') where U' and V' are the side
// complements: s mod 2 when |U|+|V| is even after discounting special
// vertices, else (s+1) mod 2.
inline int parity_sum_identity(const PairMatching& m, ESet U, ESet V) {
    detail::require_sides(m, U, V, "parity_sum_identity");
    int adj = U.size() + V.size();
    if (m.special_u && U.contains(*m.special_u)) --adj;
    if (m.special_v && V.contains(*m.special_v)) --adj;
    return (adj % 2 == 0) ? m.s % 2 : (m.s + 1) % 2;
}

inline int parity_sum_identity(const AuxMatching& m, PairKind p, ESet U, ESet V) {
    return parity_sum_identity(m.pair(p), U, V);
}

// Smallest v outside V on the V side (never the special vertex) such that
//   (i)  e(U, V+{v}) has the target parity T, where
//        T = min(|U| - [u* in U], |V| - [v* in V]) mod 2, and
//   (ii) the partner image of V+{v} is not contained in U.
// (ii) is enforced as a hard filter on candidates. Callers keep
// |U| - [u* in U] + |V| - [v* in V] <= s-1, which guarantees a candidate for
// (i); absence of any candidate raises ConstructionError.
inline int lemma_add(const PairMatching& m, ESet U, ESet V) {
    detail::require_sides(m, U, V, "lemma_add");
    int ueff = U.size() - ((m.special_u && U.contains(*m.special_u)) ? 1 : 0);
    int veff = V.size() - ((m.special_v && V.contains(*m.special_v)) ? 1 : 0);
    int target = (ueff <= veff ? ueff : veff) & 1;
    for (std::uint64_t b = m.v_side.minus(V).bits; b != 0; b &= b - 1) {
        int v = std::countr_zero(b);
        if (m.special_v && v == *m.special_v) continue;
        ESet Vv = V.with(v);
        if ((matched_pairs(m, U, Vv) & 1) != target) continue;
        if (m.neighbors(Vv).subset_of(U)) continue;
        return v;
    }
    throw ConstructionError("lemma_add: no admissible vertex on pair " + std::string(to_string(m.kind)) +
                            " for U=" + to_string(U) + " V=" + to_string(V) + " target=" + std::to_string(target));
}

inline int lemma_add(const AuxMatching& m, PairKind p, ESet U, ESet V) { return lemma_add(m.pair(p), U, V); }

// Smallest u in U (never the special vertex) with e(U-{u}, V) of the given
// parity. The caller supplies the target; with |U|+|V| >= s+2 and the partner
// image of U not inside V both parities are reachable, but the function only
// requires that some candidate exists.
inline int lemma_delete(const PairMatching& m, ESet U, ESet V, int target_parity) {
    detail::require_sides(m, U, V, "lemma_delete");
    int target = target_parity & 1;
    for (std::uint64_t b = U.bits; b != 0; b &= b - 1) {
        int u = std::countr_zero(b);
        if (m.special_u && u == *m.special_u) continue;
        if ((matched_pairs(m, U.without(u), V) & 1) == target) return u;
    }
    throw ConstructionError("lemma_delete: no admissible vertex on pair " + std::string(to_string(m.kind)) +
                            " for U=" + to_string(U) + " V=" + to_string(V) +
                            " target=" + std::to_string(target));
}

inline int lemma_delete(const AuxMatching& m, PairKind p, ESet U, ESet V, int target_parity) {
    return lemma_delete(m.pair(p), U, V, target_parity);
}

}  // namespace diffset
