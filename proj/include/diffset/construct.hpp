#pragma once

// Family construction. The centerpiece is even_family: for even k it starts
// from one full sum-residue class R_i of k-sets (i = 0 when k = 3p+1, else
// i = 1) and adds, for every (k-1)-set X that fully contains one residue
// class, a single extra set from the complementary residue class chosen via
// the parity lemmas so that X itself becomes a realized difference. odd_family
// handles odd k by taking all k-sets with odd element sum.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ground.hpp"
#include "matchings.hpp"
#include "parallel.hpp"

namespace diffset {

enum class Label : std::uint8_t {
    R0,
    R1,
    R2,
    OddParity,
    R0a1,
    R0a2,
    R0b1,
    R0b2,
    R0c1,
    R0c2,
    R2a1,
    R2a2,
    R2b1,
    R2b2,
    R2c1,
    R2c2,
    Fano,
    Lifted,
    External,
};

inline const char* to_string(Label l) {
    switch (l) {
        case Label::R0: return "R0";
        case Label::R1: return "R1";
        case Label::R2: return "R2";
        case Label::OddParity: return "OddParity";
        case Label::R0a1: return "R0a1";
        case Label::R0a2: return "R0a2";
        case Label::R0b1: return "R0b1";
        case Label::R0b2: return "R0b2";
        case Label::R0c1: return "R0c1";
        case Label::R0c2: return "R0c2";
        case Label::R2a1: return "R2a1";
        case Label::R2a2: return "R2a2";
        case Label::R2b1: return "R2b1";
        case Label::R2b2: return "R2b2";
        case Label::R2c1: return "R2c1";
        case Label::R2c2: return "R2c2";
        case Label::Fano: return "Fano";
        case Label::Lifted: return "Lifted";
        default: return "External";
    }
}

inline std::optional<Label> label_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Label::External); ++i) {
        Label l = static_cast<Label>(i);
        if (s == to_string(l)) return l;
    }
    return std::nullopt;
}

// A k-uniform family on {0,...,n-1}; sets are kept in strictly ascending mask
// (= colex) order with a parallel provenance label per set.
struct Family {
    int n = 0, k = 0;
    std::string kind = "external";  // odd|even|fano|lifted|external|r0|r1|r2
    std::vector<ESet> sets;
    std::vector<Label> labels;

    std::size_t size() const { return sets.size(); }

    bool contains(ESet s) const {
        auto it = std::lower_bound(sets.begin(), sets.end(), s);
        return it != sets.end() && *it == s;
    }

    std::optional<Label> label_of(ESet s) const {
        auto it = std::lower_bound(sets.begin(), sets.end(), s);
        if (it == sets.end() || !(*it == s)) return std::nullopt;
        return labels[static_cast<std::size_t>(it - sets.begin())];
    }
};

// Accumulates (set,label) emissions in order, then seals into a Family:
// sorted by mask, duplicates collapsed keeping the first emission's label.
class FamilyBuilder {
public:
    FamilyBuilder(int n, int k, std::string kind) : n_(n), k_(k), kind_(std::move(kind)) {}

    void append(ESet s, Label l) {
        entries_.push_back({s, l});
    }

    Family seal() {
        std::stable_sort(entries_.begin(), entries_.end(),
                         [](const Entry& a, const Entry& b) { return a.set < b.set; });
        Family f;
        f.n = n_;
        f.k = k_;
        f.kind = kind_;
        f.sets.reserve(entries_.size());
        f.labels.reserve(entries_.size());
        const std::uint64_t fullmask = (n_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
        for (const Entry& e : entries_) {
            if ((e.set.bits & ~fullmask) != 0)
                throw std::invalid_argument("FamilyBuilder: set outside the ground set");
            if (e.set.size() != k_) throw std::invalid_argument("FamilyBuilder: set is not a k-set");
            if (!f.sets.empty() && f.sets.back() == e.set) continue;
            f.sets.push_back(e.set);
            f.labels.push_back(e.label);
        }
        return f;
    }

private:
    struct Entry {
        ESet set;
        Label label;
    };
    int n_, k_;
    std::string kind_;
    std::vector<Entry> entries_;
};

inline int base_residue(ModCase c) { return c == ModCase::Mod1 ? 0 : 1; }
inline int addition_residue(ModCase c) { return c == ModCase::Mod1 ? 2 : 0; }
inline Label base_label(ModCase c) { return c == ModCase::Mod1 ? Label::R0 : Label::R1; }

// All k-sets whose element sum is congruent to i mod 3.
inline Family class_Ri(const GroundSet& g, int i) {
    if (i < 0 || i > 2) throw std::invalid_argument("class_Ri: residue must be 0, 1 or 2");
    FamilyBuilder b(g.n(), g.k(), std::string("r") + std::to_string(i));
    Label l = i == 0 ? Label::R0 : (i == 1 ? Label::R1 : Label::R2);
    for_each_subset(g.n(), g.k(), [&](ESet s) {
        if (s.sum_mod(3) == i) b.append(s, l);
    });
    return b.seal();
}

// Odd k: all k-sets with odd element sum. The total sum k(2k-1) is odd, so
// exactly one set of every complementary pair is picked.
inline Family odd_family(const GroundSet& g) {
    if (g.k() % 2 == 0) throw std::invalid_argument("odd_family: k must be odd");
    FamilyBuilder b(g.n(), g.k(), "odd");
    for_each_subset(g.n(), g.k(), [&](ESet s) {
        if (s.sum_mod(2) == 1) b.append(s, Label::OddParity);
    });
    return b.seal();
}

enum class RouteAction { Direct, Add, Delete };

inline const char* to_string(RouteAction a) {
    switch (a) {
        case RouteAction::Direct: return "Direct";
        case RouteAction::Add: return "Add";
        default: return "Delete";
    }
}

// Outcome of routing one extremal X: a witness pair (f1 \ f2 = X) and, for
// Add/Delete branches, the set emitted into the family beyond the base class.
struct RouteOutcome {
    RouteAction action = RouteAction::Direct;
    ESet f1, f2;
    std::optional<ESet> emitted;
    Label emitted_label = Label::External;
    bool degenerate_delete = false;
    int chosen = -1;  // vertex picked by the add/delete rule
};

namespace detail {

struct CaseRow {
    Residue extremal;           // class fully inside X
    PairKind pair;              // matching pair driving Add/Delete
    int direct_res, add_res, del_res;  // branch on sum(X) mod 3
    Residue dir_v, dir_w;       // Direct: f1 = X + min(Y cap dir_v), f2 = Y - min(Y cap dir_w)
    Residue add_w;              // Add:    f2 = Y - min(Y cap add_w)
    Residue del_v;              // Delete: f1 = X + min(Y cap del_v)
    Label add_label, del_label;
};

// Rows a/b/c per k mod 3. Pair sides and partner classes are uniform; only
// the branch residues, labels and delete targets vary.
inline const CaseRow* case_table(ModCase c) {
    static const CaseRow mod0[3] = {
        {Residue::A, PairKind::BC, 0, 1, 2, Residue::B, Residue::C, Residue::B, Residue::C, Label::R0a1, Label::R0a2},
        {Residue::B, PairKind::CA, 2, 0, 1, Residue::C, Residue::A, Residue::C, Residue::A, Label::R0b1, Label::R0b2},
        {Residue::C, PairKind::AB, 1, 2, 0, Residue::A, Residue::B, Residue::A, Residue::B, Label::R0c1, Label::R0c2},
    };
    static const CaseRow mod1[3] = {
        {Residue::A, PairKind::BC, 2, 0, 1, Residue::B, Residue::C, Residue::B, Residue::C, Label::R2a1, Label::R2a2},
        {Residue::B, PairKind::CA, 1, 2, 0, Residue::C, Residue::A, Residue::C, Residue::A, Label::R2b1, Label::R2b2},
        {Residue::C, PairKind::AB, 0, 1, 2, Residue::A, Residue::B, Residue::A, Residue::B, Label::R2c1, Label::R2c2},
    };
    static const CaseRow mod2[3] = {
        {Residue::A, PairKind::BC, 0, 1, 2, Residue::B, Residue::C, Residue::B, Residue::C, Label::R0a1, Label::R0a2},
        {Residue::B, PairKind::CA, 2, 0, 1, Residue::C, Residue::A, Residue::C, Residue::A, Label::R0b1, Label::R0b2},
        {Residue::C, PairKind::AB, 1, 2, 0, Residue::A, Residue::B, Residue::A, Residue::B, Label::R0c1, Label::R0c2},
    };
    switch (c) {
        case ModCase::Mod0: return mod0;
        case ModCase::Mod1: return mod1;
        default: return mod2;
    }
}

inline int mod2i(int v) { return ((v % 2) + 2) % 2; }

// Delete-branch target parity. xu/xv indicate whether X contains the pair's
// special U/V vertex.
inline int delete_target(ModCase c, int row, int a, int b, int cc, int xu, int xv) {
    switch (c) {
        case ModCase::Mod0:
            if (row == 0) return mod2i(b <= cc - 2 ? b : cc);
            if (row == 1) return mod2i(cc <= a - 2 ? cc : a);
            return mod2i(a <= b - 2 ? a : b);
        case ModCase::Mod1:
            if (row == 0) return mod2i(b - xu <= cc - 2 ? b + 1 : cc - 1 - xu);
            if (row == 1) return mod2i(cc <= a - xv - 2 ? cc + 1 - xv : a - 1);
            return mod2i(a <= b - 2 ? a + 1 : b - 1);
        default:
            if (row == 0) return mod2i(b <= cc - 2 ? b + 1 : cc - 1);
            // Row b needs the opposite parity from the naive shift: the CA
            // matching has odd s and an A-side reserve vertex, so pairing the
            // added-set target min(c, a-xv) with cc-xv (resp. a) makes the two
            // emission parities sum to 1+xv, while complementary pairs would
            // force the sum to xv. cc+1-xv / a-1 would collide instead;
            // k = 8 brute force confirms the collision.
            if (row == 1) return mod2i(cc <= a - xv - 2 ? cc - xv : a);
            return mod2i(a - xu <= b - 2 ? a : b + xu);
    }
}

inline int min_of(ESet s, const char* what) {
    if (s.empty()) throw ConstructionError(std::string("route_extremal: no element available for ") + what);
    return s.min_element();
}

}  // namespace detail

// Routes one extremal (k-1)-set X (exactly one residue class fully inside X)
// through the case table. Every branch yields f1, f2 in the construction with
// f1 \ f2 = X; Add/Delete branches also name the emitted non-base set.
inline RouteOutcome route_extremal(const GroundSet& g, const AuxMatching& aux, ESet X) {
    ExtremalContext ctx = ExtremalContext::of(g, X);
    const ESet A = g.cls(Residue::A), B = g.cls(Residue::B), C = g.cls(Residue::C);
    int row;
    if (A.subset_of(X))
        row = 0;
    else if (B.subset_of(X))
        row = 1;
    else if (C.subset_of(X))
        row = 2;
    else
        throw std::invalid_argument("route_extremal: X has no residue class fully inside it");

    const detail::CaseRow& r = detail::case_table(g.mod_case())[row];
    const PairMatching& pm = aux.pair(r.pair);
    const ESet Y = ctx.y;
    const int res = X.sum_mod(3);

    RouteOutcome out;
    if (res == r.direct_res) {
        out.action = RouteAction::Direct;
        out.f1 = X.with(detail::min_of(Y & g.cls(r.dir_v), "Direct f1"));
        out.f2 = Y.without(detail::min_of(Y & g.cls(r.dir_w), "Direct f2"));
        return out;
    }
    if (res == r.add_res) {
        out.action = RouteAction::Add;
        int v = lemma_add(pm, X & g.cls(pm.u_class), X & g.cls(pm.v_class));
        out.chosen = v;
        out.f1 = X.with(v);
        out.emitted = out.f1;
        out.emitted_label = r.add_label;
        out.f2 = Y.without(detail::min_of(Y & g.cls(r.add_w), "Add f2"));
        return out;
    }

    out.action = RouteAction::Delete;
    ESet U = Y & g.cls(pm.u_class), V = Y & g.cls(pm.v_class);
    int u;
    if (pm.neighbors(U).subset_of(V)) {
        // Degenerate branch: every matched partner of U already sits in V, so
        // any admissible deletion works; take the smallest non-special vertex.
        out.degenerate_delete = true;
        ESet adm = U;
        if (pm.special_u) adm = adm.without(*pm.special_u);
        u = detail::min_of(adm.empty() ? U : adm, "degenerate Delete");
    } else {
        int xu = (pm.special_u && X.contains(*pm.special_u)) ? 1 : 0;
        int xv = (pm.special_v && X.contains(*pm.special_v)) ? 1 : 0;
        u = lemma_delete(pm, U, V, detail::delete_target(g.mod_case(), row, ctx.a, ctx.b, ctx.c, xu, xv));
    }
    out.chosen = u;
    out.f2 = Y.without(u);
    out.emitted = out.f2;
    out.emitted_label = r.del_label;
    out.f1 = X.with(detail::min_of(Y & g.cls(r.del_v), "Delete f1"));
    return out;
}

struct RouteTrace {
    ESet x;
    RouteOutcome outcome;
};

struct BuildOptions {
    unsigned threads = 1;
    std::vector<RouteTrace>* trace = nullptr;  // optional debug capture, filled in X order
};

// Even k >= 4: full base residue class plus one emitted set per extremal X.
// Emissions are generated in colex X order; duplicate sets keep the label of
// the first X that produced them.
inline Family even_family(const GroundSet& g, BuildOptions opt = {}) {
    if (g.k() % 2 != 0 || g.k() < 4) throw std::invalid_argument("even_family: k must be even and >= 4");
    const AuxMatching aux = build_aux(g);
    const int base = base_residue(g.mod_case());
    FamilyBuilder b(g.n(), g.k(), "even");
    for_each_subset(g.n(), g.k(), [&](ESet s) {
        if (s.sum_mod(3) == base) b.append(s, base_label(g.mod_case()));
    });

    std::vector<ESet> xs = enumerate_subsets(g.n(), g.k() - 1);
    const ESet A = g.cls(Residue::A), B = g.cls(Residue::B), C = g.cls(Residue::C);

    struct Emission {
        ESet set;
        Label label;
    };
    unsigned nthreads = resolve_threads(opt.threads);
    unsigned nchunks = chunk_count(xs.size(), nthreads);
    std::vector<std::vector<Emission>> emitted(nchunks);
    std::vector<std::vector<RouteTrace>> traces(opt.trace ? nchunks : 0);

    for_chunks(xs.size(), nthreads, [&](unsigned chunk, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            ESet X = xs[i];
            if (!(A.subset_of(X) || B.subset_of(X) || C.subset_of(X))) continue;
            RouteOutcome out = route_extremal(g, aux, X);
            if (out.emitted) emitted[chunk].push_back({*out.emitted, out.emitted_label});
            if (opt.trace) traces[chunk].push_back({X, out});
        }
    });
    for (const auto& chunk : emitted)
        for (const Emission& e : chunk) b.append(e.set, e.label);
    if (opt.trace)
        for (auto& chunk : traces)
            for (RouteTrace& t : chunk) opt.trace->push_back(t);
    return b.seal();
}

// The seven lines of the order-2 projective plane on {0,...,6}.
inline Family fano_family() {
    FamilyBuilder b(7, 3, "fano");
    for (ESet s : {ESet::of({0, 1, 2}), ESet::of({0, 3, 5}), ESet::of({0, 4, 6}), ESet::of({1, 3, 6}),
                   ESet::of({1, 4, 5}), ESet::of({2, 3, 4}), ESet::of({2, 5, 6})})
        b.append(s, Label::Fano);
    return b.seal();
}

// Lifts a k'-uniform family on 2k' points to a (k'+t-1)-uniform t-intersecting
// family on 2k'+t-1 points by appending the t-1 fresh tail elements
// {2k',...,2k'+t-2} to every member. t = 1 returns the base unchanged.
inline Family t_lift(const Family& base, int t) {
    if (t < 1) throw std::invalid_argument("t_lift: t must be >= 1");
    if (base.n != 2 * base.k) throw std::invalid_argument("t_lift: base must be k-uniform on 2k points");
    if (t == 1) return base;
    int n = base.n + t - 1;
    if (n > 64) throw std::invalid_argument("t_lift: lifted ground set exceeds the 64-bit mask budget");
    ESet tail;
    for (int e = base.n; e < n; ++e) tail = tail.with(e);
    FamilyBuilder b(n, base.k + t - 1, "lifted");
    for (ESet s : base.sets) b.append(s | tail, Label::Lifted);
    return b.seal();
}

}  // namespace diffset
