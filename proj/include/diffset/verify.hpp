#pragma once

// Brute-force certification: pairwise intersection checks, the full
// difference set D(F) = { F1 \ F2 } as a presence bitmap over 2^n, layer
// coverage, sunflower enumeration, the classical size bounds, and two
// desk-scale exhaustive searches (difference designs; coverage beyond the
// 3k-2 ground-set frontier).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "construct.hpp"
#include "ground.hpp"
#include "parallel.hpp"

namespace diffset {

struct ScaleGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PairCounterexample {
    ESet f1, f2;
};

struct CheckResult {
    bool pass = true;
    std::optional<PairCounterexample> counterexample;
};

// First (in scan order i < j) disjoint pair, if any.
inline CheckResult is_intersecting(const Family& f, unsigned threads = 1) {
    const std::size_t n = f.sets.size();
    unsigned nthreads = resolve_threads(threads);
    unsigned nchunks = chunk_count(n, nthreads);
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> hits(nchunks);
    for_chunks(n, nthreads, [&](unsigned chunk, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!f.sets[i].intersects(f.sets[j])) {
                    hits[chunk] = {i, j};
                    return;
                }
            }
        }
    });
    for (const auto& h : hits)
        if (h) return {false, PairCounterexample{f.sets[h->first], f.sets[h->second]}};
    return {};
}

inline CheckResult are_cross_intersecting(const Family& f1, const Family& f2, unsigned threads = 1) {
    const std::size_t n = f1.sets.size();
    unsigned nthreads = resolve_threads(threads);
    unsigned nchunks = chunk_count(n, nthreads);
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> hits(nchunks);
    for_chunks(n, nthreads, [&](unsigned chunk, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < f2.sets.size(); ++j) {
                if (!f1.sets[i].intersects(f2.sets[j])) {
                    hits[chunk] = {i, j};
                    return;
                }
            }
        }
    });
    for (const auto& h : hits)
        if (h) return {false, PairCounterexample{f1.sets[h->first], f2.sets[h->second]}};
    return {};
}

// Presence bitmap for D(F) over all 2^n subsets. n is capped so the bitmap
// stays a couple of MiB.
class DiffSet {
public:
    static constexpr int kMaxGround = 24;

    explicit DiffSet(int n) : n_(n) {
        if (n < 0 || n > kMaxGround)
            throw ScaleGuardError("difference_set: ground set of size " + std::to_string(n) +
                                  " exceeds the bitmap budget (n <= " + std::to_string(kMaxGround) + ")");
        words_.resize((std::size_t{1} << n_) / 64 + 1, 0);
    }

    int ground_size() const { return n_; }

    void insert(ESet s) { words_[s.bits >> 6] |= std::uint64_t{1} << (s.bits & 63); }

    bool contains(ESet s) const {
        if (s.bits >> n_) return false;
        return (words_[s.bits >> 6] >> (s.bits & 63)) & 1;
    }

    std::size_t size() const {
        std::size_t total = 0;
        for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    // histogram[j] = number of j-sets realized as differences
    std::vector<std::size_t> layer_histogram() const {
        std::vector<std::size_t> hist(static_cast<std::size_t>(n_) + 1, 0);
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            for (std::uint64_t w = words_[wi]; w != 0; w &= w - 1) {
                std::uint64_t mask = (wi << 6) | static_cast<std::uint64_t>(std::countr_zero(w));
                ++hist[static_cast<std::size_t>(std::popcount(mask))];
            }
        }
        return hist;
    }

    void merge(const DiffSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }

private:
    int n_;
    std::vector<std::uint64_t> words_;
};

inline DiffSet difference_set(const Family& f, unsigned threads = 1) {
    DiffSet d(f.n);
    const std::size_t n = f.sets.size();
    unsigned nthreads = resolve_threads(threads);
    unsigned nchunks = chunk_count(n, nthreads);
    if (nchunks <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d.insert(f.sets[i].minus(f.sets[j]));
        return d;
    }
    std::vector<DiffSet> parts(nchunks, DiffSet(f.n));
    for_chunks(n, nthreads, [&](unsigned chunk, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < n; ++j) parts[chunk].insert(f.sets[i].minus(f.sets[j]));
    });
    for (const DiffSet& p : parts) d.merge(p);
    return d;
}

struct LayerCoverage {
    int j = 0;
    std::uint64_t covered = 0, total = 0;
    std::optional<ESet> first_uncovered;
};

struct CoverageReport {
    std::vector<LayerCoverage> layers;   // j = 0..jmax
    bool all_covered = true;
    std::size_t diff_size = 0;
    bool oversize_free = true;           // no difference of size >= k
    std::optional<ESet> oversize_example;
};

inline CoverageReport check_layer_coverage(const Family& f, const DiffSet& d, int jmax) {
    if (jmax < 0 || jmax > f.n) throw std::invalid_argument("check_layer_coverage: jmax out of range");
    CoverageReport rep;
    rep.diff_size = d.size();
    for (int j = 0; j <= jmax; ++j) {
        LayerCoverage lc;
        lc.j = j;
        lc.total = binomial(f.n, j);
        for_each_subset(f.n, j, [&](ESet s) {
            if (d.contains(s))
                ++lc.covered;
            else if (!lc.first_uncovered)
                lc.first_uncovered = s;
        });
        if (lc.covered != lc.total) rep.all_covered = false;
        rep.layers.push_back(lc);
    }
    auto hist = d.layer_histogram();
    for (int j = f.k; j <= f.n; ++j) {
        if (hist[static_cast<std::size_t>(j)] != 0) {
            rep.oversize_free = false;
            for_each_subset(f.n, j, [&](ESet s) {
                if (!rep.oversize_example && d.contains(s)) rep.oversize_example = s;
            });
            break;
        }
    }
    return rep;
}

inline CoverageReport check_layer_coverage(const Family& f, int jmax, unsigned threads = 1) {
    return check_layer_coverage(f, difference_set(f, threads), jmax);
}

// A sunflower: members pairwise intersect in exactly `core`; petals are the
// members minus the core, listed in ascending mask order.
struct Sunflower {
    ESet core;
    std::vector<ESet> petals;
};

// All sunflowers of t members in f having X as one of their petals. The
// member contributing petal X is core + X, so sunflowers are enumerated by
// scanning members containing X and then choosing t-1 compatible members
// with pairwise disjoint petals.
inline std::vector<Sunflower> find_sunflowers_with_petal(const Family& f, ESet X, int t) {
    if (t < 2) throw std::invalid_argument("find_sunflowers_with_petal: t must be >= 2");
    std::vector<Sunflower> out;
    for (ESet p : f.sets) {
        if (!X.subset_of(p)) continue;
        ESet core = p.minus(X);
        std::vector<ESet> cands;  // petals of compatible members
        for (ESet q : f.sets) {
            if (q == p || !core.subset_of(q) || q.intersects(X)) continue;
            cands.push_back(q.minus(core));
        }
        // choose t-1 pairwise disjoint candidate petals
        std::vector<ESet> chosen;
        auto rec = [&](auto&& self, std::size_t from, ESet used) -> void {
            if (static_cast<int>(chosen.size()) == t - 1) {
                Sunflower s;
                s.core = core;
                s.petals = chosen;
                s.petals.push_back(X);
                std::sort(s.petals.begin(), s.petals.end());
                out.push_back(std::move(s));
                return;
            }
            for (std::size_t i = from; i < cands.size(); ++i) {
                if (cands[i].intersects(used)) continue;
                chosen.push_back(cands[i]);
                self(self, i + 1, used | cands[i]);
                chosen.pop_back();
            }
        };
        rec(rec, 0, ESet{});
    }
    std::sort(out.begin(), out.end(), [](const Sunflower& a, const Sunflower& b) {
        if (!(a.core == b.core)) return a.core < b.core;
        return a.petals < b.petals;
    });
    return out;
}

// Cheap boolean variant used by the equivalence cross-check.
inline bool has_two_petal_sunflower(const Family& f, ESet X) {
    for (ESet p : f.sets) {
        if (!X.subset_of(p)) continue;
        ESet core = p.minus(X);
        for (ESet q : f.sets)
            if (!(q == p) && core.subset_of(q) && !q.intersects(X)) return true;
    }
    return false;
}

struct SunflowerEquivReport {
    bool pass = true;
    std::optional<ESet> mismatch;
};

// Independent routes must agree: X is a petal of some 2-member sunflower
// exactly when X is a nonempty realized difference.
inline SunflowerEquivReport check_sunflower_equivalence(const Family& f, const DiffSet& d) {
    if (f.n > 16)
        throw ScaleGuardError("check_sunflower_equivalence: limited to n <= 16 (got n=" + std::to_string(f.n) + ")");
    SunflowerEquivReport rep;
    const std::uint64_t top = std::uint64_t{1} << f.n;
    for (std::uint64_t m = 1; m < top; ++m) {
        ESet X(m);
        if (has_two_petal_sunflower(f, X) != d.contains(X)) {
            rep.pass = false;
            rep.mismatch = X;
            return rep;
        }
    }
    return rep;
}

struct BoundsReport {
    std::size_t family_size = 0, diff_size = 0;
    bool lower_ok = true;       // |D| >= |F|
    bool intersecting = false;  // whether the upper bound applies
    std::uint64_t upper = 0;    // 2^(n-1)
    bool upper_ok = true;       // |D| <= 2^(n-1) when intersecting
    bool pass = true;
};

inline BoundsReport classical_bounds(const Family& f, unsigned threads = 1) {
    BoundsReport rep;
    rep.family_size = f.sets.size();
    DiffSet d = difference_set(f, threads);
    rep.diff_size = d.size();
    rep.lower_ok = rep.diff_size >= rep.family_size;
    rep.intersecting = is_intersecting(f, threads).pass;
    rep.upper = f.n >= 1 ? (std::uint64_t{1} << (f.n - 1)) : 1;
    rep.upper_ok = !rep.intersecting || rep.diff_size <= rep.upper;
    rep.pass = rep.lower_ok && rep.upper_ok;
    return rep;
}

struct SearchLimits {
    int max_k = 3;
    int max_n = 8;
};

namespace detail {

// Backtracking core shared by both searches: repeatedly pick the colex-first
// uncovered (k-1)-set X and try every pair (G = X+{g}, H ∋ g, H ∩ X = ∅)
// realizing X as a difference. `exact` enforces the difference-design side
// conditions (each X in at most one pair; no two members sharing a (k-1)-set
// either inside them or inside their common complement).
struct CoverSearcher {
    int n, k;
    bool exact;
    ESet full;
    std::vector<ESet> xs;
    std::vector<std::uint16_t> cnt;
    std::vector<ESet> fam;
    std::size_t covered = 0;
    std::optional<std::vector<ESet>> found;

    CoverSearcher(int n_, int k_, bool exact_) : n(n_), k(k_), exact(exact_) {
        full = ESet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
        xs = enumerate_subsets(n, k - 1);
        cnt.assign(std::size_t{1} << n, 0);
    }

    bool pair_ok(ESet s, ESet t) const {
        if (!s.intersects(t)) return false;
        if (!exact) return true;
        if ((s & t).size() >= k - 1) return false;
        if (n - (s | t).size() >= k - 1) return false;
        return true;
    }

    bool try_add(ESet s, std::vector<std::uint64_t>& touched) {
        for (ESet t : fam)
            if (!pair_ok(s, t)) return false;
        for (ESet t : fam) {
            for (ESet dm : {s.minus(t), t.minus(s)}) {
                if (dm.size() != k - 1) continue;
                std::uint16_t& c = cnt[dm.bits];
                if (exact && c >= 1) return false;
                if (++c == 1) ++covered;
                touched.push_back(dm.bits);
            }
        }
        fam.push_back(s);
        return true;
    }

    void undo(std::size_t fam_size, const std::vector<std::uint64_t>& touched) {
        while (fam.size() > fam_size) fam.pop_back();
        for (std::uint64_t m : touched)
            if (--cnt[m] == 0) --covered;
    }

    bool solve() {
        if (covered == xs.size()) {
            found = fam;
            return true;
        }
        ESet target;
        for (ESet x : xs) {
            if (cnt[x.bits] == 0) {
                target = x;
                break;
            }
        }
        const ESet rest = full.minus(target);
        for (std::uint64_t gb = rest.bits; gb != 0; gb &= gb - 1) {
            int g = std::countr_zero(gb);
            ESet G = target.with(g);
            bool stop = false;
            for_each_subset_of(rest.without(g), k - 1, [&](ESet body) {
                if (stop) return;
                ESet H = body.with(g);
                std::size_t fs = fam.size();
                std::vector<std::uint64_t> touched;
                bool ok = true;
                if (!contains(G)) ok = try_add(G, touched);
                if (ok && !contains(H)) ok = ok && try_add(H, touched);
                if (ok && fam.size() == fs) ok = false;  // no progress possible here
                if (ok && solve()) {
                    stop = true;
                    return;
                }
                undo(fs, touched);
            });
            if (stop) return true;
        }
        return false;
    }

    bool contains(ESet s) const {
        for (ESet t : fam)
            if (t == s) return true;
        return false;
    }
};

inline Family to_family(int n, int k, const std::vector<ESet>& sets) {
    FamilyBuilder b(n, k, "external");
    for (ESet s : sets) b.append(s, Label::External);
    return b.seal();
}

}  // namespace detail

// Exhaustive search for an intersecting k-uniform family on [n] in which
// every (k-1)-set is the petal of exactly one 2-member sunflower. Returns the
// family if one exists (none is expected at any scale).
inline std::optional<Family> search_diffdesign(int k, int n, SearchLimits lim = {}) {
    if (k < 2 || n < k) throw std::invalid_argument("search_diffdesign: need 2 <= k <= n");
    if (k > lim.max_k || n > lim.max_n)
        throw ScaleGuardError("search_diffdesign: k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                              " beyond desk scale (k <= " + std::to_string(lim.max_k) +
                              ", n <= " + std::to_string(lim.max_n) + ")");
    detail::CoverSearcher s(n, k, /*exact=*/true);
    if (!s.solve()) return std::nullopt;
    Family f = detail::to_family(n, k, *s.found);
    // Re-verify the reported family from scratch before trusting it.
    if (!is_intersecting(f).pass) throw std::logic_error("search_diffdesign: reported family not intersecting");
    for (ESet x : enumerate_subsets(n, k - 1)) {
        int c = 0;
        for (std::size_t i = 0; i < f.sets.size(); ++i)
            for (std::size_t j = i + 1; j < f.sets.size(); ++j)
                if (f.sets[i].minus(f.sets[j]) == x || f.sets[j].minus(f.sets[i]) == x) ++c;
        if (c != 1) throw std::logic_error("search_diffdesign: reported family fails the exactly-once condition");
    }
    return f;
}

// Exhaustive search for an intersecting k-uniform family on [n] whose
// difference set covers the whole (k-1)-layer. Desk scale: k = 2 only (the
// k = 3 frontier is certified through the Fano tightness check instead).
inline std::optional<Family> check_3k2_frontier(int k, int n, SearchLimits lim = {}) {
    if (k < 2 || n < k) throw std::invalid_argument("check_3k2_frontier: need 2 <= k <= n");
    if (k != 2 || n > lim.max_n)
        throw ScaleGuardError("check_3k2_frontier: exhaustive search supported for k = 2, n <= " +
                              std::to_string(lim.max_n) + " only");
    detail::CoverSearcher s(n, k, /*exact=*/false);
    if (!s.solve()) return std::nullopt;
    Family f = detail::to_family(n, k, *s.found);
    if (!is_intersecting(f).pass) throw std::logic_error("check_3k2_frontier: reported family not intersecting");
    DiffSet d = difference_set(f);
    for (ESet x : enumerate_subsets(n, k - 1))
        if (!d.contains(x)) throw std::logic_error("check_3k2_frontier: reported family misses a layer set");
    return f;
}

}  // namespace diffset
