#pragma once

// Ground-set arithmetic for k-uniform set families on N = {0,...,n-1}.
// A subset is an n-bit mask with element i at bit i. Numeric order on masks
// coincides with colexicographic order on subsets, which is the canonical
// order used everywhere (family files, reports, tie-breaking).

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffset {

struct ESet {
    std::uint64_t bits = 0;

    constexpr ESet() = default;
    constexpr explicit ESet(std::uint64_t raw) : bits(raw) {}

    static constexpr ESet of(std::initializer_list<int> elems) {
        std::uint64_t b = 0;
        for (int e : elems) b |= std::uint64_t{1} << e;
        return ESet(b);
    }

    constexpr int size() const { return std::popcount(bits); }
    constexpr bool empty() const { return bits == 0; }
    constexpr bool contains(int e) const { return (bits >> e) & 1u; }
    constexpr bool subset_of(ESet o) const { return (bits & ~o.bits) == 0; }
    constexpr bool intersects(ESet o) const { return (bits & o.bits) != 0; }

    constexpr ESet with(int e) const { return ESet(bits | (std::uint64_t{1} << e)); }
    constexpr ESet without(int e) const { return ESet(bits & ~(std::uint64_t{1} << e)); }
    constexpr ESet operator&(ESet o) const { return ESet(bits & o.bits); }
    constexpr ESet operator|(ESet o) const { return ESet(bits | o.bits); }
    constexpr ESet minus(ESet o) const { return ESet(bits & ~o.bits); }

    // Smallest element; undefined on the empty set.
    constexpr int min_element() const { return std::countr_zero(bits); }

    int sum() const {
        int total = 0;
        for (std::uint64_t b = bits; b != 0; b &= b - 1) total += std::countr_zero(b);
        return total;
    }

    // (sum of elements) mod m
    int sum_mod(int m) const { return sum() % m; }

    constexpr auto operator<=>(const ESet&) const = default;
};

inline std::vector<int> to_elements(ESet s) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(s.size()));
    for (std::uint64_t b = s.bits; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

inline std::string to_string(ESet s, int display_offset = 0) {
    std::string out = "{";
    bool first = true;
    for (int e : to_elements(s)) {
        if (!first) out += ',';
        out += std::to_string(e + display_offset);
        first = false;
    }
    out += '}';
    return out;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    // Pascal row by row; every C(n,k) with n <= 64 fits in 64 bits.
    std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = std::min(i, k); j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    return row[static_cast<std::size_t>(k)];
}

// Visits every j-subset of {0,...,n-1} exactly once in colex order
// (= ascending mask order), via the same-popcount successor trick.
template <class Fn>
void for_each_subset(int n, int j, Fn&& fn) {
    if (n < 0 || n > 64 || j < 0 || j > n)
        throw std::invalid_argument("for_each_subset: need 0 <= j <= n <= 64, got n=" + std::to_string(n) +
                                    " j=" + std::to_string(j));
    if (j == 0) {
        fn(ESet(0));
        return;
    }
    const std::uint64_t limit = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    std::uint64_t x = (j == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << j) - 1);
    while (true) {
        fn(ESet(x));
        if (j == n) break;
        std::uint64_t c = x & (~x + 1);
        std::uint64_t r = x + c;
        if (r < x) break;  // wrapped past the top block
        x = r | (((x ^ r) >> 2) / c);
        if (x > limit) break;
    }
}

inline std::vector<ESet> enumerate_subsets(int n, int j) {
    std::vector<ESet> out;
    out.reserve(static_cast<std::size_t>(binomial(n, j)));
    for_each_subset(n, j, [&](ESet s) { out.push_back(s); });
    return out;
}

namespace detail {

// Same traversal over the j-subsets of an arbitrary pool mask.
template <class Fn>
void for_each_subset_of(ESet pool, int j, Fn&& fn) {
    std::vector<int> elems = to_elements(pool);
    const int n = static_cast<int>(elems.size());
    if (j > n) return;
    for_each_subset(n, j, [&](ESet idx) {
        ESet s;
        for (std::uint64_t b = idx.bits; b != 0; b &= b - 1) s = s.with(elems[static_cast<std::size_t>(std::countr_zero(b))]);
        fn(s);
    });
}

}  // namespace detail

enum class Residue { A, B, C };
enum class ModCase { Mod0, Mod1, Mod2 };

inline const char* to_string(Residue r) {
    switch (r) {
        case Residue::A: return "A";
        case Residue::B: return "B";
        default: return "C";
    }
}

// The paired ground set N = {0,...,2k-1} with the mod-3 residue partition
// A/B/C. p = floor(k/3); the class sizes per k mod 3 are
//   Mod0: |A|=|B|=|C|=2p,  Mod1: |A|=|B|=2p+1, |C|=2p,
//   Mod2: |A|=2p+2, |B|=|C|=2p+1.
class GroundSet {
public:
    explicit GroundSet(int k) : k_(k), n_(2 * k), p_(k / 3) {
        if (k < 2) throw std::invalid_argument("GroundSet: k must be >= 2");
        if (n_ > 64) throw std::invalid_argument("GroundSet: n = 2k exceeds the 64-bit mask budget");
        switch (k % 3) {
            case 0: case_ = ModCase::Mod0; break;
            case 1: case_ = ModCase::Mod1; break;
            default: case_ = ModCase::Mod2; break;
        }
        for (int x = 0; x < n_; ++x) cls_[x % 3] = cls_[x % 3].with(x);
        all_ = ESet(n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1));
    }

    int k() const { return k_; }
    int n() const { return n_; }
    int p() const { return p_; }
    ModCase mod_case() const { return case_; }
    ESet all() const { return all_; }

    ESet cls(Residue r) const { return cls_[static_cast<int>(r)]; }

    Residue residue_class(int x) const {
        if (x < 0 || x >= n_)
            throw std::invalid_argument("residue_class: element " + std::to_string(x) + " out of range [0," +
                                        std::to_string(n_) + ")");
        return static_cast<Residue>(x % 3);
    }

    ESet complement(ESet s) const {
        if (!s.subset_of(all_)) throw std::invalid_argument("complement: set not within the ground set");
        return all_.minus(s);
    }

private:
    int k_, n_, p_;
    ModCase case_;
    ESet cls_[3];
    ESet all_;
};

// A (k-1)-set X together with its complement and per-class intersection
// counts a = |X cap A|, b = |X cap B|, c = |X cap C|.
struct ExtremalContext {
    ESet x, y;
    int a = 0, b = 0, c = 0;

    static ExtremalContext of(const GroundSet& g, ESet X) {
        if (!X.subset_of(g.all()) || X.size() != g.k() - 1)
            throw std::invalid_argument("ExtremalContext: X must be a (k-1)-subset of the ground set");
        ExtremalContext ctx;
        ctx.x = X;
        ctx.y = g.complement(X);
        ctx.a = (X & g.cls(Residue::A)).size();
        ctx.b = (X & g.cls(Residue::B)).size();
        ctx.c = (X & g.cls(Residue::C)).size();
        return ctx;
    }
};

}  // namespace diffset
