#include <catch2/catch_amalgamated.hpp>

#include "diffset/matchings.hpp"

using namespace diffset;

namespace {

template <class Fn>
void each_subset_of_mask(ESet mask, Fn&& fn) {
    std::uint64_t m = mask.bits, sub = m;
    while (true) {
        fn(ESet(sub));
        if (sub == 0) break;
        sub = (sub - 1) & m;
    }
}

int edges(const PairMatching& m, ESet U, ESet V) {
    int e = 0;
    for (int u : to_elements(U))
        if (m.matched(u) && V.contains(m.partner_of(u))) ++e;
    return e;
}

int ueff_of(const PairMatching& m, ESet U) { return U.size() - ((m.special_u && U.contains(*m.special_u)) ? 1 : 0); }
int veff_of(const PairMatching& m, ESet V) { return V.size() - ((m.special_v && V.contains(*m.special_v)) ? 1 : 0); }

void check_involution(const GroundSet& g, const AuxMatching& aux) {
    for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
        const PairMatching& m = aux.pair(pk);
        CHECK(m.u_side == g.cls(m.u_class));
        CHECK(m.v_side == g.cls(m.v_class));
        int matched = 0;
        for (int x = 0; x < g.n(); ++x) {
            if (!m.matched(x)) continue;
            ++matched;
            CHECK(m.partner_of(m.partner_of(x)) == x);
            bool on_u = m.u_side.contains(x), on_v = m.v_side.contains(x);
            CHECK((on_u || on_v));
            CHECK((on_u ? m.v_side.contains(m.partner_of(x)) : m.u_side.contains(m.partner_of(x))));
        }
        CHECK(matched == 2 * m.s);
        if (m.special_u) CHECK(!m.matched(*m.special_u));
        if (m.special_v) CHECK(!m.matched(*m.special_v));
    }
}

}  // namespace

TEST_CASE("build_aux shapes") {
    SECTION("k = 6") {
        AuxMatching aux = build_aux(GroundSet(6));
        CHECK(aux.ab.shape == Shape::Z1);
        CHECK(aux.bc.shape == Shape::Z1);
        CHECK(aux.ca.shape == Shape::Z1);
        CHECK(aux.ab.s == 4);
        CHECK(aux.bc.s == 4);
        CHECK(aux.ca.s == 4);
        CHECK(!aux.bc.special_u);
        CHECK(!aux.bc.special_v);
        for (int a = 0; a < 4; ++a) {
            CHECK(aux.ab.partner_of(3 * a) == 3 * a + 1);
            CHECK(aux.bc.partner_of(3 * a + 1) == 3 * a + 2);
            CHECK(aux.ca.partner_of(3 * a + 2) == 3 * a);
        }
    }
    SECTION("k = 4") {
        AuxMatching aux = build_aux(GroundSet(4));
        CHECK(aux.ab.shape == Shape::Z1);
        CHECK(aux.ab.s == 3);
        CHECK(aux.ab.partner_of(6) == 7);  // the extra edge {6p, 6p+1}
        CHECK(aux.bc.shape == Shape::Z2);
        CHECK(aux.bc.s == 2);
        REQUIRE(aux.bc.special_u);
        CHECK(*aux.bc.special_u == 7);
        CHECK(aux.bc.partner_of(1) == 2);
        CHECK(aux.bc.partner_of(4) == 5);
        CHECK(aux.ca.shape == Shape::Z3);
        CHECK(aux.ca.s == 2);
        REQUIRE(aux.ca.special_v);
        CHECK(*aux.ca.special_v == 6);
    }
    SECTION("k = 8") {
        AuxMatching aux = build_aux(GroundSet(8));
        CHECK(aux.bc.shape == Shape::Z1);
        CHECK(aux.bc.s == 5);
        for (int a = 0; a <= 4; ++a) CHECK(aux.bc.partner_of(3 * a + 1) == 3 * a + 2);
        CHECK(aux.ab.shape == Shape::Z2);
        CHECK(aux.ab.s == 5);
        REQUIRE(aux.ab.special_u);
        CHECK(*aux.ab.special_u == 15);
        CHECK(aux.ca.shape == Shape::Z3);
        REQUIRE(aux.ca.special_v);
        CHECK(*aux.ca.special_v == 15);
        CHECK(!aux.ca.matched(15));
    }
    SECTION("involutions and sides") {
        for (int k : {4, 6, 8, 10, 12}) check_involution(GroundSet(k), build_aux(GroundSet(k)));
    }
    SECTION("guards") {
        CHECK_THROWS(build_aux(GroundSet(5)));
        CHECK_THROWS(build_aux(GroundSet(2)));
    }
}

TEST_CASE("matched_pairs") {
    AuxMatching aux = build_aux(GroundSet(6));
    CHECK(matched_pairs(aux, PairKind::BC, ESet::of({1, 4}), ESet::of({2, 11})) == 1);
    CHECK(matched_pairs(aux, PairKind::BC, ESet{}, ESet::of({2, 5, 8, 11})) == 0);
    CHECK(matched_pairs(aux, PairKind::BC, ESet::of({1, 4, 7, 10}), ESet::of({2, 5, 8, 11})) == 4);
    CHECK_THROWS(matched_pairs(aux, PairKind::BC, ESet::of({0}), ESet{}));  // 0 is not on the B side
}

TEST_CASE("parity identity matches the direct count exhaustively") {
    // e(U,V) + e(U',V') over side complements, all partitions
    for (int k : {4, 6, 8}) {
        AuxMatching aux = build_aux(GroundSet(k));
        for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
            const PairMatching& m = aux.pair(pk);
            each_subset_of_mask(m.u_side, [&](ESet U) {
                each_subset_of_mask(m.v_side, [&](ESet V) {
                    ESet Uc = m.u_side.minus(U), Vc = m.v_side.minus(V);
                    int direct = (matched_pairs(m, U, V) + matched_pairs(m, Uc, Vc)) % 2;
                    REQUIRE(parity_sum_identity(m, U, V) == direct);
                });
            });
        }
    }
}

TEST_CASE("parity identity spot values") {
    AuxMatching aux = build_aux(GroundSet(6));
    CHECK(parity_sum_identity(aux, PairKind::BC, ESet::of({1, 4}), ESet::of({2, 5})) == 0);
    CHECK(parity_sum_identity(aux, PairKind::BC, ESet{}, ESet{}) == 0);
    CHECK(parity_sum_identity(aux, PairKind::BC, ESet::of({1}), ESet{}) == 1);
}

TEST_CASE("lemma_add frozen picks") {
    AuxMatching aux6 = build_aux(GroundSet(6));
    CHECK(lemma_add(aux6, PairKind::BC, ESet::of({1, 4}), ESet::of({2})) == 8);
    CHECK(lemma_add(aux6, PairKind::BC, ESet{}, ESet{}) == 2);
    AuxMatching aux4 = build_aux(GroundSet(4));
    // U = {1,7} holds the unmatched B vertex, so the effective U size is 1 and
    // the target parity is min(1, 0) = 0; v = 2 raises e to 1, v = 5 keeps 0.
    CHECK(lemma_add(aux4, PairKind::BC, ESet::of({1, 7}), ESet{}) == 5);
}

TEST_CASE("lemma_add agrees with a brute-force scan everywhere") {
    for (int k : {4, 6}) {
        AuxMatching aux = build_aux(GroundSet(k));
        for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
            const PairMatching& m = aux.pair(pk);
            each_subset_of_mask(m.u_side, [&](ESet U) {
                each_subset_of_mask(m.v_side, [&](ESet V) {
                    int target = std::min(ueff_of(m, U), veff_of(m, V)) % 2;
                    int expect = -1;
                    for (int v : to_elements(m.v_side.minus(V))) {
                        if (m.special_v && v == *m.special_v) continue;
                        if (edges(m, U, V.with(v)) % 2 != target) continue;
                        if (m.neighbors(V.with(v)).subset_of(U)) continue;
                        expect = v;
                        break;
                    }
                    if (expect >= 0)
                        REQUIRE(lemma_add(m, U, V) == expect);
                    else
                        REQUIRE_THROWS_AS(lemma_add(m, U, V), ConstructionError);
                });
            });
        }
    }
}

TEST_CASE("lemma_add is total and sound on its domain") {
    // domain: effective |U| + effective |V| <= s - 1
    for (int k : {4, 6, 8}) {
        AuxMatching aux = build_aux(GroundSet(k));
        for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
            const PairMatching& m = aux.pair(pk);
            each_subset_of_mask(m.u_side, [&](ESet U) {
                each_subset_of_mask(m.v_side, [&](ESet V) {
                    int ueff = ueff_of(m, U), veff = veff_of(m, V);
                    if (ueff + veff > m.s - 1) return;
                    int v = -1;
                    REQUIRE_NOTHROW(v = lemma_add(m, U, V));
                    REQUIRE(m.v_side.contains(v));
                    REQUIRE(!V.contains(v));
                    if (m.special_v) REQUIRE(v != *m.special_v);
                    REQUIRE(edges(m, U, V.with(v)) % 2 == std::min(ueff, veff) % 2);
                    REQUIRE(!m.neighbors(V.with(v)).subset_of(U));
                });
            });
        }
    }
}

TEST_CASE("lemma_delete frozen picks") {
    AuxMatching aux6 = build_aux(GroundSet(6));
    ESet U = ESet::of({1, 4, 7, 10}), V = ESet::of({2, 5});
    CHECK(lemma_delete(aux6, PairKind::BC, U, V, 0) == 7);
    CHECK(lemma_delete(aux6, PairKind::BC, U, V, 1) == 1);
    AuxMatching aux4 = build_aux(GroundSet(4));
    CHECK(lemma_delete(aux4, PairKind::BC, ESet::of({1, 4, 7}), ESet::of({2, 5}), 1) == 1);
    // with 7 excluded as unmatched, no deletion can keep the count even here
    CHECK_THROWS_AS(lemma_delete(aux4, PairKind::BC, ESet::of({1, 4, 7}), ESet::of({2, 5}), 0), ConstructionError);
}

TEST_CASE("lemma_delete agrees with a brute-force scan everywhere") {
    for (int k : {4, 6}) {
        AuxMatching aux = build_aux(GroundSet(k));
        for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
            const PairMatching& m = aux.pair(pk);
            each_subset_of_mask(m.u_side, [&](ESet U) {
                each_subset_of_mask(m.v_side, [&](ESet V) {
                    for (int target : {0, 1}) {
                        int expect = -1;
                        for (int u : to_elements(U)) {
                            if (m.special_u && u == *m.special_u) continue;
                            if (edges(m, U.without(u), V) % 2 == target) {
                                expect = u;
                                break;
                            }
                        }
                        if (expect >= 0)
                            REQUIRE(lemma_delete(m, U, V, target) == expect);
                        else
                            REQUIRE_THROWS_AS(lemma_delete(m, U, V, target), ConstructionError);
                    }
                });
            });
        }
    }
}

TEST_CASE("lemma_delete reaches both parities on its domain") {
    // domain: |U| + |V| >= s + 2 and the partner image of U not inside V
    for (int k : {4, 6, 8}) {
        AuxMatching aux = build_aux(GroundSet(k));
        for (PairKind pk : {PairKind::AB, PairKind::BC, PairKind::CA}) {
            const PairMatching& m = aux.pair(pk);
            each_subset_of_mask(m.u_side, [&](ESet U) {
                each_subset_of_mask(m.v_side, [&](ESet V) {
                    if (U.size() + V.size() < m.s + 2) return;
                    if (m.neighbors(U).subset_of(V)) return;
                    for (int target : {0, 1}) {
                        int u = -1;
                        REQUIRE_NOTHROW(u = lemma_delete(m, U, V, target));
                        REQUIRE(U.contains(u));
                        if (m.special_u) REQUIRE(u != *m.special_u);
                        REQUIRE(edges(m, U.without(u), V) % 2 == target);
                    }
                });
            });
        }
    }
}
