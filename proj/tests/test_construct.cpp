#include <catch2/catch_amalgamated.hpp>

#include "diffset/construct.hpp"
#include "diffset/verify.hpp"

using namespace diffset;

namespace {

bool is_base_label(Label l) { return l == Label::R0 || l == Label::R1 || l == Label::R2; }

}  // namespace

TEST_CASE("class_Ri partitions the k-sets") {
    GroundSet g(6);
    Family r0 = class_Ri(g, 0), r1 = class_Ri(g, 1), r2 = class_Ri(g, 2);
    CHECK(r0.size() + r1.size() + r2.size() == 924);
    CHECK(r1.contains(ESet::of({0, 1, 2, 3, 4, 6})));  // sum 16
    for (const Family* f : {&r0, &r1, &r2})
        for (ESet s : f->sets) CHECK(s.size() == 6);
    GroundSet g4(4);
    CHECK(class_Ri(g4, 0).contains(ESet::of({0, 1, 2, 3})));  // sum 6
    CHECK_THROWS(class_Ri(g, 3));
}

TEST_CASE("odd_family") {
    GroundSet g(3);
    Family f = odd_family(g);
    CHECK(f.size() == 10);
    CHECK(f.contains(ESet::of({0, 1, 2})));
    CHECK(!f.contains(ESet::of({3, 4, 5})));
    for (ESet s : f.sets) CHECK(s.sum_mod(2) == 1);
    SECTION("exactly one of each complementary pair") {
        for (int k : {3, 5}) {
            GroundSet gk(k);
            Family fk = odd_family(gk);
            CHECK(fk.size() == binomial(gk.n(), k) / 2);
            for_each_subset(gk.n(), k, [&](ESet s) {
                CHECK(fk.contains(s) != fk.contains(gk.complement(s)));
            });
        }
    }
    CHECK_THROWS(odd_family(GroundSet(4)));
}

TEST_CASE("even_family base class and additions") {
    for (int k : {4, 6, 8}) {
        GroundSet g(k);
        Family f = even_family(g);
        const int base = base_residue(g.mod_case());
        const int added = addition_residue(g.mod_case());
        std::size_t base_count = 0;
        for (std::size_t i = 0; i < f.sets.size(); ++i) {
            if (is_base_label(f.labels[i])) {
                ++base_count;
                CHECK(f.sets[i].sum_mod(3) == base);
            } else {
                CHECK(f.sets[i].sum_mod(3) == added);
            }
        }
        // the base class is complete
        std::size_t expect_base = 0;
        for_each_subset(g.n(), k, [&](ESet s) {
            if (s.sum_mod(3) == base) {
                ++expect_base;
                CHECK(f.contains(s));
            }
        });
        CHECK(base_count == expect_base);
        CHECK(f.size() > expect_base);  // some additions were emitted
    }
}

TEST_CASE("even_family k=4 contents") {
    Family f = even_family(GroundSet(4));
    CHECK(f.contains(ESet::of({0, 1, 2, 3})));
    CHECK(f.n == 8);
    CHECK(f.k == 4);
    CHECK(f.kind == "even");
    CHECK_THROWS(even_family(GroundSet(5)));
    CHECK_THROWS(even_family(GroundSet(2)));
}

TEST_CASE("even_family k=6: a-row additions contain class A") {
    GroundSet g(6);
    Family f = even_family(g);
    const ESet A = g.cls(Residue::A);
    bool saw = false;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        if (f.labels[i] == Label::R0a1) {
            saw = true;
            CHECK(A.subset_of(f.sets[i]));
        }
        if (f.labels[i] == Label::R0a2) CHECK(!f.sets[i].intersects(A));
    }
    CHECK(saw);
}

TEST_CASE("base class parity facts") {
    // the base class is intersecting, and no addition-residue set is disjoint
    // from a base set
    for (int k : {4, 6, 8}) {
        GroundSet g(k);
        Family base = class_Ri(g, base_residue(g.mod_case()));
        Family add = class_Ri(g, addition_residue(g.mod_case()));
        CHECK(is_intersecting(base).pass);
        CHECK(are_cross_intersecting(add, base).pass);
    }
}

TEST_CASE("route_extremal covers every extremal X") {
    // Branch tallies by hand. With k = 4 or 6 an extremal X is a full class
    // plus at most one outside element, whose residue can never realize the
    // Direct sum; the first Direct routes appear at k = 8 (class + two).
    struct Want {
        int k, direct, add, del;
    };
    for (Want w : {Want{4, 0, 4, 4}, Want{6, 0, 12, 12}, Want{8, 30, 45, 45}}) {
        GroundSet g(w.k);
        AuxMatching aux = build_aux(g);
        Family f = even_family(g);
        int direct = 0, add = 0, del = 0;
        for_each_subset(g.n(), w.k - 1, [&](ESet X) {
            bool extremal = false;
            for (Residue r : {Residue::A, Residue::B, Residue::C})
                if (g.cls(r).subset_of(X)) extremal = true;
            if (!extremal) return;
            RouteOutcome out = route_extremal(g, aux, X);
            REQUIRE(out.f1.minus(out.f2) == X);
            REQUIRE(f.contains(out.f1));
            REQUIRE(f.contains(out.f2));
            if (out.emitted) REQUIRE(f.contains(*out.emitted));
            switch (out.action) {
                case RouteAction::Direct: ++direct; break;
                case RouteAction::Add: ++add; break;
                case RouteAction::Delete: ++del; break;
            }
        });
        CHECK(direct == w.direct);
        CHECK(add == w.add);
        CHECK(del == w.del);
    }
}

TEST_CASE("emitted additions stay pairwise intersecting at larger k") {
    // The expensive invariant behind the construction: base-vs-base and
    // base-vs-addition pairs are safe by residue sums alone, so the whole
    // family is intersecting iff the emitted additions are. Checking the
    // emissions directly reaches sizes where building the family would not be
    // practical, and k = 14 exercises the second Mod2 instance.
    for (int k : {10, 12, 14}) {
        GroundSet g(k);
        AuxMatching aux = build_aux(g);
        const int addr = addition_residue(g.mod_case());
        std::vector<ESet> emitted;
        for (Residue r : {Residue::A, Residue::B, Residue::C}) {
            ESet cls = g.cls(r);
            detail::for_each_subset_of(g.all().minus(cls), k - 1 - cls.size(), [&](ESet extra) {
                ESet X = cls | extra;
                RouteOutcome out = route_extremal(g, aux, X);
                REQUIRE(out.f1.minus(out.f2) == X);
                if (out.emitted) {
                    REQUIRE(out.emitted->sum_mod(3) == addr);
                    emitted.push_back(*out.emitted);
                }
            });
        }
        REQUIRE(emitted.size() > 100);
        std::size_t disjoint = 0;
        for (std::size_t i = 0; i < emitted.size(); ++i)
            for (std::size_t j = i + 1; j < emitted.size(); ++j)
                if (!emitted[i].intersects(emitted[j])) ++disjoint;
        REQUIRE(disjoint == 0);
    }
}

TEST_CASE("even_family is deterministic across thread counts") {
    GroundSet g(6);
    BuildOptions one, four;
    one.threads = 1;
    four.threads = 4;
    Family a = even_family(g, one), b = even_family(g, four);
    REQUIRE(a.sets == b.sets);
    REQUIRE(a.labels == b.labels);
}

TEST_CASE("fano_family") {
    Family f = fano_family();
    CHECK(f.size() == 7);
    CHECK(f.n == 7);
    CHECK(f.k == 3);
    for (ESet s : {ESet::of({0, 1, 2}), ESet::of({0, 3, 5}), ESet::of({0, 4, 6}), ESet::of({1, 3, 6}),
                   ESet::of({1, 4, 5}), ESet::of({2, 3, 4}), ESet::of({2, 5, 6})})
        CHECK(f.contains(s));
    // every two lines meet in exactly one point
    for (std::size_t i = 0; i < f.sets.size(); ++i)
        for (std::size_t j = i + 1; j < f.sets.size(); ++j) CHECK((f.sets[i] & f.sets[j]).size() == 1);
}

TEST_CASE("t_lift") {
    Family base = odd_family(GroundSet(3));
    Family lifted = t_lift(base, 2);
    CHECK(lifted.n == 7);
    CHECK(lifted.k == 4);
    CHECK(lifted.size() == base.size());
    CHECK(lifted.contains(ESet::of({0, 1, 2, 6})));
    for (ESet s : lifted.sets) CHECK(s.contains(6));

    Family same = t_lift(base, 1);
    CHECK(same.sets == base.sets);

    Family l3 = t_lift(even_family(GroundSet(4)), 3);
    CHECK(l3.k == 6);
    CHECK(l3.n == 10);
    for (std::size_t i = 0; i < l3.sets.size(); ++i)
        for (std::size_t j = i + 1; j < l3.sets.size(); ++j) CHECK((l3.sets[i] & l3.sets[j]).size() >= 3);

    CHECK_THROWS(t_lift(base, 0));
    CHECK_THROWS(t_lift(fano_family(), 2));  // n != 2k
}

TEST_CASE("family builder seals into colex order without duplicates") {
    FamilyBuilder b(6, 3, "external");
    b.append(ESet::of({3, 4, 5}), Label::External);
    b.append(ESet::of({0, 1, 2}), Label::R0);
    b.append(ESet::of({3, 4, 5}), Label::R1);  // dup keeps the first label
    Family f = b.seal();
    REQUIRE(f.size() == 2);
    CHECK(f.sets[0] == ESet::of({0, 1, 2}));
    CHECK(f.sets[1] == ESet::of({3, 4, 5}));
    CHECK(f.labels[1] == Label::External);
    CHECK(f.label_of(ESet::of({0, 1, 2})) == Label::R0);
    CHECK(!f.label_of(ESet::of({0, 1, 3})).has_value());

    FamilyBuilder bad(6, 3, "external");
    bad.append(ESet::of({0, 1}), Label::External);
    CHECK_THROWS(bad.seal());
    FamilyBuilder outside(6, 3, "external");
    outside.append(ESet::of({4, 5, 6}), Label::External);
    CHECK_THROWS(outside.seal());
}
