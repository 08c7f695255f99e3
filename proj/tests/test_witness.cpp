#include <catch2/catch_amalgamated.hpp>

#include "diffset/witness.hpp"

using namespace diffset;

namespace {

Family star(int n, int k, int center) {
    FamilyBuilder b(n, k, "external");
    for_each_subset(n, k, [&](ESet s) {
        if (s.contains(center)) b.append(s, Label::External);
    });
    return b.seal();
}

void require_valid(const Family& f, ESet X, const WitnessPair& w) {
    REQUIRE(w.f1.minus(w.f2) == X);
    REQUIRE(w.f1.size() == f.k);
    REQUIRE(w.f2.size() == f.k);
    REQUIRE(f.contains(w.f1));
    REQUIRE(f.contains(w.f2));
}

}  // namespace

TEST_CASE("witness_oracle") {
    Family fano = fano_family();
    SECTION("covers every 2-subset of the Fano ground set") {
        for_each_subset(7, 2, [&](ESet X) {
            auto w = witness_oracle(fano, X);
            REQUIRE(w);
            require_valid(fano, X, *w);
        });
    }
    SECTION("no singleton difference between Fano lines") {
        for (int x = 0; x < 7; ++x) CHECK(!witness_oracle(fano, ESet::of({x})));
    }
    SECTION("full star never sheds its center") {
        Family s = star(6, 3, 0);
        CHECK(!witness_oracle(s, ESet::of({0, 1})));
        CHECK(witness_oracle(s, ESet::of({1, 2})));
    }
    CHECK_THROWS(witness_oracle(fano, ESet::of({0, 1, 2})));
}

TEST_CASE("witness_normal frozen value") {
    GroundSet g(6);
    Family f = even_family(g);
    ESet X = ESet::of({0, 1, 2, 3, 4});
    WitnessPair w = witness_normal(g, f, X);
    CHECK(w.f1 == ESet::of({0, 1, 2, 3, 4, 6}));
    CHECK(w.f2 == ESet::of({5, 6, 8, 9, 10, 11}));
    // deterministic
    WitnessPair w2 = witness_normal(g, f, X);
    CHECK(w.f1 == w2.f1);
    CHECK(w.f2 == w2.f2);
}

TEST_CASE("witness_normal handles every non-extremal X at k=6") {
    GroundSet g(6);
    Family f = even_family(g);
    for_each_subset(g.n(), g.k() - 1, [&](ESet X) {
        for (Residue r : {Residue::A, Residue::B, Residue::C})
            if (g.cls(r).subset_of(X)) return;
        WitnessPair w = witness_normal(g, f, X);
        require_valid(f, X, w);
    });
}

TEST_CASE("witness_normal rejects bad input") {
    GroundSet g(6);
    Family f = even_family(g);
    CHECK_THROWS(witness_normal(g, f, ESet::of({0, 1})));
    CHECK_THROWS(witness_normal(g, f, ESet::of({0, 3, 6, 9, 1})));  // extremal
}

TEST_CASE("witness_extremal handles every extremal X at k=4") {
    GroundSet g(4);
    Family f = even_family(g);
    for_each_subset(g.n(), g.k() - 1, [&](ESet X) {
        bool extremal = false;
        for (Residue r : {Residue::A, Residue::B, Residue::C})
            if (g.cls(r).subset_of(X)) extremal = true;
        if (!extremal) return;
        WitnessPair w = witness_extremal(g, f, ExtremalContext::of(g, X));
        require_valid(f, X, w);
    });
}

TEST_CASE("witness_small singleton frozen value") {
    GroundSet g(6);
    Family f = even_family(g);
    SmallWitnessStats st;
    WitnessPair w = witness_small(g, f, ESet::of({0}), &st);
    CHECK(w.f1 == ESet::of({0, 1, 2, 4, 5, 7}));
    CHECK(w.f2 == ESet::of({1, 2, 3, 4, 5, 7}));
    CHECK(!st.used_oracle);
}

TEST_CASE("witness_small is constructive for the even families") {
    for (int k : {4, 6}) {
        GroundSet g(k);
        Family f = even_family(g);
        for (int j = 1; j <= k - 2; ++j) {
            for_each_subset(g.n(), j, [&](ESet X) {
                SmallWitnessStats st;
                WitnessPair w = witness_small(g, f, X, &st);
                require_valid(f, X, w);
                REQUIRE(!st.used_oracle);
            });
        }
    }
}

TEST_CASE("witness_small on the odd family") {
    GroundSet g(5);
    Family f = odd_family(g);
    int fallbacks = 0;
    for (int j = 1; j <= 3; ++j) {
        for_each_subset(g.n(), j, [&](ESet X) {
            SmallWitnessStats st;
            WitnessPair w = witness_small(g, f, X, &st);
            require_valid(f, X, w);
            if (st.used_oracle) ++fallbacks;
        });
    }
    INFO("oracle fallbacks: " << fallbacks);
    CHECK(fallbacks == 0);
}

TEST_CASE("witness_small rejects bad sizes") {
    GroundSet g(4);
    Family f = even_family(g);
    CHECK_THROWS(witness_small(g, f, ESet{}));
    CHECK_THROWS(witness_small(g, f, ESet::of({0, 1, 2})));  // k-1 belongs elsewhere
}

TEST_CASE("witness_any covers all sizes for the constructions") {
    SECTION("odd k=3") {
        Family f = odd_family(GroundSet(3));
        for (int j = 0; j <= 2; ++j) {
            for_each_subset(6, j, [&](ESet X) {
                auto w = witness_any(f, X);
                REQUIRE(w);
                if (j > 0) require_valid(f, X, *w);
                REQUIRE(witness_oracle(f, X));
            });
        }
    }
    SECTION("even k=4") {
        Family f = even_family(GroundSet(4));
        for (int j = 0; j <= 3; ++j) {
            for_each_subset(8, j, [&](ESet X) {
                auto w = witness_any(f, X);
                REQUIRE(w);
                if (j > 0) require_valid(f, X, *w);
            });
        }
    }
    SECTION("external families fall back to the oracle") {
        Family fano = fano_family();
        CHECK(witness_any(fano, ESet::of({1, 2})));
        CHECK(!witness_any(fano, ESet::of({1})));
    }
    SECTION("empty X pairs a member with itself") {
        Family fano = fano_family();
        auto w = witness_any(fano, ESet{});
        REQUIRE(w);
        CHECK(w->f1 == w->f2);
    }
    CHECK_THROWS(witness_any(fano_family(), ESet::of({0, 1, 2})));
}
