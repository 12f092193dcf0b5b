#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "volchain/surf.hpp"

using namespace volchain;
using namespace volchain::surf;

namespace {

// theta graph: two pants glued along three curves
PantsDecomposition genus2_theta() {
    return PantsDecomposition::from_curve_lists(2, {{"a", "b", "c"}, {"a", "b", "c"}});
}

// dumbbell: two handle pants joined by a bridge curve
PantsDecomposition genus2_dumbbell() {
    return PantsDecomposition::from_curve_lists(2, {{"l1", "l1", "m"}, {"l2", "l2", "m"}});
}

PantsDecomposition genus_chain(int g) {
    // handles at both ends, theta-like middle
    std::vector<std::array<std::string, 3>> pants;
    auto c = [](int i) { return "c" + std::to_string(i); };
    pants.push_back({"h0", "h0", c(0)});
    int next = 0;
    for (int i = 0; i < g - 2; ++i) {
        pants.push_back({c(next), c(next + 1), c(next + 2)});
        pants.push_back({c(next + 1), c(next + 2), c(next + 3)});
        next += 3;
    }
    pants.push_back({c(next), "h1", "h1"});
    return PantsDecomposition::from_curve_lists(g, pants);
}

}  // namespace

TEST_CASE("pants decomposition validation") {
    CHECK_THROWS_AS(PantsDecomposition::from_curve_lists(2, {{"a", "a", "a"}, {"b", "b", "c"}}),
                    MalformedDecompositionError);
    CHECK_THROWS_AS(PantsDecomposition::from_curve_lists(
                        3, {{"a", "a", "b"}, {"b", "c", "c"}, {"d", "d", "e"}, {"e", "f", "f"}}),
                    MalformedDecompositionError);  // disconnected
    CHECK_NOTHROW(genus2_theta());
    CHECK_NOTHROW(genus2_dumbbell());
    CHECK(genus2_dumbbell().is_handle("l1"));
    CHECK(!genus2_dumbbell().is_handle("m"));
}

TEST_CASE("adapted triangulation counts and closedness") {
    for (auto pd : {genus2_theta(), genus2_dumbbell()}) {
        AdaptedTriangulation at = build_adapted(pd);
        CHECK(at.vertex_count == 3);
        CHECK(at.arc_count == 15);
        CHECK(at.triangle_count == 10);
        CHECK(boundary(at.fundamental).empty());
        CHECK(one_norm(at.fundamental) == Dyadic(10));
        int chi = at.vertex_count - at.arc_count + at.triangle_count;
        CHECK(chi == 2 - 2 * pd.genus());
    }
    for (int g : {3, 4}) {
        AdaptedTriangulation at = build_adapted(genus_chain(g));
        CHECK(at.vertex_count == 3 * g - 3);
        CHECK(at.arc_count == 15 * g - 15);
        CHECK(at.triangle_count == 10 * g - 10);
        CHECK(boundary(at.fundamental).empty());
        CHECK(at.vertex_count - at.arc_count + at.triangle_count == 2 - 2 * g);
    }
}

TEST_CASE("standard triangulation counts, closedness, transversals") {
    for (int g : {2, 3, 4}) {
        for (int variant = 0; variant < (g == 2 ? 2 : 1); ++variant) {
            PantsDecomposition pd = g == 2 ? (variant == 0 ? genus2_theta() : genus2_dumbbell())
                                           : genus_chain(g);
            StandardTriangulation st = build_standard(pd);
            CHECK(st.triangle_count() == 16 * (g - 1));
            CHECK(one_norm(st.fundamental) == Dyadic(16 * (g - 1)));
            CHECK(boundary(st.fundamental).empty());
            for (const auto& c : pd.curves()) {
                const Transversal& tv = st.transversals.at(c);
                CHECK(tv.crossings == (pd.is_handle(c) ? 1 : 2));
                CHECK(!tv.path.empty());
            }
        }
    }
}

TEST_CASE("outfit relabels twists only") {
    PantsDecomposition pd = genus2_theta();
    StandardTriangulation st = build_standard(pd);
    Marking zero = Marking::zero(pd);
    CHECK(outfit(st, zero) == st);

    Marking m = zero;
    m.twists["a"] = 5;
    StandardTriangulation t5 = outfit(st, m);
    CHECK(t5.triangle_count() == st.triangle_count());
    CHECK(t5.fundamental == st.fundamental);
    CHECK(!(t5 == st));
    Marking back = m;
    back.twists["a"] = 0;
    CHECK(outfit(t5, back) == st);

    // twist n then twist -n on the same curve is the identity
    CHECK(twist(twist(st, "a", 7), "a", -7) == st);
    // twists along distinct curves commute
    CHECK(twist(twist(st, "a", 3), "b", -2) == twist(twist(st, "b", -2), "a", 3));
    // triangle count is twist-independent
    CHECK(twist(st, "a", 1000).triangle_count() == 16);

    PantsDecomposition other = genus2_dumbbell();
    CHECK_THROWS_AS(outfit(st, Marking::zero(other)), MarkingMismatchError);
}

TEST_CASE("twist moves add, zero twist rejected") {
    Marking m = Marking::zero(genus2_theta());
    Move t2{Move::Kind::Twist, "a", 2, 0};
    Move t3{Move::Kind::Twist, "a", 3, 0};
    Marking m5 = apply_move(apply_move(m, t2), t3);
    CHECK(m5.twists.at("a") == 5);
    CHECK_THROWS_AS(apply_move(m, Move{Move::Kind::Twist, "a", 0, 0}), PreconditionError);
    CHECK_THROWS_AS(apply_move(m, Move{Move::Kind::Twist, "zz", 1, 0}), MarkingMismatchError);
    // twist then inverse twist is the identity
    Marking back = apply_move(m5, Move{Move::Kind::Twist, "a", -5, 0});
    CHECK(back == m);
}

TEST_CASE("flip moves: involution and re-pairing") {
    // genus-1 flip on a handle curve
    Marking m = Marking::zero(genus2_dumbbell());
    m.twists["l1"] = 4;
    Move flip1{Move::Kind::Flip, "l1", 0, 1};
    Marking f = apply_move(m, flip1);
    CHECK(f.decomposition.has_curve("l1'"));
    CHECK(!f.decomposition.has_curve("l1"));
    CHECK(f.twists.at("l1'") == -4);
    Marking ff = apply_move(f, Move{Move::Kind::Flip, "l1'", 0, 1});
    CHECK(ff == m);

    // genus-0 flip re-pairs the two pants
    Marking n = Marking::zero(genus2_theta());
    Move flip_a{Move::Kind::Flip, "a", 0, 0};
    Marking g = apply_move(n, flip_a);
    CHECK(g.decomposition.has_curve("a'"));
    // new pants are (a', b, b) and (a', c, c): b became a handle curve
    CHECK(g.decomposition.is_handle("b"));
    CHECK(g.decomposition.is_handle("c"));
    Marking gg = apply_move(g, Move{Move::Kind::Flip, "a'", 0, 0});
    CHECK(gg == n);

    // flag mismatch is an error
    CHECK_THROWS_AS(apply_move(n, Move{Move::Kind::Flip, "a", 0, 1}), MarkingMismatchError);
}

TEST_CASE("hierarchy sizes") {
    HierarchyLedger empty;
    HierarchySizes s0 = hierarchy_sizes(empty);
    CHECK(s0.size == 0);
    CHECK(s0.nonannular == 0);
    CHECK(s0.four == 0);

    HierarchyLedger l{{{6, 5}, {4, 3}, {2, 7}}};
    HierarchySizes s = hierarchy_sizes(l);
    CHECK(s.size == 15);
    CHECK(s.nonannular == 8);
    CHECK(s.four == 3);
    CHECK(s.four <= s.nonannular);
    CHECK(s.nonannular <= s.size);

    HierarchyLedger bad{{{3, 2}}};
    CHECK_THROWS_AS(hierarchy_sizes(bad), PreconditionError);
}
