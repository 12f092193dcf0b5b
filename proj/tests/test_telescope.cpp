#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "volchain/telescope.hpp"

using namespace volchain;

TEST_CASE("annulus pair: torus cycle is closed, norm independent of n") {
    Dyadic norm_ref;
    for (int n : {1, 2, 5}) {
        AnnulusPair ap = annulus_pair(n);
        CHECK(boundary(ap.torus_cycle).empty());
        CHECK(ap.switch_count == 4);
        Dyadic nn = one_norm(ap.torus_cycle);
        if (norm_ref.is_zero()) norm_ref = nn;
        CHECK(nn == norm_ref);
        // annulus boundary: bottom circle minus top circle
        Chain ab = boundary(ap.t_A);
        CHECK(ab.support_size() == 4);
        CHECK(one_norm(ap.t_A) == Dyadic(4));
        CHECK(one_norm(ap.t_A_twisted) == Dyadic(4));
        ap.build->complex()->validate();
    }
}

TEST_CASE("twist stack: norm 4n and exact boundary") {
    for (int n : {1, 5}) {
        TwistStack ts = twist_stack(n);
        CHECK(one_norm(ts.chain) == Dyadic(4 * n));
        CHECK(boundary(ts.chain) == ts.build->torus_cycle());
        CHECK(boundary(boundary(ts.chain)).empty());
    }
}

TEST_CASE("wrap chain: 36 integral tetrahedra, norm 18, exact boundary") {
    for (int n : {1, 3, 10}) {
        WrapChain w = wrap_chain(n);
        CHECK(w.integral_tets == 36);
        CHECK(one_norm(w.chain) == Dyadic(18));
        CHECK(boundary(w.chain) == w.target_boundary);
        Chain resid = boundary(w.chain) +
                      w.build->level_cycle(1).scaled(Dyadic(1, 1)) -
                      w.build->level_cycle(0);
        CHECK(resid.empty());
    }
}

TEST_CASE("telescope: boundary exact and norm at most 37 while stack grows") {
    for (int n : {1, 2, 5, 17, 64}) {
        TelescopeChain tc = telescope(n);
        CHECK(boundary(tc.chain) == tc.target_boundary);
        CHECK(one_norm(tc.chain) <= Dyadic(37));
        CHECK(one_norm(tc.build->stack(0)) == Dyadic(4 * n));
    }
}

TEST_CASE("telescope: exact norm for n=1 at minimal K is 32") {
    TelescopeChain tc = telescope(1);
    CHECK(tc.K == 3);
    CHECK(one_norm(tc.chain) == Dyadic(32));
}

TEST_CASE("telescope rejects K below the minimum") {
    CHECK_THROWS_AS(telescope(5, 3), PreconditionError);
    CHECK_NOTHROW(telescope(5, 6));
}

TEST_CASE("intermediate identity: boundary of dn telescopes") {
    for (int n : {1, 2, 5, 17}) {
        TelescopeBuild b(n);
        Chain want = b.level_cycle(0) - b.level_cycle(b.levels()).scaled(Dyadic::half_pow(b.levels()));
        CHECK(boundary(b.dn()) == want);
    }
}

TEST_CASE("geometric-series identity over a sweep") {
    for (int n = 1; n <= 64; n += 7) {
        TelescopeBuild b(n);
        CHECK(boundary(b.dn()) ==
              b.level_cycle(0) - b.level_cycle(b.levels()).scaled(Dyadic::half_pow(b.levels())));
        CHECK(one_norm(b.telescope_chain()) <= Dyadic(37));
    }
}

TEST_CASE("wrap slabs are level shifts of each other") {
    TelescopeBuild b(3);
    for (int j = 0; j + 2 <= b.levels() - 1; ++j) {
        SimplicialMap w = b.level_shift(b.wrap(j), j);
        w.validate();
        CHECK(w.push(b.wrap(j)) == b.wrap(j + 1));
    }
}

TEST_CASE("twist map advances annulus copies") {
    TelescopeBuild b(4);
    for (int k = 0; k < 4; ++k) {
        SimplicialMap d = b.twist_map(b.annulus(0, k), 0);
        d.validate();
        CHECK(d.push(b.annulus(0, k)) == b.annulus(0, k + 1));
    }
}

TEST_CASE("dd = 0 on the telescope chains") {
    TelescopeBuild b(6);
    CHECK(boundary(boundary(b.stack(0))).empty());
    CHECK(boundary(boundary(b.wrap(0))).empty());
    CHECK(boundary(boundary(b.telescope_chain())).empty());
    b.complex()->validate();
}
