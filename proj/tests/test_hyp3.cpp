#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "volchain/hyp3.hpp"

using namespace volchain::hyp3;
using volchain::InvalidIsometryError;

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double range(double a, double b) { return a + (b - a) * uniform(); }
};

PointUHS rnd_point(Rng& rng) {
    return PointUHS{rng.range(-2, 2), rng.range(-2, 2), std::exp(rng.range(-1.5, 1.5))};
}

Isometry rnd_isometry(Rng& rng) {
    // product of a few near-unipotent factors keeps entries moderate
    Isometry g;
    for (int i = 0; i < 3; ++i) {
        Cx u(rng.range(-0.8, 0.8), rng.range(-0.8, 0.8));
        Cx v(rng.range(-0.8, 0.8), rng.range(-0.8, 0.8));
        g = g * Isometry(Cx(1), u, Cx(0), Cx(1)) * Isometry(Cx(1), Cx(0), v, Cx(1));
    }
    return g;
}
}  // namespace

TEST_CASE("apply: identity, axis translation, inversion") {
    Isometry id;
    PointUHS p{0.3, -0.4, 2.0};
    CHECK(apply(id, p) == p);

    double e = std::exp(1.0);
    Isometry diag(Cx(std::sqrt(e)), Cx(0), Cx(0), Cx(1.0 / std::sqrt(e)));
    PointUHS q = apply(diag, PointUHS{0, 0, 1});
    CHECK(q.x == doctest::Approx(0));
    CHECK(q.y == doctest::Approx(0));
    CHECK(q.t == doctest::Approx(e));

    Isometry inv(Cx(0), Cx(1), Cx(1), Cx(0));
    BoundaryPoint zero = BoundaryPoint::at(Cx(0, 0));
    CHECK(apply(inv, zero).is_infinity());
    CHECK(apply(inv, BoundaryPoint::infinity()) == BoundaryPoint::at(Cx(0, 0)));
}

TEST_CASE("singular matrices are rejected") {
    CHECK_THROWS_AS(Isometry(Cx(1), Cx(1), Cx(1), Cx(1)), InvalidIsometryError);
}

TEST_CASE("to_klein: basepoint, north pole, round trips") {
    KleinPoint o = to_klein(PointUHS{0, 0, 1});
    CHECK(o.p[0] == doctest::Approx(0));
    CHECK(o.p[1] == doctest::Approx(0));
    CHECK(o.p[2] == doctest::Approx(0));

    KleinPoint inf = to_klein(BoundaryPoint::infinity());
    CHECK(inf.ideal);
    CHECK(inf.p[2] == doctest::Approx(1));

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        PointUHS p = rnd_point(rng);
        Point back = from_klein(to_klein(p));
        REQUIRE(std::holds_alternative<PointUHS>(back));
        PointUHS q = std::get<PointUHS>(back);
        CHECK(std::fabs(q.x - p.x) < 1e-12);
        CHECK(std::fabs(q.y - p.y) < 1e-12);
        CHECK(std::fabs(q.t - p.t) < 1e-12);
    }
    // ideal round trip
    BoundaryPoint b = BoundaryPoint::at(Cx(0.75, -1.25));
    Point back = from_klein(to_klein(b));
    REQUIRE(std::holds_alternative<BoundaryPoint>(back));
    CHECK(std::abs(std::get<BoundaryPoint>(back).value() - b.value()) < 1e-12);
}

TEST_CASE("Lobachevsky: zeros, maximum, identities") {
    CHECK(lobachevsky(0.0) == 0.0);
    CHECK(std::fabs(lobachevsky(kPi)) < 1e-12);
    CHECK(std::fabs(lobachevsky(kPi / 2)) < 1e-12);
    CHECK(lobachevsky(kPi / 6) == doctest::Approx(0.5074708032).epsilon(1e-9));
    // maximum at pi/6 equals half of v3
    CHECK(std::fabs(2 * lobachevsky(kPi / 6) - regular_ideal_volume()) < 1e-11);

    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        double th = rng.range(-4.0, 4.0);
        CHECK(std::fabs(lobachevsky(2 * th) - 2 * lobachevsky(th) -
                        2 * lobachevsky(th + kPi / 2)) < 1e-10);
        CHECK(std::fabs(lobachevsky(-th) + lobachevsky(th)) < 1e-12);
        CHECK(std::fabs(lobachevsky(th + kPi) - lobachevsky(th)) < 1e-12);
    }
}

TEST_CASE("v3 is stable across series truncations") {
    double base = 3 * lobachevsky(kPi / 3, 1e-12);
    CHECK(base == doctest::Approx(1.0149416064096536).epsilon(1e-12));
    for (double tol : {1e-10, 1e-11, 1e-13}) {
        CHECK(std::fabs(3 * lobachevsky(kPi / 3, tol) - base) < 1e-10);
    }
}

TEST_CASE("ideal tetrahedron volumes") {
    Cx zr = std::polar(1.0, kPi / 3);
    CHECK(ideal_tet_volume(zr) == doctest::Approx(regular_ideal_volume()).epsilon(1e-12));
    CHECK(ideal_tet_volume(Cx(0.5, 0)) == 0.0);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Cx z(rng.range(-2, 2), rng.range(0.05, 2));
        CHECK(ideal_tet_volume(z) == doctest::Approx(-ideal_tet_volume(std::conj(z))).epsilon(1e-12));
        CHECK(ideal_tet_volume(z) > 0);
        CHECK(ideal_tet_volume(z) <= regular_ideal_volume() + 1e-12);
    }
}

TEST_CASE("tet_volume: coplanar, regular ideal, orientation") {
    // four points on the geodesic plane over the real axis
    Tetrahedron flat{{PointUHS{0, 0, 1}, PointUHS{1, 0, 1}, PointUHS{0.5, 0, 2},
                      PointUHS{-1, 0, 0.7}}};
    CHECK(std::fabs(tet_volume(flat, 1e-6)) < 1e-10);

    Tetrahedron reg{{Point{BoundaryPoint::at(Cx(0, 0))}, Point{BoundaryPoint::at(Cx(1, 0))},
                     Point{BoundaryPoint::at(std::polar(1.0, kPi / 3))},
                     Point{BoundaryPoint::infinity()}}};
    double v = tet_volume(reg, 1e-4);
    CHECK(v == doctest::Approx(1.0149416).epsilon(2e-4));

    // swapping two vertices negates exactly
    Tetrahedron sw = reg;
    std::swap(sw.v[0], sw.v[1]);
    CHECK(tet_volume(sw, 1e-4) == -v);

    // ideal vertex order (0,1,z,inf) matches the cross-ratio convention
    Tetrahedron conj{{Point{BoundaryPoint::at(Cx(0, 0))}, Point{BoundaryPoint::at(Cx(1, 0))},
                      Point{BoundaryPoint::at(std::polar(1.0, -kPi / 3))},
                      Point{BoundaryPoint::infinity()}}};
    CHECK(tet_volume(conj, 1e-4) == doctest::Approx(-1.0149416).epsilon(2e-4));
}

TEST_CASE("tet_volume: additivity under edge split") {
    Rng rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        PointUHS a = rnd_point(rng), b = rnd_point(rng), c = rnd_point(rng), d = rnd_point(rng);
        double tol = 1e-6;
        double whole = tet_volume(Tetrahedron{{a, b, c, d}}, tol);
        // split along the edge (a,b) at a Klein-segment point
        KleinPoint ka = to_klein(a), kb = to_klein(b);
        KleinPoint km;
        for (int i = 0; i < 3; ++i) km.p[i] = 0.5 * (ka.p[i] + kb.p[i]);
        Point m = from_klein(km);
        double v1 = tet_volume(Tetrahedron{{a, m, c, d}}, tol);
        double v2 = tet_volume(Tetrahedron{{m, b, c, d}}, tol);
        CHECK(std::fabs(whole - v1 - v2) < 2 * tol + 1e-9);
    }
}

TEST_CASE("tet_volume: isometry invariance, antisymmetry, bound") {
    Rng rng(123);
    double v3 = regular_ideal_volume();
    for (int rep = 0; rep < 40; ++rep) {
        Tetrahedron t{{rnd_point(rng), rnd_point(rng), rnd_point(rng), rnd_point(rng)}};
        double tol = 1e-6;
        double v = tet_volume(t, tol);
        CHECK(std::fabs(v) <= v3 + 10 * tol);

        Isometry g = rnd_isometry(rng);
        Tetrahedron gt{{volchain::hyp3::apply(g, t.v[0]), volchain::hyp3::apply(g, t.v[1]),
                        volchain::hyp3::apply(g, t.v[2]), volchain::hyp3::apply(g, t.v[3])}};
        CHECK(std::fabs(tet_volume(gt, tol) - v) < 10 * tol);

        Tetrahedron sw = t;
        std::swap(sw.v[1], sw.v[3]);
        CHECK(tet_volume(sw, tol) == -v);
        Tetrahedron ev = t;
        std::swap(ev.v[0], ev.v[1]);
        std::swap(ev.v[2], ev.v[3]);
        CHECK(tet_volume(ev, tol) == v);
    }
}
