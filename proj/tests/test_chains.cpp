#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "volchain/builders.hpp"
#include "volchain/complex.hpp"
#include "volchain/dyadic.hpp"

using namespace volchain;

namespace {

// splitmix64: deterministic cross-platform sampling for property tests
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
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

// a couple of standalone complexes used in several tests

// single 2-simplex with distinct vertices
struct Tri {
    DeltaComplex cx;
    CellId t;
    std::array<int, 3> v;
    Tri() {
        int a = cx.add_vertex("a"), b = cx.add_vertex("b"), c = cx.add_vertex("c");
        int ab = cx.add_cell(1, std::array{a, b}, std::array{b, a});
        int ac = cx.add_cell(1, std::array{a, c}, std::array{c, a});
        int bc = cx.add_cell(1, std::array{b, c}, std::array{c, b});
        t = CellId{2, cx.add_cell(2, std::array{a, b, c}, std::array{bc, ac, ab})};
        v = {a, b, c};
    }
};

// a small random-ish 3-dimensional complex: the standard 3-simplex
struct Tet {
    DeltaComplex cx;
    CellId t;
    Tet() {
        int v0 = cx.add_vertex(), v1 = cx.add_vertex(), v2 = cx.add_vertex(),
            v3 = cx.add_vertex();
        auto edge = [&](int a, int b) {
            return cx.add_cell(1, std::array{a, b}, std::array{b, a});
        };
        int e01 = edge(v0, v1), e02 = edge(v0, v2), e03 = edge(v0, v3);
        int e12 = edge(v1, v2), e13 = edge(v1, v3), e23 = edge(v2, v3);
        auto tri = [&](int a, int b, int c, int bc, int ac, int ab) {
            return cx.add_cell(2, std::array{a, b, c}, std::array{bc, ac, ab});
        };
        int f123 = tri(v1, v2, v3, e23, e13, e12);
        int f023 = tri(v0, v2, v3, e23, e03, e02);
        int f013 = tri(v0, v1, v3, e13, e03, e01);
        int f012 = tri(v0, v1, v2, e12, e02, e01);
        t = CellId{3, cx.add_cell(3, std::array{v0, v1, v2, v3},
                                  std::array{f123, f023, f013, f012})};
        cx.validate();
    }
};

}  // namespace

TEST_CASE("dyadic arithmetic is exact and normalized") {
    Dyadic a(3);
    Dyadic b(1, 2);  // 1/4
    CHECK(a + b == Dyadic(13, 2));
    CHECK((a - a).is_zero());
    CHECK(Dyadic(6, 1) == Dyadic(3));  // 6/2 normalizes to 3
    CHECK(Dyadic(1, 3) + Dyadic(1, 3) == Dyadic(1, 2));
    CHECK((Dyadic(-5) * Dyadic(1, 1)).to_string() == "-5/2^1");
    CHECK(Dyadic(3).to_string() == "3/2^0");
    CHECK(Dyadic(1, 4) < Dyadic(1, 3));
    CHECK(Dyadic(37) >= Dyadic(37));
    CHECK((-Dyadic(1, 5)).abs() == Dyadic(1, 5));
    CHECK(Dyadic(5, 2).to_double() == doctest::Approx(1.25));
}

TEST_CASE("boundary of a single 2-simplex is the alternating edge sum") {
    Tri m;
    Chain c(&m.cx);
    c.add(m.t, Dyadic(1));
    Chain b = boundary(c);
    CHECK(b.support_size() == 3);
    auto f = m.cx.faces(m.t);
    CHECK(b.coeff(CellId{1, f[0]}) == Dyadic(1));
    CHECK(b.coeff(CellId{1, f[1]}) == Dyadic(-1));
    CHECK(b.coeff(CellId{1, f[2]}) == Dyadic(1));
    CHECK(boundary(b).empty());
}

TEST_CASE("one_norm examples") {
    Tri m;
    Chain z(&m.cx);
    CHECK(one_norm(z).is_zero());
    auto f = m.cx.faces(m.t);
    Chain c(&m.cx);
    c.add(CellId{1, f[0]}, Dyadic(3));
    c.add(CellId{1, f[1]}, Dyadic(-2));
    CHECK(one_norm(c) == Dyadic(5));
    Chain d(&m.cx);
    d.add(CellId{1, f[0]}, Dyadic(1, 1));
    d.add(CellId{1, f[1]}, Dyadic(1, 2));
    CHECK(one_norm(d) == Dyadic(3, 2));
}

TEST_CASE("one_norm is subadditive and scales") {
    Tet m;
    Rng rng(12345);
    auto rnd_chain = [&](int dim) {
        Chain c(&m.cx);
        for (int i = 0; i < m.cx.size(dim); ++i)
            c.add(CellId{dim, i}, Dyadic(rng.below(9) - 4, rng.below(3)));
        return c;
    };
    for (int rep = 0; rep < 50; ++rep) {
        Chain a = rnd_chain(2), b = rnd_chain(2);
        CHECK(one_norm(a + b) <= one_norm(a) + one_norm(b));
        Dyadic s(rng.below(7) - 3, rng.below(2));
        CHECK(one_norm(a.scaled(s)) == one_norm(a) * s.abs());
    }
}

TEST_CASE("dd = 0 on random chains of the tetrahedron") {
    Tet m;
    Rng rng(991);
    for (int rep = 0; rep < 50; ++rep) {
        Chain c(&m.cx);
        for (int i = 0; i < m.cx.size(3); ++i)
            c.add(CellId{3, i}, Dyadic(rng.below(11) - 5, rng.below(4)));
        CHECK(boundary(boundary(c)).empty());
    }
}

TEST_CASE("chains reject foreign cells") {
    Tri a, b;
    Chain c(&a.cx);
    CHECK_THROWS_AS(c.add(CellId{2, 99}, Dyadic(1)), WrongComplexError);
    Chain d(&b.cx);
    d.add(b.t, Dyadic(1));
    CHECK_THROWS_AS(c += d, WrongComplexError);
}

TEST_CASE("pushforward drops degenerate cells") {
    Tri m;
    DeltaComplex dst;
    int p = dst.add_vertex("p");
    int q = dst.add_vertex("q");
    int pq = dst.add_cell(1, std::array{p, q}, std::array{q, p});
    SimplicialMap f(&m.cx, &dst);
    f.set(CellId{0, m.v[0]}, CellId{0, p});
    f.set(CellId{0, m.v[1]}, CellId{0, p});
    f.set(CellId{0, m.v[2]}, CellId{0, q});
    auto fcs = m.cx.faces(m.t);
    f.set_degenerate(CellId{1, fcs[2]});           // (a,b) collapses
    f.set(CellId{1, fcs[1]}, CellId{1, pq});       // (a,c)
    f.set(CellId{1, fcs[0]}, CellId{1, pq});       // (b,c)
    f.set_degenerate(m.t);
    Chain c(&m.cx);
    c.add(m.t, Dyadic(1));
    CHECK(f.push(c).empty());
    Chain e(&m.cx);
    e.add(CellId{1, fcs[0]}, Dyadic(1));
    e.add(CellId{1, fcs[2]}, Dyadic(5));
    Chain img = f.push(e);
    CHECK(img.support_size() == 1);
    CHECK(img.coeff(CellId{1, pq}) == Dyadic(1));
}

TEST_CASE("prism over a triangle: 3 tetrahedra, boundary = top - bottom + side") {
    Tri m;
    Chain c(&m.cx);
    c.add(m.t, Dyadic(1));
    PrismResult pr = prism_over(m.cx, c);
    CHECK(one_norm(pr.prism) == Dyadic(3));
    Chain bd = boundary(pr.prism);
    CHECK(bd == pr.top - pr.bottom + pr.side);
    CHECK(one_norm(pr.side) == Dyadic(6));  // three side squares, two triangles each
    CHECK(boundary(bd).empty());
    pr.complex->validate();
}

TEST_CASE("prism over a closed 1-cycle: square annulus, boundary = top - bottom") {
    // circle with two vertices and two arcs
    DeltaComplex circle;
    int a = circle.add_vertex("a"), b = circle.add_vertex("b");
    int e0 = circle.add_cell(1, std::array{a, b}, std::array{b, a});
    int e1 = circle.add_cell(1, std::array{b, a}, std::array{a, b});
    Chain z(&circle);
    z.add(CellId{1, e0}, Dyadic(1));
    z.add(CellId{1, e1}, Dyadic(1));
    CHECK(boundary(z).empty());
    PrismResult pr = prism_over(circle, z);
    CHECK(one_norm(pr.prism) == Dyadic(4));  // two squares, two triangles each
    CHECK(boundary(pr.prism) == pr.top - pr.bottom);
}

TEST_CASE("single edge prism: |U| = 2 and boundary identity") {
    DeltaComplex path;
    int a = path.add_vertex(), b = path.add_vertex();
    int e = path.add_cell(1, std::array{a, b}, std::array{b, a});
    Chain c(&path);
    c.add(CellId{1, e}, Dyadic(1));
    PrismResult pr = prism_over(path, c);
    CHECK(one_norm(pr.prism) == Dyadic(2));
    CHECK(boundary(pr.prism) == pr.top - pr.bottom + pr.side);
    CHECK(pr.side.support_size() == 2);  // two vertical edges
    CHECK(boundary(boundary(pr.prism)).empty());
}

TEST_CASE("surface editor flip keeps the boundary ledger exact") {
    // square a,b / d,c with diagonal a->c, product-style orientation
    DeltaComplex cx;
    int a = cx.add_vertex("a"), b = cx.add_vertex("b"), c = cx.add_vertex("c"),
        d = cx.add_vertex("d");
    auto edge = [&](int u, int v) {
        return cx.add_cell(1, std::array{u, v}, std::array{v, u});
    };
    int ab = edge(a, b), bc = edge(b, c), ad = edge(a, d), dc = edge(d, c);
    int diag = edge(a, c);
    int t1 = cx.add_cell(2, std::array{a, b, c}, std::array{bc, diag, ab});
    int t2 = cx.add_cell(2, std::array{a, d, c}, std::array{dc, diag, ad});
    Chain layer(&cx);
    layer.add(CellId{2, t1}, Dyadic(1));
    layer.add(CellId{2, t2}, Dyadic(-1));
    Chain bd0 = boundary(layer);

    SurfaceEditor ed(&cx, layer);
    CellId nd = ed.flip(CellId{1, diag});
    CHECK(nd.dim == 1);
    // layer boundary is unchanged, block ledger matches the layer difference
    CHECK(boundary(ed.layer()) == bd0);
    CHECK(boundary(ed.block()) == ed.layer() - layer);
    CHECK(one_norm(ed.block()) == Dyadic(1));
    // the old diagonal no longer appears in the layer's faces
    for (const auto& [cell, coeff] : ed.layer()) {
        auto f = cx.faces(cell);
        for (int i = 0; i < 3; ++i) CHECK(f[i] != diag);
    }
    // flipping the new diagonal back restores a layer with the same boundary
    SurfaceEditor ed2(&cx, ed.layer());
    ed2.flip(nd);
    CHECK(boundary(ed2.layer()) == bd0);
    CHECK(boundary(ed2.block()) == ed2.layer() - ed.layer());
}

TEST_CASE("surface editor insert/remove vertex round trip") {
    Tri m;
    Chain layer(&m.cx);
    layer.add(m.t, Dyadic(1));
    SurfaceEditor ed(&m.cx, layer);
    int v = ed.insert_vertex(m.t, "center");
    CHECK(ed.layer().support_size() == 3);
    CHECK(boundary(ed.block()) == ed.layer() - layer);
    CellId back = ed.remove_vertex(v);
    CHECK(ed.layer().support_size() == 1);
    CHECK(ed.layer().coeff(back) == Dyadic(1));
    CHECK(boundary(ed.block()) == ed.layer() - layer);
    CHECK(boundary(ed.layer()) == boundary(layer));
}
