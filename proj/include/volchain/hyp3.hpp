#pragma once

#include <array>
#include <complex>
#include <variant>

#include "volchain/errors.hpp"

namespace volchain::hyp3 {

using Cx = std::complex<double>;

// Interior point of the upper half-space model, t > 0.
struct PointUHS {
    double x = 0, y = 0, t = 1;
    friend bool operator==(const PointUHS&, const PointUHS&) = default;
};

// Point of the sphere at infinity: a finite complex number or infinity.
class BoundaryPoint {
public:
    static BoundaryPoint infinity() { BoundaryPoint b; b.inf_ = true; return b; }
    static BoundaryPoint at(Cx z) { BoundaryPoint b; b.z_ = z; return b; }
    bool is_infinity() const { return inf_; }
    Cx value() const {
        if (inf_) throw InvalidPointError("boundary point at infinity has no finite value");
        return z_;
    }
    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.z_ == b.z_;
    }

private:
    Cx z_{0, 0};
    bool inf_ = false;
};

using Point = std::variant<PointUHS, BoundaryPoint>;

// Element of PSL(2,C).  Entries are renormalized to determinant one on
// construction; an element and its negative represent the same isometry.
class Isometry {
public:
    Isometry() : a_(1), b_(0), c_(0), d_(1) {}
    Isometry(Cx a, Cx b, Cx c, Cx d);

    Cx a() const { return a_; }
    Cx b() const { return b_; }
    Cx c() const { return c_; }
    Cx d() const { return d_; }

    Isometry inverse() const { return Isometry(d_, -b_, -c_, a_); }
    friend Isometry operator*(const Isometry& g, const Isometry& h) {
        return Isometry(g.a_ * h.a_ + g.b_ * h.c_, g.a_ * h.b_ + g.b_ * h.d_,
                        g.c_ * h.a_ + g.d_ * h.c_, g.c_ * h.b_ + g.d_ * h.d_);
    }

    // min over sign of the max-entry absolute difference from the identity
    double projective_distance_to_identity() const;

    static constexpr double kDetTol = 1e-9;

private:
    Cx a_, b_, c_, d_;
};

PointUHS apply(const Isometry& g, const PointUHS& p);
BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p);
Point apply(const Isometry& g, const Point& p);

// Projective (Klein) ball model coordinates; |p| <= 1 with equality exactly
// for ideal points.
struct KleinPoint {
    std::array<double, 3> p{0, 0, 0};
    bool ideal = false;
};

KleinPoint to_klein(const Point& p);
Point from_klein(const KleinPoint& k);

struct Tetrahedron {
    std::array<Point, 4> v;
};

// Lobachevsky function L(theta) = -int_0^theta log|2 sin u| du, evaluated by
// its Fourier series (1/2) sum sin(2 n theta)/n^2 truncated so the tail bound
// stays below the requested accuracy (1e-12 by default).
double lobachevsky(double theta, double series_tol = 1e-12);

// v3 = 3 L(pi/3), the supremal tetrahedron volume.
double regular_ideal_volume();

// Signed volume of the ideal tetrahedron with vertices (0, 1, z, infinity) in
// that order; the sign equals the sign of Im z, and real z degenerates to 0.
double ideal_tet_volume(Cx z);

// Signed hyperbolic volume of the straightened tetrahedron: vertices are
// mapped to the Klein model, where the straightening is the Euclidean convex
// hull, and the hyperbolic density (1-|x|^2)^{-2} is integrated by recursive
// subdivision quadrature.  Ideal vertices are truncated radially with the cut
// refined until the result stabilizes below tol.
double tet_volume(const Tetrahedron& t, double tol);

}  // namespace volchain::hyp3
