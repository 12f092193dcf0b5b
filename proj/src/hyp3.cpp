#include "volchain/hyp3.hpp"

#include <algorithm>
#include <cmath>

namespace volchain::hyp3 {

Isometry::Isometry(Cx a, Cx b, Cx c, Cx d) : a_(a), b_(b), c_(c), d_(d) {
    Cx det = a_ * d_ - b_ * c_;
    if (std::abs(det) < 1e-12)
        throw InvalidIsometryError("matrix is not normalizable, |det| = " +
                                   std::to_string(std::abs(det)));
    Cx s = std::sqrt(det);
    a_ /= s; b_ /= s; c_ /= s; d_ /= s;
    Cx check = a_ * d_ - b_ * c_;
    if (std::abs(check - Cx(1, 0)) > kDetTol)
        throw InvalidIsometryError("determinant did not normalize to one");
}

double Isometry::projective_distance_to_identity() const {
    auto dist = [&](double s) {
        double m = 0;
        m = std::max(m, std::abs(a_ - Cx(s, 0)));
        m = std::max(m, std::abs(b_));
        m = std::max(m, std::abs(c_));
        m = std::max(m, std::abs(d_ - Cx(s, 0)));
        return m;
    };
    return std::min(dist(1.0), dist(-1.0));
}

PointUHS apply(const Isometry& g, const PointUHS& p) {
    if (!(p.t > 0)) throw InvalidPointError("upper half-space point needs t > 0");
    Cx z(p.x, p.y);
    Cx num = g.a() * z + g.b();
    Cx den = g.c() * z + g.d();
    double t2 = p.t * p.t;
    double D = std::norm(den) + std::norm(g.c()) * t2;
    Cx znew = (num * std::conj(den) + g.a() * std::conj(g.c()) * t2) / D;
    double tnew = p.t / D;
    if (!(tnew > 0) || !std::isfinite(tnew))
        throw InvalidPointError("isometry application left the model (numeric overflow)");
    return PointUHS{znew.real(), znew.imag(), tnew};
}

BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p) {
    // convention: with c == 0 infinity maps to infinity, otherwise to a/c
    if (p.is_infinity()) {
        if (g.c() == Cx(0, 0)) return BoundaryPoint::infinity();
        return BoundaryPoint::at(g.a() / g.c());
    }
    Cx z = p.value();
    Cx den = g.c() * z + g.d();
    if (den == Cx(0, 0)) return BoundaryPoint::infinity();
    return BoundaryPoint::at((g.a() * z + g.b()) / den);
}

Point apply(const Isometry& g, const Point& p) {
    if (std::holds_alternative<PointUHS>(p)) return apply(g, std::get<PointUHS>(p));
    return apply(g, std::get<BoundaryPoint>(p));
}

KleinPoint to_klein(const Point& p) {
    KleinPoint k;
    if (std::holds_alternative<BoundaryPoint>(p)) {
        const auto& b = std::get<BoundaryPoint>(p);
        k.ideal = true;
        if (b.is_infinity()) {
            k.p = {0, 0, 1};  // north pole
            return k;
        }
        Cx z = b.value();
        double n = std::norm(z);
        double s = n + 1.0;
        if (!std::isfinite(s) || s == 0) {
            k.p = {0, 0, 1};
            return k;
        }
        k.p = {2 * z.real() / s, 2 * z.imag() / s, (n - 1.0) / s};
        return k;
    }
    const auto& q = std::get<PointUHS>(p);
    if (!(q.t > 0)) throw InvalidPointError("upper half-space point needs t > 0");
    // inversion through the sphere of radius sqrt(2) at (0,0,-1), then a
    // reflection in the horizontal plane: (0,0,1) -> origin, infinity -> north pole
    double s = q.x * q.x + q.y * q.y + (q.t + 1.0) * (q.t + 1.0);
    if (!std::isfinite(s)) {
        k.p = {0, 0, 1};
        k.ideal = true;
        return k;
    }
    std::array<double, 3> u{2 * q.x / s, 2 * q.y / s, 1.0 - 2 * (q.t + 1.0) / s};
    double un = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    double f = 2.0 / (1.0 + un);
    k.p = {f * u[0], f * u[1], f * u[2]};
    double kn = k.p[0] * k.p[0] + k.p[1] * k.p[1] + k.p[2] * k.p[2];
    if (kn > 1.0) {
        // numerical drift just past the sphere: clamp within one ulp, reject more
        if (kn > 1.0 + 1e-12) throw InvalidPointError("Klein coordinates left the closed ball");
        double r = std::sqrt(kn);
        for (auto& c : k.p) c /= r;
        k.ideal = true;
    } else if (kn == 1.0) {
        k.ideal = true;
    }
    return k;
}

Point from_klein(const KleinPoint& k) {
    double kn = k.p[0] * k.p[0] + k.p[1] * k.p[1] + k.p[2] * k.p[2];
    if (kn > 1.0 + 1e-12) throw InvalidPointError("Klein point outside the closed ball");
    bool ideal = k.ideal || kn >= 1.0;
    if (ideal) {
        // inverse stereographic projection from the north pole
        if (std::abs(1.0 - k.p[2]) < 1e-15) return BoundaryPoint::infinity();
        double d = 1.0 - k.p[2];
        return BoundaryPoint::at(Cx(k.p[0] / d, k.p[1] / d));
    }
    double f = 1.0 / (1.0 + std::sqrt(1.0 - kn));
    std::array<double, 3> u{k.p[0] * f, k.p[1] * f, k.p[2] * f};
    // invert the ball chart: reflect, then invert through the same sphere
    std::array<double, 3> r{u[0], u[1], -u[2]};
    double s = r[0] * r[0] + r[1] * r[1] + (r[2] + 1.0) * (r[2] + 1.0);
    double x = 2 * r[0] / s;
    double y = 2 * r[1] / s;
    double t = -1.0 + 2 * (r[2] + 1.0) / s;
    return PointUHS{x, y, t};
}

}  // namespace volchain::hyp3
