#include <algorithm>
#include <array>
#include <cmath>

#include "volchain/hyp3.hpp"

namespace volchain::hyp3 {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 mid(const Vec3& a, const Vec3& b) {
    return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
}
double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// 4-point Gauss-Legendre on [0,1]
constexpr double kGx[4] = {0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
                           0.9305681557970262};
constexpr double kGw[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                           0.1739274225687269};

struct QuadRule {
    // collapsed tensor rule on the reference tetrahedron, 64 points
    std::array<Vec3, 64> pts;   // barycentric coordinates (l1,l2,l3)
    std::array<double, 64> wts; // sum to 1/6
    QuadRule() {
        int k = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int l = 0; l < 4; ++l) {
                    double u = kGx[i], v = kGx[j], w = kGx[l];
                    double l1 = u;
                    double l2 = v * (1 - u);
                    double l3 = w * (1 - u) * (1 - v);
                    pts[k] = {l1, l2, l3};
                    wts[k] = kGw[i] * kGw[j] * kGw[l] * (1 - u) * (1 - u) * (1 - v);
                    ++k;
                }
    }
};
const QuadRule& rule() {
    static const QuadRule r;
    return r;
}

struct Cell {
    std::array<Vec3, 4> v;
};

double density(const Vec3& x) {
    double n = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    double d = 1.0 - n;
    return 1.0 / (d * d);
}

double rule_eval(const Cell& c) {
    const QuadRule& r = rule();
    Vec3 e1 = sub(c.v[1], c.v[0]);
    Vec3 e2 = sub(c.v[2], c.v[0]);
    Vec3 e3 = sub(c.v[3], c.v[0]);
    double jac = std::fabs(det3(e1, e2, e3));
    if (jac == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < 64; ++i) {
        const Vec3& l = r.pts[i];
        Vec3 x{c.v[0][0] + l[0] * e1[0] + l[1] * e2[0] + l[2] * e3[0],
               c.v[0][1] + l[0] * e1[1] + l[1] * e2[1] + l[2] * e3[1],
               c.v[0][2] + l[0] * e1[2] + l[1] * e2[2] + l[2] * e3[2]};
        s += r.wts[i] * density(x);
    }
    return s * jac;
}

void split(const Cell& c, std::array<Cell, 8>& out) {
    Vec3 m01 = mid(c.v[0], c.v[1]), m02 = mid(c.v[0], c.v[2]), m03 = mid(c.v[0], c.v[3]);
    Vec3 m12 = mid(c.v[1], c.v[2]), m13 = mid(c.v[1], c.v[3]), m23 = mid(c.v[2], c.v[3]);
    out[0] = Cell{{c.v[0], m01, m02, m03}};
    out[1] = Cell{{m01, c.v[1], m12, m13}};
    out[2] = Cell{{m02, m12, c.v[2], m23}};
    out[3] = Cell{{m03, m13, m23, c.v[3]}};
    out[4] = Cell{{m01, m02, m03, m13}};
    out[5] = Cell{{m01, m02, m12, m13}};
    out[6] = Cell{{m02, m03, m13, m23}};
    out[7] = Cell{{m02, m12, m13, m23}};
}

struct Integrator {
    long nodes = 0;
    long node_cap;
    double sum = 0;
    double err = 0;
    bool capped = false;

    void integrate(const Cell& c, double parent_val, double budget, int depth) {
        std::array<Cell, 8> kids;
        split(c, kids);
        double fine = 0;
        std::array<double, 8> vals{};
        for (int i = 0; i < 8; ++i) {
            vals[i] = rule_eval(kids[i]);
            fine += vals[i];
        }
        nodes += 8;
        double e = std::fabs(fine - parent_val);
        if (e <= budget || depth >= 48 ||
            e <= 1e-15 * std::fabs(fine) || capped) {
            sum += fine;
            err += e;
            return;
        }
        if (nodes > node_cap) {
            capped = true;
            sum += fine;
            err += e;
            return;
        }
        double tot = 0;
        for (double v : vals) tot += v;
        for (int i = 0; i < 8; ++i) {
            double share = tot > 0 ? vals[i] / tot : 0.125;
            integrate(kids[i], vals[i], std::max(budget * share, 1e-18), depth + 1);
        }
    }
};

double integrate_hull(const std::array<Vec3, 4>& v, double tol, long node_cap) {
    Cell root{v};
    double coarse = rule_eval(root);
    Integrator wk;
    wk.node_cap = node_cap;
    wk.integrate(root, coarse, tol, 0);
    if (wk.capped)
        throw ToleranceNotMetError("quadrature node cap reached", wk.sum, wk.err);
    return wk.sum;
}

}  // namespace

double tet_volume(const Tetrahedron& t, double tol) {
    if (!(tol > 0)) throw PreconditionError("tet_volume: tolerance must be positive");

    std::array<Vec3, 4> k{};
    std::array<bool, 4> ideal{};
    for (int i = 0; i < 4; ++i) {
        KleinPoint kp = to_klein(t.v[i]);
        k[i] = kp.p;
        double n = kp.p[0] * kp.p[0] + kp.p[1] * kp.p[1] + kp.p[2] * kp.p[2];
        // points within roundoff of the sphere are handled as ideal
        ideal[i] = kp.ideal || n >= 1.0 - 1e-13;
    }

    // repeated vertices: degenerate, exactly zero
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (k[i] == k[j]) return 0.0;

    // canonical order fixes the quadrature path; the input order only
    // contributes the permutation parity, so swapping two vertices negates
    // the result exactly
    std::array<int, 4> perm{0, 1, 2, 3};
    std::sort(perm.begin(), perm.end(), [&](int a, int b) { return k[a] < k[b]; });
    int parity = 1;
    {
        std::array<int, 4> q = perm;
        for (int i = 0; i < 4; ++i) {
            while (q[i] != i) {
                std::swap(q[i], q[q[i]]);
                parity = -parity;
            }
        }
    }
    std::array<Vec3, 4> s{k[perm[0]], k[perm[1]], k[perm[2]], k[perm[3]]};
    std::array<bool, 4> sideal{ideal[perm[0]], ideal[perm[1]], ideal[perm[2]], ideal[perm[3]]};

    double det = det3(sub(s[1], s[0]), sub(s[2], s[0]), sub(s[3], s[0]));
    if (det == 0.0) return 0.0;
    double sign = (det > 0 ? 1.0 : -1.0) * parity;

    bool any_ideal = sideal[0] || sideal[1] || sideal[2] || sideal[3];
    const long cap = 3'000'000;
    if (!any_ideal) return sign * integrate_hull(s, tol, cap);

    // radial truncation: pull each ideal vertex toward the barycenter of the
    // opposite face, shrinking the cut until the value stabilizes
    auto truncated = [&](double eps) {
        std::array<Vec3, 4> w = s;
        for (int i = 0; i < 4; ++i) {
            if (!sideal[i]) continue;
            Vec3 bary{0, 0, 0};
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                for (int m = 0; m < 3; ++m) bary[m] += s[j][m] / 3.0;
            }
            for (int m = 0; m < 3; ++m) w[i][m] = (1 - eps) * s[i][m] + eps * bary[m];
        }
        return w;
    };

    double eps = 1e-3;
    double prev = integrate_hull(truncated(eps), tol / 4, cap);
    for (int it = 0; it < 40; ++it) {
        eps /= 8;
        double cur = integrate_hull(truncated(eps), tol / 4, cap);
        if (std::fabs(cur - prev) < tol / 2) return sign * cur;
        prev = cur;
    }
    throw ToleranceNotMetError("ideal truncation did not stabilize", sign * prev, tol);
}

}  // namespace volchain::hyp3
