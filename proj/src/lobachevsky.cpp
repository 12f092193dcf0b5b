#include <cmath>

#include "volchain/hyp3.hpp"

namespace volchain::hyp3 {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Direct Fourier sum (1/2) sum_{n=1..N} sin(2 n r)/n^2 for r in [pi/4, pi/2].
// The Dirichlet-kernel tail bound 1/(2 sin r (N+1)^2) picks the truncation.
double series(double r, double tol) {
    double phi = 2.0 * r;
    double sr = std::sin(r);
    double need = 1.0 / (2.0 * sr * tol);
    double nf = std::sqrt(need);
    long N = static_cast<long>(nf) + 1;
    double c = std::cos(phi), s = std::sin(phi);
    double cn = c, sn = s;  // cos(n phi), sin(n phi)
    double sum = 0.0, comp = 0.0;
    for (long n = 1; n <= N; ++n) {
        if ((n & 8191) == 0) {
            // resynchronize the rotation recurrence
            cn = std::cos(phi * static_cast<double>(n));
            sn = std::sin(phi * static_cast<double>(n));
        }
        double term = sn / (static_cast<double>(n) * static_cast<double>(n));
        double yy = term - comp;
        double tt = sum + yy;
        comp = (tt - sum) - yy;
        sum = tt;
        double cn2 = cn * c - sn * s;
        sn = sn * c + cn * s;
        cn = cn2;
    }
    return 0.5 * sum;
}

double eval(double theta, double tol) {
    // reduce by pi-periodicity into [-pi/2, pi/2], then use oddness
    double r = theta - kPi * std::round(theta / kPi);
    double sign = 1.0;
    if (r < 0) { r = -r; sign = -1.0; }
    if (r < 1e-12) {
        // asymptotic value theta (1 - log 2 theta); the correction is O(r^3)
        return r == 0.0 ? 0.0 : sign * r * (1.0 - std::log(2.0 * r));
    }
    if (r >= kPi / 4.0) return sign * series(r, tol);
    // duplication: L(r) = L(2r)/2 + L(pi/2 - r), with pi/2 - r in (pi/4, pi/2)
    return sign * (0.5 * eval(2.0 * r, tol) + series(kPi / 2.0 - r, tol));
}

}  // namespace

double lobachevsky(double theta, double series_tol) {
    if (!(series_tol > 0)) throw PreconditionError("lobachevsky: tolerance must be positive");
    return eval(theta, series_tol);
}

double regular_ideal_volume() {
    static const double v3 = 3.0 * lobachevsky(kPi / 3.0);
    return v3;
}

double ideal_tet_volume(Cx z) {
    if (z.imag() == 0.0) return 0.0;
    if (z == Cx(0, 0) || z == Cx(1, 0)) return 0.0;
    double a = std::arg(z);
    double b = std::arg(Cx(1, 0) / (Cx(1, 0) - z));
    double c = std::arg((z - Cx(1, 0)) / z);
    return lobachevsky(a) + lobachevsky(b) + lobachevsky(c);
}

}  // namespace volchain::hyp3
