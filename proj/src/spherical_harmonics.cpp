#include "npasym/spherical_harmonics.hpp"

#include <cmath>
#include <vector>

namespace npasym {

void to_angles(const Vec3& s, double& theta, double& phi) {
    theta = std::atan2(std::hypot(s(0), s(1)), s(2));
    phi = std::atan2(s(1), s(0));
}

Vec3 from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void eval_sh(int lmax, double theta, double phi, ShValues& out, bool second) {
    const int n = sh_count(lmax);
    const double ct = std::cos(theta), st = std::sin(theta);
    const int L = lmax + 1;
    // normalized associated Legendre P(l,m) (no Condon-Shortley phase), its
    // quotient Q = P / sin(theta) for m >= 1, and dP/dtheta
    std::vector<double> P(L * L, 0.0), Q(L * L, 0.0), dP(L * L, 0.0);
    auto at = [L](int l, int m) { return l * L + m; };

    P[at(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 1; m <= lmax; ++m) {
        const double f = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        Q[at(m, m)] = f * P[at(m - 1, m - 1)];
        P[at(m, m)] = st * Q[at(m, m)];
    }
    for (int m = 0; m <= lmax; ++m) {
        if (m + 1 <= lmax) {
            P[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * P[at(m, m)];
            Q[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * Q[at(m, m)];
        }
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            P[at(l, m)] = a * (ct * P[at(l - 1, m)] - b * P[at(l - 2, m)]);
            Q[at(l, m)] = a * (ct * Q[at(l - 1, m)] - b * Q[at(l - 2, m)]);
        }
    }
    for (int l = 0; l <= lmax; ++l) {
        if (l >= 1) dP[at(l, 0)] = -std::sqrt(l * (l + 1.0)) * Q[at(l, 1)] * st;
        for (int m = 1; m <= l; ++m) {
            double v = l * ct * Q[at(l, m)];
            if (l - 1 >= m) v -= std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0)) * Q[at(l - 1, m)];
            dP[at(l, m)] = v;
        }
    }
    // m = 0 derivative uses P(l,1) = sin * Q(l,1); written out above

    out.Y.resize(n);
    out.Yt.resize(n);
    out.Yps.resize(n);
    if (second) {
        out.Ytt.resize(n);
        out.Ytp.resize(n);
        out.Ypp.resize(n);
    }
    const double r2 = std::sqrt(2.0);
    for (int l = 0; l <= lmax; ++l) {
        for (int m = -l; m <= l; ++m) {
            const int am = std::abs(m);
            double T, Tp, Tpp, c;
            if (m == 0) {
                T = 1.0, Tp = 0.0, Tpp = 0.0, c = 1.0;
            } else if (m > 0) {
                T = std::cos(am * phi), Tp = -am * std::sin(am * phi), Tpp = -am * am * T, c = r2;
            } else {
                T = std::sin(am * phi), Tp = am * std::cos(am * phi), Tpp = -am * am * T, c = r2;
            }
            const int k = sh_index(l, m);
            const double p = P[at(l, am)], dp = dP[at(l, am)];
            out.Y(k) = c * p * T;
            out.Yt(k) = c * dp * T;
            out.Yps(k) = am == 0 ? 0.0 : c * Q[at(l, am)] * Tp;
            if (second) {
                // Legendre equation; callers avoid exact poles for second derivatives
                const double ddp = -(ct / st) * dp - l * (l + 1.0) * p + (am * am) * p / (st * st);
                out.Ytt(k) = c * ddp * T;
                out.Ytp(k) = c * dp * Tp;
                out.Ypp(k) = c * p * Tpp;
            }
        }
    }
}

}  // namespace npasym
