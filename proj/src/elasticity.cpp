#include "npasym/elasticity.hpp"

#include <cmath>

namespace npasym {

LameParams make_lame(double lambda, double mu) {
    if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
        throw InvalidArgument("Lame parameters must satisfy mu > 0 and 3 lambda + 2 mu > 0");
    LameParams P;
    P.lambda = lambda;
    P.mu = mu;
    const double l2m = lambda + 2.0 * mu;
    P.lambda_p = (lambda + 3.0 * mu) / (4.0 * kPi * mu * l2m);
    P.mu_p = (lambda + mu) / (4.0 * kPi * mu * l2m);
    P.kappa = mu / (2.0 * (2.0 * mu + lambda));
    P.m = (lambda + mu) / (2.0 * l2m);
    return P;
}

namespace {

Vec3 separation(const Vec3& x, const Vec3& y, double& r) {
    const Vec3 d = x - y;
    r = d.norm();
    if (!(r > 0.0)) throw InvalidArgument("kernel evaluated at coincident points");
    return d;
}

}  // namespace

Mat3 kelvin_matrix(const LameParams& P, const Vec3& x, const Vec3& y) {
    double r;
    const Vec3 d = separation(x, y, r);
    return P.lambda_p / r * Mat3::Identity() + P.mu_p / (r * r * r) * (d * d.transpose());
}

Mat3 single_layer_kernel(const LameParams& P, const Vec3& x, const Vec3& y) { return kelvin_matrix(P, x, y); }

Mat3 np_kernel(const LameParams& P, const Vec3& x, const Vec3& y, const Vec3& nu) {
    double r;
    const Vec3 d = separation(x, y, r);
    const double r3 = r * r * r;
    const Mat3 anti = nu * d.transpose() - d * nu.transpose();
    const double nd = nu.dot(d) / r3;
    return P.mu * (P.lambda_p - P.mu_p) / r3 * anti +
           (P.mu * (P.mu_p - P.lambda_p) * Mat3::Identity() - 6.0 * P.mu * P.mu_p / (r * r) * (d * d.transpose())) * nd;
}

Mat3 np_operator_kernel(const LameParams& P, const Vec3& x, const Vec3& y, const Vec3& nu_y) {
    return 0.5 * np_kernel(P, x, y, nu_y).transpose();
}

Mat3 single_layer_operator_kernel(const LameParams& P, const Vec3& x, const Vec3& y) {
    return -0.5 * kelvin_matrix(P, x, y);
}

namespace {

double checked_norm(const Vec2& xi) {
    const double n = xi.norm();
    if (!(n > 0.0)) throw InvalidArgument("symbol evaluated at xi = 0");
    return n;
}

Mat3 block_projector(const Vec2& xi) {
    Mat3 B = Mat3::Zero();
    B.topLeftCorner<2, 2>() = lambda_projector(xi);
    B(2, 2) = 1.0;
    return B;
}

}  // namespace

CMat3 np_principal_symbol(const LameParams& P, const Vec2& xi) {
    const double n = checked_norm(xi);
    Mat3 A = Mat3::Zero();
    A(0, 2) = -xi(0);
    A(1, 2) = -xi(1);
    A(2, 0) = xi(0);
    A(2, 1) = xi(1);
    return (kI * kPi * P.mu * (P.lambda_p - P.mu_p) / n) * A.cast<cplx>();
}

Mat2 lambda_projector(const Vec2& xi) {
    const double n = checked_norm(xi);
    return xi * xi.transpose() / (n * n);
}

Mat3 single_layer_symbol(const LameParams& P, const Vec2& xi) {
    const double n = checked_norm(xi);
    return (P.m * block_projector(xi) - Mat3::Identity()) / (2.0 * P.mu * n);
}

SymmetrizerSymbols symmetrizer_symbols(const LameParams& P, const Vec2& xi) {
    const double n = checked_norm(xi);
    const Mat3 B = block_projector(xi);
    const Mat3 E = Mat3::Identity();
    SymmetrizerSymbols s;
    s.r1 = 2.0 * P.mu * n * (-(P.lambda + P.mu) / (P.lambda + 3.0 * P.mu) * B - E);
    s.q_mh = (E - (1.0 - std::sqrt(1.0 - P.m)) * B) / std::sqrt(2.0 * P.mu * n);
    s.z_h = std::sqrt(2.0 * P.mu * n) * (E + (1.0 / std::sqrt(1.0 - P.m) - 1.0) * B);
    return s;
}

SpectralPolynomial essential_spectrum(const LameParams& P) {
    return SpectralPolynomial({-P.kappa, 0.0, P.kappa});
}

SphereEigenvalues sphere_exact_eigenvalues(const LameParams& P, int k_max) {
    if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
    SphereEigenvalues s;
    const double l = P.lambda, mu = P.mu;
    for (int k = 1; k <= k_max; ++k) {
        const double kk = k;
        const double den = 2.0 * (l + 2.0 * mu) * (4.0 * kk * kk - 1.0);
        s.zero.push_back(3.0 / (2.0 * (2.0 * kk + 1.0)));
        s.minus.push_back((3.0 * l - 2.0 * mu * (2.0 * kk * kk - 2.0 * kk - 3.0)) / den);
        s.plus.push_back((-3.0 * l + 2.0 * mu * (2.0 * kk * kk + 2.0 * kk - 3.0)) / den);
    }
    return s;
}

}  // namespace npasym
