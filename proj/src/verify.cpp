#include "npasym/verify.hpp"
#include "npasym/elasticity.hpp"
#include "npasym/spectral.hpp"
#include "npasym/symbol_algebra.hpp"

#include <cmath>
#include <random>

namespace npasym {

namespace {

double rel(const Mat3& a, const Mat3& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TwoTermSymbol smooth_symbol(std::mt19937& rng) {
    std::normal_distribution<double> g;
    const RMat M0 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    const RMat M1 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    const RMat M2 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    TwoTermSymbol s;
    s.dim = 3;
    s.a0 = [M0, M1](const Vec2& x, const Vec2& xi) {
        const Vec2 e = xi / xi.norm();
        return CMat((M0 * std::sin(x(0) * e(0) + x(1)) + M1 * e(1) * std::cos(x(1))).cast<cplx>());
    };
    s.a_m1 = [M2](const Vec2& x, const Vec2& xi) {
        return CMat((M2 * (1.0 + x(0) * xi(1) / xi.norm()) / xi.norm()).cast<cplx>());
    };
    return s;
}

}  // namespace

std::vector<CheckResult> identity_suite(unsigned seed, int samples) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 5.0);
    CheckResult q2{"q^2 = -s", 0, 1e-10}, zq{"z q = E", 0, 1e-10}, rs{"r s = E", 0, 1e-10},
        lam{"Lambda^2 = Lambda", 0, 1e-10}, comm{"k0 commutes with diag(Lambda, 1)", 0, 1e-10},
        kap{"kappa = pi mu (lambda' - mu')", 0, 1e-10}, eig{"eig k0 = {-kappa, 0, kappa}", 0, 1e-10},
        assoc{"compose associativity", 0, 1e-10}, smap{"spectral mapping on diagonal matrices", 0, 1e-10};
    const Mat3 E = Mat3::Identity();
    for (int i = 0; i < samples; ++i) {
        const double mu = pos(rng);
        // 3 lambda + 2 mu > 0
        const double lambda = -2.0 * mu / 3.0 + pos(rng);
        const auto P = make_lame(lambda, mu);
        Vec2 xi(u(rng), u(rng));
        if (xi.norm() < 1e-3) xi = Vec2(1, 0);
        const Mat3 s = single_layer_symbol(P, xi);
        const auto z = symmetrizer_symbols(P, xi);
        // scale-free defects: s carries 1/|xi|
        q2.value = std::max(q2.value, (z.q_mh * z.q_mh + s).norm() / s.norm());
        zq.value = std::max(zq.value, rel(z.z_h * z.q_mh, E));
        rs.value = std::max(rs.value, rel(z.r1 * s, E));
        const Mat2 L = lambda_projector(xi);
        lam.value = std::max(lam.value, (L * L - L).norm());
        Mat3 B = Mat3::Zero();
        B.topLeftCorner<2, 2>() = L;
        B(2, 2) = 1.0;
        const CMat3 k0 = np_principal_symbol(P, xi);
        comm.value = std::max(comm.value, (k0 * B.cast<cplx>() - B.cast<cplx>() * k0).norm());
        kap.value = std::max(kap.value, std::abs(P.kappa - kPi * P.mu * (P.lambda_p - P.mu_p)) / P.kappa);
        const auto ev = real_eigenvalues(CMat(k0), 1e-12);
        eig.value = std::max({eig.value, std::abs(ev[0] + P.kappa), std::abs(ev[1]), std::abs(ev[2] - P.kappa)});
    }
    for (int i = 0; i < 5; ++i) {
        auto A = smooth_symbol(rng), Bs = smooth_symbol(rng), C = smooth_symbol(rng);
        const auto L = compose(compose(A, Bs), C), R = compose(A, compose(Bs, C));
        for (int j = 0; j < 8; ++j) {
            const Vec2 x(u(rng), u(rng)), xi(u(rng) + 1.5, u(rng));
            const double scale = std::max(1.0, L.minus_one(x, xi).norm());
            assoc.value = std::max(assoc.value, (L.principal(x, xi) - R.principal(x, xi)).norm() / scale);
            assoc.value = std::max(assoc.value, (L.minus_one(x, xi) - R.minus_one(x, xi)).norm() / scale);
        }
    }
    for (int i = 0; i < 5; ++i) {
        const auto P = make_lame(pos(rng), pos(rng));
        RMat D = RMat::Zero(6, 6);
        for (int j = 0; j < 6; ++j) D(j, j) = 0.5 * u(rng);
        smap.value = std::max(smap.value, compactness_check(D, essential_spectrum(P), true).mapping_error);
    }
    return {q2, zq, rs, lam, comm, kap, eig, assoc, smap};
}

}  // namespace npasym
