#include "doctest.h"
#include "npasym/symbol_algebra.hpp"

#include <cmath>
#include <random>

using namespace npasym;

namespace {

double maxabs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

// Smooth x-dependent 3x3 symbol with a0 similar to diag(roots).
TwoTermSymbol similar_to_diag(const std::vector<double>& roots, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    RMat B1 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    RMat B2 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    RMat C = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    const Eigen::Vector3d d(roots[0], roots[1], roots[2]);
    auto U = [B1, B2](const Vec2& x, const Vec2& xi) {
        const double th = std::atan2(xi(1), xi(0));
        return RMat(RMat::Identity(3, 3) + 0.2 * std::sin(x(0) + 0.5 * x(1)) * B1 + 0.2 * std::cos(x(1) - th) * B2);
    };
    TwoTermSymbol s;
    s.dim = 3;
    s.realness = Realness::similar_to_hermitian;
    s.a0 = [U, d](const Vec2& x, const Vec2& xi) {
        const RMat u = U(x, xi);
        return CMat((u * d.asDiagonal() * u.inverse()).cast<cplx>());
    };
    s.a_m1 = [C](const Vec2& x, const Vec2& xi) {
        const double th = std::atan2(xi(1), xi(0));
        return CMat((std::cos(th + x(0)) / xi.norm() * C).cast<cplx>());
    };
    return s;
}

TwoTermSymbol random_symbol(unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    RMat M0 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    RMat M1 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
    RMat M2 = RMat::NullaryExpr(3, 3, [&] { return g(rng); });
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

std::vector<std::pair<Vec2, Vec2>> samples(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<Vec2, Vec2>> out;
    for (int i = 0; i < n; ++i) out.push_back({Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))});
    return out;
}

}  // namespace

TEST_CASE("compose with identity") {
    auto A = random_symbol(1);
    auto C = compose(A, identity_symbol(3));
    for (auto [x, xi] : samples(10, 2)) {
        CHECK(maxabs(C.principal(x, xi) - A.principal(x, xi)) < 1e-14);
        CHECK(maxabs(C.minus_one(x, xi) - A.minus_one(x, xi)) < 1e-14);
    }
}

TEST_CASE("compose of x-independent symbols has no derivative term") {
    CMat a0 = CMat::Random(2, 2), a1 = CMat::Random(2, 2), b0 = CMat::Random(2, 2), b1 = CMat::Random(2, 2);
    auto A = constant_in_x(
        2, [=](const Vec2&, const Vec2& xi) { return CMat(a0 * (xi(0) / xi.norm())); },
        [=](const Vec2&, const Vec2& xi) { return CMat(a1 / xi.norm()); });
    auto B = constant_in_x(
        2, [=](const Vec2&, const Vec2& xi) { return CMat(b0 * (xi(1) / xi.norm())); },
        [=](const Vec2&, const Vec2& xi) { return CMat(b1 / xi.norm()); });
    auto C = compose(A, B);
    const Vec2 x(0.3, -0.2), xi(0.6, 0.8);
    const CMat expect = A.principal(x, xi) * B.minus_one(x, xi) + A.minus_one(x, xi) * B.principal(x, xi);
    CHECK(maxabs(C.minus_one(x, xi) - expect) < 1e-15);
}

TEST_CASE("compose derivative term matches the scalar hand example") {
    TwoTermSymbol A, B;
    A.dim = B.dim = 1;
    A.a0 = [](const Vec2& x, const Vec2& xi) { return CMat::Constant(1, 1, std::sin(x(0)) * xi(0) / xi.norm()); };
    B.a0 = [](const Vec2&, const Vec2& xi) { return CMat::Constant(1, 1, xi(1) / xi.norm()); };
    A.a_m1 = B.a_m1 = [](const Vec2&, const Vec2&) { return CMat::Zero(1, 1); };
    // oracle: central differences of the scalar functions, then the product rule
    const Vec2 x(0, 0), xi(1, 1);
    const double h = 1e-6;
    const double dxi_b = (B.a0(x, Vec2(1 + h, 1))(0, 0).real() - B.a0(x, Vec2(1 - h, 1))(0, 0).real()) / (2 * h);
    const double dx_a = (A.a0(Vec2(h, 0), xi)(0, 0).real() - A.a0(Vec2(-h, 0), xi)(0, 0).real()) / (2 * h);
    const cplx oracle = dxi_b * dx_a / kI;
    const cplx got = compose(B, A).minus_one(x, xi)(0, 0);
    CHECK(std::abs(oracle - cplx(0, 0.25)) < 1e-8);
    CHECK(std::abs(got - oracle) < 1e-8);
}

TEST_CASE("compose rejects mismatched dimensions and xi = 0") {
    CHECK_THROWS_AS(compose(identity_symbol(2), identity_symbol(3)), InvalidArgument);
    auto C = compose(random_symbol(3), random_symbol(4));
    CHECK_THROWS_AS(C.minus_one(Vec2(0, 0), Vec2(0, 0)), InvalidArgument);
}

TEST_CASE("associativity at the retained orders") {
    auto A = random_symbol(5), B = random_symbol(6), C = random_symbol(7);
    auto L = compose(compose(A, B), C);
    auto R = compose(A, compose(B, C));
    for (auto [x, xi] : samples(20, 8)) {
        CHECK(maxabs(L.principal(x, xi) - R.principal(x, xi)) < 1e-10);
        CHECK(maxabs(L.minus_one(x, xi) - R.minus_one(x, xi)) < 1e-10);
    }
}

TEST_CASE("homogeneity of composed symbols") {
    auto C = compose(random_symbol(9), random_symbol(10));
    const Vec2 x(0.2, 0.4), xi(0.3, -1.1);
    for (double t : {0.5, 2.0, 7.0}) {
        CHECK(maxabs(C.principal(x, t * xi) - C.principal(x, xi)) < 1e-12);
        CHECK(maxabs(t * C.minus_one(x, t * xi) - C.minus_one(x, xi)) < 1e-8);
    }
}

TEST_CASE("shift") {
    auto A = similar_to_diag({-0.2, 0.0, 0.3}, 11);
    const Vec2 x(0.1, 0.2), xi(1.0, 0.5);
    CHECK(maxabs(shift(A, 0.0).principal(x, xi) - A.principal(x, xi)) == 0.0);
    CHECK(maxabs(shift(shift(A, 0.7), -0.7).principal(x, xi) - A.principal(x, xi)) < 1e-15);
    auto ev = real_eigenvalues(shift(A, 0.1).principal(x, xi));
    CHECK(ev[0] == doctest::Approx(-0.3));
    CHECK(ev[1] == doctest::Approx(-0.1));
    CHECK(ev[2] == doctest::Approx(0.2));
    CHECK(maxabs(shift(A, 0.4).minus_one(x, xi) - A.minus_one(x, xi)) == 0.0);
}

TEST_CASE("build_Bi_symbol equals the folded composition") {
    const std::vector<double> roots{-0.25, 0.0, 0.25};
    SpectralPolynomial P(roots);
    auto A = similar_to_diag(roots, 12);
    for (int iota = 0; iota < 3; ++iota) {
        TwoTermSymbol Y = identity_symbol(3);
        for (int l = 0; l < 3; ++l) {
            if (l == iota) continue;
            Y = compose(Y, compose(shift(A, roots[l]), shift(A, roots[l])));
        }
        auto fold = compose(shift(A, roots[iota]), Y);
        auto b = build_Bi_symbol(A, P, iota);
        for (auto [x, xi] : samples(20, 13 + iota)) {
            CHECK(maxabs(fold.principal(x, xi)) < 1e-8);
            CHECK(maxabs(b.minus_one(x, xi) - fold.minus_one(x, xi)) < 1e-10);
            CHECK(order_zero_residual(A, P, iota, x, xi) < 1e-8);
        }
    }
}

TEST_CASE("build_Bi_symbol vanishes for x-independent symbols with a_m1 = 0") {
    SpectralPolynomial P({-1.0, 0.0, 1.0});
    auto A = constant_in_x(
        3,
        [](const Vec2&, const Vec2& xi) {
            const Vec2 e = xi / xi.norm();
            CMat m = CMat::Zero(3, 3);
            m(0, 2) = -e(0) * kI;
            m(1, 2) = -e(1) * kI;
            m(2, 0) = e(0) * kI;
            m(2, 1) = e(1) * kI;
            return m;
        },
        [](const Vec2&, const Vec2&) { return CMat(CMat::Zero(3, 3)); });
    std::vector<SymbolSample> ss;
    for (auto [x, xi] : samples(100, 20)) ss.push_back({x, xi});
    for (int iota = 0; iota < 3; ++iota) {
        auto b = build_Bi_symbol(A, P, iota);
        auto rep = detect_degeneracy(b, ss);
        CHECK(rep.degenerate);
        CHECK(rep.max_norm < 1e-9);
    }
}

TEST_CASE("build_Bi_symbol rejects symbols that are not polynomially compact") {
    SpectralPolynomial P({-1.0, 0.0, 1.0});
    auto A = random_symbol(21);
    auto b = build_Bi_symbol(A, P, 0);
    CHECK_THROWS_AS(b.minus_one(Vec2(0.1, 0.1), Vec2(1, 0)), NumericalFailure);
}

TEST_CASE("detect_degeneracy tolerance semantics") {
    SpectralPolynomial P({-0.25, 0.0, 0.25});
    auto A = similar_to_diag({-0.25, 0.0, 0.25}, 22);
    auto b = build_Bi_symbol(A, P, 1);
    std::vector<SymbolSample> ss;
    for (auto [x, xi] : samples(100, 23)) ss.push_back({x, xi});
    CHECK_FALSE(detect_degeneracy(b, ss).degenerate);
    auto tiny = scale(b, 1e-9);
    auto rep = detect_degeneracy(tiny, ss, 1e-6);
    CHECK(rep.degenerate);
    CHECK_THROWS_AS(detect_degeneracy(b, {}), InvalidArgument);
}

TEST_CASE("subprincipal symbol") {
    auto A = constant_in_x(
        2, [](const Vec2&, const Vec2& xi) { return CMat(CMat::Identity(2, 2) * (xi(0) / xi.norm())); },
        [](const Vec2&, const Vec2& xi) { return CMat(CMat::Constant(2, 2, 1.0 / xi.norm())); });
    auto s = subprincipal(A);
    CHECK(maxabs(s(Vec2(0.3, 0.1), Vec2(1, 2)) - A.minus_one(Vec2(0.3, 0.1), Vec2(1, 2))) < 1e-12);

    TwoTermSymbol B;
    B.dim = 1;
    B.a0 = [](const Vec2& x, const Vec2& xi) { return CMat::Constant(1, 1, x(0) * xi(0) / xi.norm()); };
    B.a_m1 = [](const Vec2&, const Vec2& xi) { return CMat::Constant(1, 1, 0.5 / xi.norm()); };
    auto sb = subprincipal(B);
    CHECK(std::abs(sb(Vec2(0, 0), Vec2(0, 1))(0, 0) - (0.5 + 1.0 / (2.0 * kI))) < 1e-8);
    for (double t : {0.5, 2.0, 7.0})
        CHECK(std::abs(t * sb(Vec2(0.2, 0), t * Vec2(0.3, 1))(0, 0) - sb(Vec2(0.2, 0), Vec2(0.3, 1))(0, 0)) < 1e-7);
}

TEST_CASE("real_eigenvalues") {
    CMat M = CMat::Zero(3, 3);
    M.diagonal() << 3.0, 1.0, 2.0;
    auto ev = real_eigenvalues(M);
    CHECK(ev == std::vector<double>{1.0, 2.0, 3.0});
    CMat R(2, 2);
    R << 0, -1, 1, 0;
    CHECK_THROWS_AS(real_eigenvalues(R), NumericalFailure);
}
