#include "doctest.h"
#include "npasym/extraction.hpp"

#include <cmath>
#include <random>

using namespace npasym;

namespace {

// int_0^inf J_nu(t) t^{-p} exp(-eps t^2) dt by composite Simpson; the
// Gaussian makes the tail negligible beyond 8 / sqrt(eps).
double mollified_hankel(double nu, double p, double eps) {
    const double T = 8.0 / std::sqrt(eps);
    const int n = static_cast<int>(T / 0.01) * 2;
    const double h = T / n;
    auto f = [&](double t) {
        if (t == 0.0) return (nu == 0.0 && p == 0.0) ? 1.0 : (nu == 1.0 && p == 1.0 ? 0.5 : 0.0);
        return std::cyl_bessel_j(nu, t) * std::pow(t, -p) * std::exp(-eps * t * t);
    };
    double s = f(0) + f(T);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

// Value at eps -> 0 from a Richardson step on eps and eps/2 (error O(eps)).
double extrapolated(double nu, double p) {
    const double a = mollified_hankel(nu, p, 2e-3), b = mollified_hankel(nu, p, 1e-3);
    return 2.0 * b - a;
}

HomogeneousKernelPart part_from(int a, int N, const std::function<Mat3(double)>& omega) {
    HomogeneousKernelPart p;
    p.a = a;
    for (int k = 0; k < N; ++k) p.samples.push_back(omega(2.0 * kPi * k / N));
    return p;
}

}  // namespace

TEST_CASE("Fourier transform of 1/|z| matches the mollified oracle") {
    // FT of 1/|z| at |xi| = 1: 2 pi int_0^inf J0(t) dt
    const double oracle = 2.0 * kPi * extrapolated(0.0, 0.0);
    CHECK(oracle == doctest::Approx(2.0 * kPi).epsilon(1e-3));
    const auto sym = angular_fourier_symbol(part_from(1, 64, [](double) { return Mat3::Identity(); }));
    for (double th : {0.0, 0.7, 2.0}) {
        const Vec2 xi(std::cos(th), std::sin(th));
        const CMat3 v = sym(xi);
        CHECK(std::abs(v(0, 0) - oracle) < 1e-3 * oracle);
        CHECK(std::abs(v(0, 1)) < 1e-12);
        // degree -1
        CHECK(std::abs(sym(2.0 * xi)(1, 1) - 0.5 * v(1, 1)) < 1e-12);
    }
}

TEST_CASE("Fourier transform of z1/|z|^3 matches the mollified oracle") {
    // angular integral of exp(-i t cos(th - phi)) cos th is -2 pi i J1(t) cos phi
    const double radial = extrapolated(1.0, 1.0);
    CHECK(radial == doctest::Approx(1.0).epsilon(1e-3));
    const auto sym = angular_fourier_symbol(part_from(2, 64, [](double th) { return Mat3(std::cos(th) * Mat3::Identity()); }));
    for (double th : {0.0, 0.4, 1.9, 3.5}) {
        const Vec2 xi(std::cos(th), std::sin(th));
        const cplx oracle = -2.0 * kPi * kI * std::cos(th) * radial;
        CHECK(std::abs(sym(xi)(2, 2) - oracle) < 2e-3 * 2.0 * kPi);
        CHECK(std::abs(sym(3.0 * xi)(2, 2) - sym(xi)(2, 2)) < 1e-12);
    }
}

TEST_CASE("multiplier table closed values") {
    CHECK(std::abs(fourier_multiplier(0, 1) - cplx(2.0 * kPi, 0)) < 1e-13);
    CHECK(std::abs(fourier_multiplier(1, 2) - cplx(0, -2.0 * kPi)) < 1e-13);
    CHECK(std::abs(fourier_multiplier(-1, 2) - fourier_multiplier(1, 2)) < 1e-15);
}

TEST_CASE("angular symbol gradient matches finite differences") {
    const auto sym = angular_fourier_symbol(part_from(
        2, 64, [](double th) { return Mat3(std::cos(th) * Mat3::Identity() + std::sin(3 * th) * Mat3::Ones()); }));
    const Vec2 xi(0.6, -0.9);
    const auto g = sym.gradient(xi);
    const double h = 1e-6;
    for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e(a) = h;
        const CMat3 fd = (sym(xi + e) - sym(xi - e)) / (2 * h);
        CHECK((g[a] - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("transform commutes with constant conjugation") {
    std::mt19937 rng(3);
    std::normal_distribution<double> gd;
    const Mat3 T = Mat3::Identity() + 0.3 * Mat3::NullaryExpr([&] { return gd(rng); });
    auto omega = [](double th) {
        Mat3 m;
        m << std::cos(th), std::sin(th), 0, -std::sin(3 * th), std::cos(th), std::cos(5 * th), 0, std::sin(th), std::cos(3 * th);
        return m;
    };
    const auto s1 = angular_fourier_symbol(part_from(2, 64, omega));
    const auto s2 = angular_fourier_symbol(part_from(2, 64, [&](double th) { return Mat3(T * omega(th) * T.inverse()); }));
    const Vec2 xi(0.3, 0.8);
    CHECK((s2(xi) - T.cast<cplx>() * s1(xi) * T.inverse().cast<cplx>()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("even modes in a degree -2 kernel are rejected") {
    CHECK_THROWS_AS(angular_fourier_symbol(part_from(2, 64, [](double) { return Mat3::Identity(); })), NumericalFailure);
}

TEST_CASE("homogeneous parts of a synthetic kernel") {
    auto A = [](double th) { return Mat3(std::cos(th) * Mat3::Identity() + std::sin(th) * Mat3::Ones()); };
    auto B = [](double th) { return Mat3((1.0 + std::cos(2 * th)) * Mat3::Identity()); };
    const Mat3 C = Mat3::Constant(0.7);
    auto kernel = [&](const Vec2& z) {
        const double r = z.norm(), th = std::atan2(z(1), z(0));
        return Mat3(A(th) / (r * r) + B(th) / r + C + r * std::sin(th) * Mat3::Identity());
    };
    const auto ex = homogeneous_parts(kernel);
    CHECK(ex.K0.a == 2);
    CHECK(ex.Km1.a == 1);
    double e0 = 0, e1 = 0;
    for (int k = 0; k < ex.K0.size(); ++k) {
        e0 = std::max(e0, (ex.K0.samples[k] - A(ex.K0.angle(k))).cwiseAbs().maxCoeff());
        e1 = std::max(e1, (ex.Km1.samples[k] - B(ex.Km1.angle(k))).cwiseAbs().maxCoeff());
    }
    CHECK(e0 < 1e-9);
    CHECK(e1 < 1e-6);
    CHECK(ex.oddness < 1e-12);
    // trigonometric interpolation between samples
    CHECK((ex.K0(0.123) - A(0.123)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("expansion options are validated") {
    auto k = [](const Vec2& z) { return Mat3(Mat3::Identity() / z.norm()); };
    ExpansionOptions o;
    o.eps_ladder = {1e-3, 2e-3, 4e-3};
    CHECK_THROWS_AS(homogeneous_parts(k, o), InvalidArgument);
    o = {};
    o.eps_ladder = {1e-3, 2e-3, 4e-3, 5e-2};
    CHECK_THROWS_AS(homogeneous_parts(k, o), InvalidArgument);
    o = {};
    o.directions = 63;
    CHECK_THROWS_AS(homogeneous_parts(k, o), InvalidArgument);
}

TEST_CASE("sphere: extracted k0 equals the closed-form principal symbol") {
    const auto P = make_lame(1, 1);
    const auto S = ParametrizedSurface::sphere(1.0);
    for (const Vec3& s : {Vec3(0.3, 0.4, 0.866), Vec3(1, 0, 0), Vec3(-0.2, 0.9, -0.3)}) {
        const auto ns = node_symbols(S, P, {s.normalized(), 1.0}, FieldOptions{});
        CHECK(ns.k0_error < 1e-4);
        CHECK(ns.expansion.oddness < 1e-6);
        CHECK(ns.m.size() == 3);
    }
}

TEST_CASE("sphere radius scaling: k0 unchanged, k_-1 scales as 1/R") {
    const auto P = make_lame(1, 1);
    const Vec3 s = Vec3(0.2, -0.5, 0.8).normalized();
    const auto a = node_symbols(ParametrizedSurface::sphere(1.0), P, {s, 1.0}, FieldOptions{});
    FieldOptions o;
    o.chart_radius = 0.5;
    const auto b = node_symbols(ParametrizedSurface::sphere(2.0), P, {s, 1.0}, o);
    const Vec2 xi(0.6, 0.8);
    CHECK((a.k0(xi) - b.k0(xi)).cwiseAbs().maxCoeff() < 1e-4);
    const double scale = a.km1(xi).cwiseAbs().maxCoeff();
    CHECK((0.5 * a.km1(xi) - b.km1(xi)).cwiseAbs().maxCoeff() < 1e-3 * scale);
}

TEST_CASE("sphere: x-derivative of k0 is the same at every node") {
    // all points are alike, so the extracted derivative (a fixed combination
    // of the two curvature responses) must agree across nodes
    const auto P = make_lame(1, 1);
    const auto S = ParametrizedSurface::sphere(1.0);
    const auto q = surface_quadrature(S, 8);
    const auto f = np_symbol_field(S, P, field_nodes(q));
    const Vec2 xi(0.8, -0.6);
    const auto ref = f.nodes.front().dx_k0(xi);
    const double scale = std::max(ref[0].cwiseAbs().maxCoeff(), ref[1].cwiseAbs().maxCoeff());
    REQUIRE(scale > 1e-6);
    double worst = 0;
    for (const auto& n : f.nodes) {
        const auto g = n.dx_k0(xi);
        worst = std::max({worst, (g[0] - ref[0]).cwiseAbs().maxCoeff(), (g[1] - ref[1]).cwiseAbs().maxCoeff()});
    }
    CHECK(worst < 0.05 * scale);
}

TEST_CASE("sphere sign law for m at every node") {
    const auto P = make_lame(1, 1);
    const auto S = ParametrizedSurface::sphere(1.0);
    const auto f = np_symbol_field(S, P, field_nodes(surface_quadrature(S, 8)));
    for (const auto& n : f.nodes)
        for (int iota = 0; iota < 3; ++iota) {
            bool positive = false;
            for (int k = 0; k < 16; ++k) {
                const double th = 2 * kPi * k / 16;
                const CMat m = n.m[iota].minus_one(Vec2::Zero(), Vec2(std::cos(th), std::sin(th)));
                const auto ev = real_eigenvalues(m, 1e-6);
                const double scale = std::max(std::abs(ev.front()), std::abs(ev.back()));
                CHECK(ev.front() >= -1e-3 * scale);
                positive = positive || ev.back() > 1e-3 * scale;
            }
            CHECK(positive);
        }
}

TEST_CASE("frame angles must match the node count") {
    const auto S = ParametrizedSurface::sphere(1.0);
    FieldOptions o;
    o.frame_angles = {0.1};
    CHECK_THROWS_AS(np_symbol_field(S, make_lame(1, 1), field_nodes(surface_quadrature(S, 8)), o), InvalidArgument);
}
