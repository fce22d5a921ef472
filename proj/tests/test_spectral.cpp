#include "doctest.h"
#include "npasym/spectral.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace npasym;

namespace {

RMat random_matrix(int n, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    return scale * RMat::NullaryExpr(n, n, [&] { return g(rng); });
}

const Discretization& sphere12() {
    static const Discretization d = [] {
        DiscretizationOptions o;
        o.n = 12;
        return discretize(ParametrizedSurface::sphere(1.0), make_lame(1, 1), o);
    }();
    return d;
}

int count_near(const std::vector<double>& v, double t, double tol) {
    int c = 0;
    for (double x : v) c += std::abs(x - t) < tol;
    return c;
}

}  // namespace

TEST_CASE("spectrum basics") {
    RMat D = RMat::Zero(3, 3);
    D.diagonal() << 3, 1, 2;
    const auto s = spectrum(D);
    REQUIRE(s.values.size() == 3);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[2] == 3.0);
    RMat R(2, 2);
    R << 0, -1, 1, 0;
    CHECK_THROWS_AS(spectrum(R), NumericalFailure);
    CHECK_THROWS_AS(spectrum(RMat::Zero(2, 3)), InvalidArgument);
    RMat bad = D;
    bad(0, 0) = NAN;
    CHECK_THROWS_AS(spectrum(bad), InvalidArgument);
}

TEST_CASE("spectrum is similarity invariant") {
    RMat M = random_matrix(8, 1);
    M = (M + M.transpose()).eval();
    const RMat T = RMat::Identity(8, 8) + 0.3 * random_matrix(8, 2);
    const auto a = spectrum(M).values, b = spectrum(T.inverse() * M * T).values;
    for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("symmetrize a symmetrizable pair") {
    // K = H S^{-1} satisfies K S = S K^T for symmetric H and S
    const RMat G = random_matrix(6, 3);
    const RMat S = -(G * G.transpose() + RMat::Identity(6, 6));
    RMat H = random_matrix(6, 4);
    H = (H + H.transpose()).eval();
    const RMat K = H * S.inverse();
    const auto r = symmetrize(K, S);
    CHECK(r.plemelj_residual < 1e-12);
    CHECK(r.asymmetry < 1e-10);
    const auto a = spectrum(K).values, b = symmetric_spectrum(r.A);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    CHECK_THROWS_AS(symmetrize(K, -S), NumericalFailure);
}

TEST_CASE("sphere discretization reproduces the exact eigenvalues") {
    const auto& d = sphere12();
    CHECK(d.dof() == 3 * 11 * 11 - 2);
    const auto s = spectrum(d.K);
    CHECK(s.max_imag < 1e-6);
    const auto ex = sphere_exact_eigenvalues(make_lame(1, 1), 10);
    // translations and rotations share 1/2; radial/gradient pairs at j = 1
    CHECK(count_near(s.values, 0.5, 1e-6) == 6);
    CHECK(count_near(s.values, 0.3, 1e-6) == 5);
    CHECK(count_near(s.values, ex.minus[1], 1e-6) == 5);
    CHECK(count_near(s.values, ex.plus[0], 1e-6) == 1);
}

TEST_CASE("rigid translations are eigenfunctions with value 1/2") {
    const auto& d = sphere12();
    for (int c = 0; c < 3; ++c) {
        const RVec f = project_field(d, [c](const Vec3&, const Vec3&) { return Vec3(Vec3::Unit(c)); });
        CHECK((d.K * f - 0.5 * f).norm() < 1e-6 * f.norm());
    }
}

TEST_CASE("matrix action converges between resolutions") {
    auto field = [](const Vec3&, const Vec3& x) { return Vec3(std::sin(x(0) + 0.3) + x(1), x(1) * x(2) + 0.2, std::cos(x(2) + x(0))); };
    auto test = [](const Vec3&, const Vec3& x) { return Vec3(x(2) + 0.5 * x(0), 1.0 + x(0) * x(1), x(1) + 0.3 * x(2)); };
    std::vector<double> vals;
    for (int n : {8, 16}) {
        DiscretizationOptions o;
        o.n = n;
        o.single_layer = false;
        const auto d = discretize(ParametrizedSurface::ellipsoid(1.0, 0.8, 0.7), make_lame(1, 1), o);
        vals.push_back(project_field(d, test).dot(d.K * project_field(d, field)));
    }
    REQUIRE(std::abs(vals[1]) > 1e-2);
    CHECK(std::abs(vals[0] - vals[1]) < 0.02 * std::abs(vals[1]));
}

TEST_CASE("single layer: positivity, symmetry and radius scaling") {
    const auto& d = sphere12();
    CHECK(d.s_asymmetry < 1e-3);
    CHECK(symmetric_spectrum(-d.S).front() > 0.0);
    DiscretizationOptions o;
    o.n = 12;
    const auto d2 = discretize(ParametrizedSurface::sphere(2.0), make_lame(1, 1), o);
    CHECK((d2.S - 2.0 * d.S).norm() < 1e-8 * d.S.norm());
    CHECK((d2.K - d.K).norm() < 1e-8 * d.K.norm());
    const auto r = symmetrize(d.K, d.S);
    CHECK(r.plemelj_residual < 1e-2);
    const auto a = spectrum(d.K).values, b = symmetric_spectrum(r.A);
    double shift = 0;
    for (std::size_t i = 0; i < a.size(); ++i) shift = std::max(shift, std::abs(a[i] - b[i]));
    CHECK(shift <= std::max(r.asymmetry, 1e-12) * 0.5);
}

TEST_CASE("windows and clusters") {
    const auto roots = essential_spectrum(make_lame(1, 1));
    const auto w = root_windows(roots);
    REQUIRE(w.size() == 3);
    for (int i = 0; i + 1 < 3; ++i) CHECK(w[i].hi < w[i + 1].lo);
    CHECK(w[2].hi == doctest::Approx(1.0 / 6 + 0.45 / 6));
    WindowPolicy bad;
    bad.guard = -0.1;
    CHECK_THROWS_AS(root_windows(roots, bad), InvalidArgument);

    const auto s = make_sample({0.5, 0.3, 0.21, 0.18}, roots);
    CHECK(s.clusters[2].size() == 2);
    CHECK(s.unclustered.size() == 2);
    const auto cf = cluster_and_count(s, 2);
    for (std::size_t k = 0; k < cf.tau.size(); ++k) {
        double brute = 0;
        for (double l : {0.5, 0.3, 0.21, 0.18}) brute += l > 1.0 / 6 + cf.tau[k] && l < w[2].hi;
        CHECK(cf.n_plus[k] == brute);
        if (k) CHECK(cf.n_plus[k] >= cf.n_plus[k - 1]);
    }
    // tau = 0.01 lies between 0.18 - 1/6 and 0.21 - 1/6: both counted
    const auto at = count_sequence(1.0 / 6, s.clusters[2], {1.0, 1.0}, 0.01, 0.005, 2);
    CHECK(at.n_plus[0] == 2);
}

TEST_CASE("sphere spectrum: conservation and empty lower side") {
    const auto ev = spectrum(sphere12().K).values;
    const auto roots = essential_spectrum(make_lame(1, 1));
    const auto s = make_sample(ev, roots);
    std::size_t total = s.unclustered.size();
    for (const auto& c : s.clusters) total += c.size();
    CHECK(total == ev.size());
    const auto cf = cluster_and_count(s, 0);
    for (std::size_t k = cf.tau.size() / 2; k < cf.tau.size(); ++k) CHECK(cf.n_minus[k] == 0);
}

TEST_CASE("clusters gain a larger share of the spectrum with resolution") {
    const auto roots = essential_spectrum(make_lame(1, 1));
    std::vector<double> frac;
    for (int n : {8, 12}) {
        DiscretizationOptions o;
        o.n = n;
        o.single_layer = false;
        const auto ev = spectrum(discretize(ParametrizedSurface::sphere(1.0), make_lame(1, 1), o).K).values;
        int near = 0;
        for (double l : ev)
            for (double w : roots.roots()) near += std::abs(l - w) < 0.02;
        frac.push_back(double(near) / ev.size());
    }
    CHECK(frac[1] > frac[0]);
}

TEST_CASE("sphere counting with measured multiplicities jumps by m_k") {
    const auto P = make_lame(1, 1);
    const auto ev = spectrum(sphere12().K).values;
    const auto bc = ball_counting(P, ev, 1);
    CHECK(bc.mult.alpha == doctest::Approx(2.0));
    CHECK(bc.mult.beta == doctest::Approx(1.0));
    // oracle: enumerate lambda_k^0 = 3 / (2 (2k + 1)) with m_k = 2k + 1
    const auto ex = sphere_exact_eigenvalues(P, 6);
    for (int k = 2; k <= 5; ++k) {
        const double tk = ex.zero[k - 1];
        const auto c = count_sequence(0.0, std::vector<double>(ex.zero.begin() + 1, ex.zero.end()),
                                      {5, 7, 9, 11, 13}, tk * (1 + 1e-9), tk * (1 - 1e-9), 2);
        CHECK(c.n_plus[1] - c.n_plus[0] == 2 * k + 1);
    }
    CHECK(bc.fit.h == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("power-law fits") {
    // lambda_n = (4/n)^{1/2}
    std::vector<double> seq;
    for (int n = 1; n <= 100000; ++n) seq.push_back(std::sqrt(4.0 / n));
    auto cf = count_sequence(0.0, seq, std::vector<double>(seq.size(), 1.0), 0.2, 0.02, 40);
    auto f = fit_power_law(cf.tau, cf.n_plus);
    CHECK(f.h == doctest::Approx(2.0).epsilon(0.005));
    CHECK(f.C == doctest::Approx(4.0).epsilon(0.02));
    CHECK(f.power_like);

    // multiplicities 2k + 1 at c / k: exponent approaches 2 as the grid refines
    std::vector<double> v, m;
    for (int k = 1; k <= 20000; ++k) v.push_back(0.3 / k), m.push_back(2 * k + 1);
    double prev = 0;
    for (double lo : {1e-2, 1e-3, 1e-4}) {
        cf = count_sequence(0.0, v, m, 10 * lo, lo, 40);
        const double h = fit_power_law(cf.tau, cf.n_plus).h;
        CHECK(std::abs(h - 2.0) <= std::abs(prev - 2.0) + 1e-12);
        prev = h;
    }
    CHECK(prev == doctest::Approx(2.0).epsilon(0.01));

    std::vector<double> tau, flat;
    for (int i = 0; i < 20; ++i) tau.push_back(std::pow(10.0, -i / 5.0)), flat.push_back(7.0);
    f = fit_power_law(tau, flat);
    CHECK(std::abs(f.h) < 1e-12);
    CHECK_FALSE(f.power_like);

    std::vector<double> narrow_tau, narrow_n;
    for (int i = 0; i < 10; ++i) narrow_tau.push_back(1.0 + 0.1 * i), narrow_n.push_back(10.0 - i);
    CHECK_THROWS_AS(fit_power_law(narrow_tau, narrow_n), InvalidArgument);
    CHECK_THROWS_AS(fit_power_law({1, 0.1, 0.01}, {1, 2, 3}), InvalidArgument);
}

TEST_CASE("compactness on a diagonal matrix") {
    const auto roots = essential_spectrum(make_lame(1, 1));
    RMat D = RMat::Zero(3, 3);
    D.diagonal() << 0.4, 1.0 / 6 + 0.01, -0.1;
    const auto r = compactness_check(D, roots, true);
    CHECK(r.mapping_error < 1e-8);
    CHECK(roots(0.4) == doctest::Approx(0.4 * (0.16 - 1.0 / 36)));
    CHECK(r.distance_violation <= 0.0);
}

TEST_CASE("spurious eigenvalues and multiplicity measurement") {
    const auto sp = flag_spurious({0.1, 0.2, 0.35}, {0.1001, 0.2002}, 0.1);
    REQUIRE(sp.size() == 1);
    CHECK(sp[0] == 0.35);

    std::vector<double> eig;
    std::vector<double> targets{1.0, 0.5, 1.0 / 3, 0.25};
    for (int k = 1; k <= 3; ++k)
        for (int j = 0; j < 2 * k + 1; ++j) eig.push_back(1.0 / k);
    const auto mf = measure_multiplicities(eig, targets, {0.5 + 1e-9}, 1, 1e-6);
    // k = 2 is ambiguous, k = 4 is beyond the data
    CHECK(mf.k == std::vector<int>{1, 3});
    CHECK(mf.predict(10) == 21.0);
}

TEST_CASE("NPMAT round trip") {
    const RMat M = random_matrix(4, 9);
    std::stringstream ss;
    write_npmat(ss, M);
    CHECK(ss.str().rfind("NPMAT v1 4 4 real\n", 0) == 0);
    CHECK(read_npmat(ss) == M);
    std::stringstream bad("NPMAT v2 1 1 real 0");
    CHECK_THROWS_AS(read_npmat(bad), InvalidArgument);
    std::stringstream trunc("NPMAT v1 2 2 real 1 2 3");
    CHECK_THROWS_AS(read_npmat(trunc), InvalidArgument);
}
