#include "npasym/symbol_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace npasym {

namespace {

void require_nonzero(const Vec2& xi) {
    if (!(xi.norm() > 0.0) || !std::isfinite(xi.norm()))
        throw InvalidArgument("symbol evaluated at xi = 0");
}

Vec2 rotate(const Vec2& v, double s) {
    const double c = std::cos(s), n = std::sin(s);
    return {c * v(0) - n * v(1), n * v(0) + c * v(1)};
}

// Gradient in xi of a degree-0 function by differencing along the circle.
std::array<CMat, 2> tangential_gradient(const std::function<CMat(const Vec2&)>& f, const Vec2& xi) {
    constexpr double h = 1e-5;
    const double r = xi.norm();
    const CMat g = (f(rotate(xi, h)) - f(rotate(xi, -h))) / (2.0 * h * r);
    const Vec2 t(-xi(1) / r, xi(0) / r);
    return {g * t(0), g * t(1)};
}

std::array<CMat, 2> central_x_gradient(const std::function<CMat(const Vec2&)>& f, const Vec2& x) {
    const double h = 1e-5 * std::max(1.0, x.norm());
    std::array<CMat, 2> g;
    for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e(a) = h;
        g[a] = (f(x + e) - f(x - e)) / (2.0 * h);
    }
    return g;
}

}  // namespace

CMat TwoTermSymbol::principal(const Vec2& x, const Vec2& xi) const {
    require_nonzero(xi);
    return a0(x, xi);
}

CMat TwoTermSymbol::minus_one(const Vec2& x, const Vec2& xi) const {
    require_nonzero(xi);
    return a_m1(x, xi);
}

std::array<CMat, 2> TwoTermSymbol::grad_x(const Vec2& x, const Vec2& xi) const {
    require_nonzero(xi);
    if (dx_a0) return dx_a0(x, xi);
    return central_x_gradient([&](const Vec2& y) { return a0(y, xi); }, x);
}

std::array<CMat, 2> TwoTermSymbol::grad_xi(const Vec2& x, const Vec2& xi) const {
    require_nonzero(xi);
    if (dxi_a0) return dxi_a0(x, xi);
    return tangential_gradient([&](const Vec2& e) { return a0(x, e); }, xi);
}

TwoTermSymbol identity_symbol(int dim) {
    const CMat E = CMat::Identity(dim, dim);
    const CMat Z = CMat::Zero(dim, dim);
    return constant_in_x(
        dim, [E](const Vec2&, const Vec2&) { return E; }, [Z](const Vec2&, const Vec2&) { return Z; },
        [Z](const Vec2&, const Vec2&) { return std::array<CMat, 2>{Z, Z}; });
}

TwoTermSymbol constant_in_x(int dim, SymbolFn a0, SymbolFn a_m1, SymbolGradFn dxi_a0) {
    TwoTermSymbol s;
    s.dim = dim;
    s.a0 = std::move(a0);
    s.a_m1 = std::move(a_m1);
    s.dx_a0 = [dim](const Vec2&, const Vec2&) {
        return std::array<CMat, 2>{CMat::Zero(dim, dim), CMat::Zero(dim, dim)};
    };
    s.dxi_a0 = std::move(dxi_a0);
    return s;
}

TwoTermSymbol compose(const TwoTermSymbol& A, const TwoTermSymbol& B) {
    if (A.dim != B.dim) throw InvalidArgument("compose: fiber dimensions differ");
    auto a = std::make_shared<const TwoTermSymbol>(A);
    auto b = std::make_shared<const TwoTermSymbol>(B);
    TwoTermSymbol r;
    r.dim = A.dim;
    r.a0 = [a, b](const Vec2& x, const Vec2& xi) { return CMat(a->principal(x, xi) * b->principal(x, xi)); };
    r.a_m1 = [a, b](const Vec2& x, const Vec2& xi) {
        const CMat a0 = a->principal(x, xi), b0 = b->principal(x, xi);
        CMat v = a0 * b->minus_one(x, xi) + a->minus_one(x, xi) * b0;
        const auto dxi = a->grad_xi(x, xi);
        const auto dx = b->grad_x(x, xi);
        v += (dxi[0] * dx[0] + dxi[1] * dx[1]) / kI;
        return v;
    };
    r.dx_a0 = [a, b](const Vec2& x, const Vec2& xi) {
        const CMat a0 = a->principal(x, xi), b0 = b->principal(x, xi);
        const auto da = a->grad_x(x, xi), db = b->grad_x(x, xi);
        return std::array<CMat, 2>{CMat(da[0] * b0 + a0 * db[0]), CMat(da[1] * b0 + a0 * db[1])};
    };
    r.dxi_a0 = [a, b](const Vec2& x, const Vec2& xi) {
        const CMat a0 = a->principal(x, xi), b0 = b->principal(x, xi);
        const auto da = a->grad_xi(x, xi), db = b->grad_xi(x, xi);
        return std::array<CMat, 2>{CMat(da[0] * b0 + a0 * db[0]), CMat(da[1] * b0 + a0 * db[1])};
    };
    return r;
}

TwoTermSymbol shift(const TwoTermSymbol& A, double omega) {
    auto a = std::make_shared<const TwoTermSymbol>(A);
    TwoTermSymbol r = A;
    r.a0 = [a, omega](const Vec2& x, const Vec2& xi) {
        CMat m = a->principal(x, xi);
        m.diagonal().array() -= omega;
        return m;
    };
    r.dx_a0 = [a](const Vec2& x, const Vec2& xi) { return a->grad_x(x, xi); };
    r.dxi_a0 = [a](const Vec2& x, const Vec2& xi) { return a->grad_xi(x, xi); };
    return r;
}

TwoTermSymbol scale(const TwoTermSymbol& A, double factor) {
    auto a = std::make_shared<const TwoTermSymbol>(A);
    TwoTermSymbol r = A;
    r.a0 = [a, factor](const Vec2& x, const Vec2& xi) { return CMat(factor * a->principal(x, xi)); };
    r.a_m1 = [a, factor](const Vec2& x, const Vec2& xi) { return CMat(factor * a->minus_one(x, xi)); };
    r.dx_a0 = [a, factor](const Vec2& x, const Vec2& xi) {
        auto g = a->grad_x(x, xi);
        return std::array<CMat, 2>{CMat(factor * g[0]), CMat(factor * g[1])};
    };
    r.dxi_a0 = [a, factor](const Vec2& x, const Vec2& xi) {
        auto g = a->grad_xi(x, xi);
        return std::array<CMat, 2>{CMat(factor * g[0]), CMat(factor * g[1])};
    };
    return r;
}

namespace {

CMat shifted(const CMat& a0, double w) {
    CMat m = a0;
    m.diagonal().array() -= w;
    return m;
}

double spectral_norm(const CMat& M) {
    if (M.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMat>(M).singularValues()(0);
}

}  // namespace

double order_zero_residual(const TwoTermSymbol& A, const SpectralPolynomial& P, int iota, const Vec2& x,
                           const Vec2& xi) {
    const CMat a0 = A.principal(x, xi);
    CMat y = shifted(a0, P.root(iota));
    for (int l = 0; l < P.degree(); ++l) {
        if (l == iota) continue;
        const CMat f = shifted(a0, P.roots()[l]);
        y = y * f * f;
    }
    return spectral_norm(y);
}

TwoTermSymbol build_Bi_symbol(const TwoTermSymbol& A, const SpectralPolynomial& P, int iota, BiOptions opt) {
    P.root(iota);
    auto a = std::make_shared<const TwoTermSymbol>(A);
    auto roots = P.roots();
    const int n = A.dim;
    TwoTermSymbol r;
    r.dim = n;
    r.a0 = [n](const Vec2&, const Vec2& xi) {
        require_nonzero(xi);
        return CMat(CMat::Zero(n, n));
    };
    r.dx_a0 = [n](const Vec2&, const Vec2&) {
        return std::array<CMat, 2>{CMat::Zero(n, n), CMat::Zero(n, n)};
    };
    r.dxi_a0 = r.dx_a0;
    r.a_m1 = [a, roots, iota, opt, n](const Vec2& x, const Vec2& xi) {
        const CMat a0 = a->principal(x, xi);
        const CMat am1 = a->minus_one(x, xi);
        const auto dx = a->grad_x(x, xi);
        const auto dxi = a->grad_xi(x, xi);

        // factors f_k = a0 - w_l, each root l != iota appearing twice
        std::vector<CMat> f;
        for (std::size_t l = 0; l < roots.size(); ++l) {
            if (static_cast<int>(l) == iota) continue;
            f.push_back(shifted(a0, roots[l]));
            f.push_back(f.back());
        }
        const std::size_t K = f.size();
        std::vector<CMat> pre(K + 1), suf(K + 1);
        pre[0] = CMat::Identity(n, n);
        for (std::size_t k = 0; k < K; ++k) pre[k + 1] = pre[k] * f[k];
        suf[K] = CMat::Identity(n, n);
        for (std::size_t k = K; k-- > 0;) suf[k] = f[k] * suf[k + 1];

        const CMat y0 = pre[K];
        CMat y1 = CMat::Zero(n, n);
        std::array<CMat, 2> dx_y0{CMat::Zero(n, n), CMat::Zero(n, n)};
        for (std::size_t k = 0; k < K; ++k) {
            y1 += pre[k] * am1 * suf[k + 1];
            for (int al = 0; al < 2; ++al) dx_y0[al] += pre[k] * dx[al] * suf[k + 1];
        }
        // (1/i) sum_{j<l} f_1..d_xi f_j..d_x f_l..f_K; the middle products are
        // powers of the shifted a0, rebuilt here from the factor list
        for (std::size_t j = 0; j < K; ++j) {
            for (std::size_t l = j + 1; l < K; ++l) {
                CMat mid = CMat::Identity(n, n);
                for (std::size_t k = j + 1; k < l; ++k) mid = mid * f[k];
                CMat t = CMat::Zero(n, n);
                for (int al = 0; al < 2; ++al) t += dxi[al] * mid * dx[al];
                y1 += pre[j] * t * suf[l + 1] / kI;
            }
        }

        const CMat fi = shifted(a0, roots[iota]);
        const double scale = std::pow(std::max(1.0, spectral_norm(a0)), 2.0 * roots.size() - 1.0);
        const double res = spectral_norm(fi * y0);
        if (res > opt.residual_tol * scale)
            throw NumericalFailure("build_Bi_symbol: p_iota(a0) does not vanish (residual " + std::to_string(res) +
                                   "); the symbol is not polynomially compact with these roots");
        return CMat(fi * y1 + am1 * y0 + (dxi[0] * dx_y0[0] + dxi[1] * dx_y0[1]) / kI);
    };
    return r;
}

SymbolFn subprincipal(const TwoTermSymbol& A) {
    auto a = std::make_shared<const TwoTermSymbol>(A);
    return [a](const Vec2& x, const Vec2& xi) {
        CMat mixed;
        if (a->dx_a0) {
            const auto g0 = tangential_gradient([&](const Vec2& e) { return a->grad_x(x, e)[0]; }, xi);
            const auto g1 = tangential_gradient([&](const Vec2& e) { return a->grad_x(x, e)[1]; }, xi);
            mixed = g0[0] + g1[1];
        } else {
            const auto g0 = central_x_gradient([&](const Vec2& y) { return a->grad_xi(y, xi)[0]; }, x);
            const auto g1 = central_x_gradient([&](const Vec2& y) { return a->grad_xi(y, xi)[1]; }, x);
            mixed = g0[0] + g1[1];
        }
        return CMat(a->minus_one(x, xi) + mixed / (2.0 * kI));
    };
}

DegeneracyReport detect_degeneracy(const TwoTermSymbol& b, const std::vector<SymbolSample>& samples, double tol) {
    if (samples.empty()) throw InvalidArgument("detect_degeneracy: empty sample set");
    DegeneracyReport rep;
    for (const auto& s : samples) rep.max_norm = std::max(rep.max_norm, spectral_norm(b.minus_one(s.x, s.xi)));
    rep.degenerate = rep.max_norm < tol;
    return rep;
}

std::vector<double> real_eigenvalues(const CMat& M, double tol) {
    Eigen::ComplexEigenSolver<CMat> es(M, false);
    const auto& ev = es.eigenvalues();
    double rad = 0.0;
    for (int i = 0; i < ev.size(); ++i) rad = std::max(rad, std::abs(ev(i)));
    std::vector<double> out;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).imag()) > tol * std::max(rad, 1e-300))
            throw NumericalFailure("eigenvalue with imaginary part " + std::to_string(ev(i).imag()) +
                                   " exceeds the realness tolerance");
        out.push_back(ev(i).real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace npasym
