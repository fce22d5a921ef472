#include "npasym/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace npasym {

Mat3 chart_kernel(const LameParams& P, const CChart& chart, const Vec2& z) {
    const Vec3 s = chart.param_at(-z);
    const auto& S = chart.surface();
    const Vec3 y = S.position(s);
    const Vec3 nu = S.normal(s);
    const Mat3& E = chart.frame();
    // dS = sqrt(1 + |grad F|^2) dy = dy / (nu . n)
    const double jac = 1.0 / nu.dot(chart.n());
    return jac * (E.transpose() * np_operator_kernel(P, chart.origin(), y, nu) * E);
}

double HomogeneousKernelPart::angle(int k) const { return 2.0 * kPi * k / size(); }

Mat3 HomogeneousKernelPart::operator()(double theta) const {
    const int N = size();
    Mat3 out = Mat3::Zero();
    // band-limited interpolant; the Nyquist mode enters as a cosine
    for (int n = -N / 2; n <= N / 2; ++n) {
        Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
        for (int k = 0; k < N; ++k) c += samples[k].cast<cplx>() * std::exp(-kI * double(n) * angle(k));
        c /= double(N);
        double w = 1.0;
        if (N % 2 == 0 && std::abs(n) == N / 2) w = 0.5;
        out += w * (c * std::exp(kI * double(n) * theta)).real();
    }
    return out;
}

namespace {

// Weights producing the first two Taylor coefficients of a polynomial
// least-squares fit of the given degree in eps.
std::array<RVec, 2> taylor_weights(const std::vector<double>& eps, int degree) {
    const int r = static_cast<int>(eps.size());
    const double emax = *std::max_element(eps.begin(), eps.end());
    RMat V(r, degree + 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j <= degree; ++j) V(i, j) = std::pow(eps[i] / emax, j);
    const RMat pinv = V.completeOrthogonalDecomposition().pseudoInverse();
    return {pinv.row(0).transpose(), pinv.row(1).transpose() / emax};
}

}  // namespace

KernelExpansion homogeneous_parts(const std::function<Mat3(const Vec2&)>& kernel, const ExpansionOptions& opt) {
    const int rungs = static_cast<int>(opt.eps_ladder.size());
    if (rungs < 4) throw InvalidArgument("homogeneous_parts needs at least 4 epsilon rungs");
    for (double e : opt.eps_ladder)
        if (!(e >= 1e-5 && e <= 1e-2)) throw InvalidArgument("epsilon ladder must lie in [1e-5, 1e-2]");
    if (opt.directions < 64 || opt.directions % 2) throw InvalidArgument("need an even number >= 64 of directions");

    const auto hi = taylor_weights(opt.eps_ladder, rungs - 1);
    const auto lo = taylor_weights(opt.eps_ladder, rungs - 2);
    const int N = opt.directions;
    KernelExpansion ex;
    ex.K0.a = 2;
    ex.Km1.a = 1;
    ex.K0.samples.resize(N);
    ex.Km1.samples.resize(N);
    double d0 = 0.0, d1 = 0.0, m0 = 0.0, m1 = 0.0;
    std::vector<Mat3> g(rungs);
    for (int k = 0; k < N; ++k) {
        const double th = 2.0 * kPi * k / N;
        const Vec2 u(std::cos(th), std::sin(th));
        for (int i = 0; i < rungs; ++i) {
            const double e = opt.eps_ladder[i];
            g[i] = e * e * kernel(e * u);
        }
        Mat3 c0 = Mat3::Zero(), c1 = Mat3::Zero(), l0 = Mat3::Zero(), l1 = Mat3::Zero();
        for (int i = 0; i < rungs; ++i) {
            c0 += hi[0](i) * g[i];
            c1 += hi[1](i) * g[i];
            l0 += lo[0](i) * g[i];
            l1 += lo[1](i) * g[i];
        }
        ex.K0.samples[k] = c0;
        ex.Km1.samples[k] = c1;
        d0 = std::max(d0, (c0 - l0).cwiseAbs().maxCoeff());
        d1 = std::max(d1, (c1 - l1).cwiseAbs().maxCoeff());
        m0 = std::max(m0, c0.cwiseAbs().maxCoeff());
        m1 = std::max(m1, c1.cwiseAbs().maxCoeff());
    }
    ex.err_estimate = std::max(d0 / std::max(m0, 1e-300), d1 / std::max(m1, 1e-300));
    if (m1 == 0.0) ex.err_estimate = d0 / std::max(m0, 1e-300);
    double odd = 0.0;
    for (int k = 0; k < N / 2; ++k)
        odd = std::max(odd, (ex.K0.samples[k] + ex.K0.samples[k + N / 2]).cwiseAbs().maxCoeff());
    ex.oddness = odd / std::max(m0, 1e-300);
    if (ex.err_estimate > opt.tol)
        throw NumericalFailure("homogeneous_parts: extrapolation residual " + std::to_string(ex.err_estimate) +
                               " above tolerance (chart too small or surface too rough)");
    return ex;
}

cplx fourier_multiplier(int n, int a) {
    const int an = std::abs(n);
    const double g1 = (an - a + 2) / 2.0, g2 = (an + a) / 2.0;
    if (g1 <= 0.0 && g1 == std::floor(g1)) throw InvalidArgument("fourier_multiplier: divergent mode");
    const double ratio = std::tgamma(g1) / std::tgamma(g2);
    cplx phase = 1.0;
    for (int k = 0; k < an % 4; ++k) phase *= -kI;
    return std::pow(2.0, 2 - a) * kPi * phase * ratio;
}

AngularSymbol::AngularSymbol(int degree, std::vector<int> modes, std::vector<CMat3> coeffs)
    : degree_(degree), modes_(std::move(modes)), coeffs_(std::move(coeffs)) {}

CMat3 AngularSymbol::operator()(const Vec2& xi) const {
    const double r = xi.norm();
    if (!(r > 0.0)) throw InvalidArgument("symbol evaluated at xi = 0");
    const double phi = std::atan2(xi(1), xi(0));
    CMat3 out = CMat3::Zero();
    for (std::size_t j = 0; j < modes_.size(); ++j) out += coeffs_[j] * std::exp(kI * double(modes_[j]) * phi);
    return out * std::pow(r, degree_);
}

std::array<CMat3, 2> AngularSymbol::gradient(const Vec2& xi) const {
    const double r = xi.norm();
    if (!(r > 0.0)) throw InvalidArgument("symbol evaluated at xi = 0");
    const double phi = std::atan2(xi(1), xi(0));
    CMat3 val = CMat3::Zero(), dphi = CMat3::Zero();
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const cplx e = std::exp(kI * double(modes_[j]) * phi);
        val += coeffs_[j] * e;
        dphi += coeffs_[j] * (kI * double(modes_[j]) * e);
    }
    const double rd = std::pow(r, degree_);
    const CMat3 dr = double(degree_) * rd / r * val;
    const CMat3 dp = rd / r * dphi;
    const double c = std::cos(phi), s = std::sin(phi);
    return {CMat3(c * dr - s * dp), CMat3(s * dr + c * dp)};
}

AngularSymbol angular_fourier_symbol(const HomogeneousKernelPart& part, double oddness_tol) {
    const int N = part.size();
    if (N < 64) throw InvalidArgument("angular_fourier_symbol needs at least 64 samples");
    if (part.a != 1 && part.a != 2) throw InvalidArgument("kernel degree must be -1 or -2");
    std::vector<CMat3> hat;
    std::vector<int> modes;
    double mx = 0.0;
    for (int n = -(N / 2 - 1); n <= N / 2 - 1; ++n) {
        CMat3 c = CMat3::Zero();
        for (int k = 0; k < N; ++k) c += part.samples[k].cast<cplx>() * std::exp(-kI * double(n) * part.angle(k));
        c /= double(N);
        modes.push_back(n);
        hat.push_back(c);
        mx = std::max(mx, c.cwiseAbs().maxCoeff());
    }
    std::vector<int> keep_modes;
    std::vector<CMat3> coeffs;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const int n = modes[j];
        if (part.a == 2 && n % 2 == 0) {
            if (hat[j].cwiseAbs().maxCoeff() > oddness_tol * std::max(mx, 1e-300))
                throw NumericalFailure("angular_fourier_symbol: even mode " + std::to_string(n) +
                                       " in a degree -2 kernel (oddness violated)");
            continue;
        }
        keep_modes.push_back(n);
        coeffs.push_back(fourier_multiplier(n, part.a) * hat[j]);
    }
    return AngularSymbol(part.a - 2, std::move(keep_modes), std::move(coeffs));
}

std::array<CMat3, 2> PrincipalDerivative::operator()(const Vec2& xi) const {
    auto carried = [&](const ConsistentChart& c) {
        const Vec2 eta = c.DZ.transpose().fullPivLu().solve(xi);
        const CMat3 U = c.U.cast<cplx>();
        return CMat3(U * np_principal_symbol(P, eta) * U.inverse());
    };
    std::array<CMat3, 2> out;
    for (int al = 0; al < 2; ++al) {
        const auto& t = transitions[al];
        const CMat3 d1 = (carried(t[0]) - carried(t[1])) / (2.0 * h);
        const CMat3 d2 = (carried(t[2]) - carried(t[3])) / (4.0 * h);
        out[al] = (4.0 * d1 - d2) / 3.0;
    }
    return out;
}

std::vector<FieldNode> field_nodes(const SurfaceQuadrature& q) {
    std::vector<FieldNode> out;
    out.reserve(q.nodes.size());
    for (const auto& nd : q.nodes) out.push_back({nd.s, nd.w});
    return out;
}

NodeSymbols node_symbols(const ParametrizedSurface& S, const LameParams& P, const FieldNode& node,
                         const FieldOptions& opt, double frame_angle) {
    NodeSymbols ns;
    ns.s = node.s;
    ns.weight = node.weight;
    ns.chart = CChart(S, node.s, opt.chart_radius, frame_angle);
    const CChart& chart = ns.chart;
    ns.expansion = homogeneous_parts([&](const Vec2& z) { return chart_kernel(P, chart, z); }, opt.expansion);
    ns.k0 = angular_fourier_symbol(ns.expansion.K0);
    ns.km1 = angular_fourier_symbol(ns.expansion.Km1);

    const int N = opt.expansion.directions;
    for (int k = 0; k < N; ++k) {
        const double th = 2.0 * kPi * k / N;
        const Vec2 xi(std::cos(th), std::sin(th));
        ns.k0_error = std::max(ns.k0_error, (ns.k0(xi) - np_principal_symbol(P, xi)).cwiseAbs().maxCoeff());
    }
    if (ns.k0_error > opt.k0_tol)
        throw NumericalFailure("np_symbol_field: extracted k0 deviates from the closed-form principal symbol by " +
                               std::to_string(ns.k0_error));

    // In each consistent chart the principal symbol has the closed form
    // (checked just above at the origin), so only the transition data varies.
    ns.dx_k0.P = P;
    ns.dx_k0.h = opt.dx_step;
    const double offs[4] = {opt.dx_step, -opt.dx_step, 2 * opt.dx_step, -2 * opt.dx_step};
    for (int al = 0; al < 2; ++al)
        for (int j = 0; j < 4; ++j) {
            Vec2 x = Vec2::Zero();
            x(al) = offs[j];
            ns.dx_k0.transitions[al][j] = consistent_chart(chart, chart.param_at(x));
        }

    auto k0 = std::make_shared<const AngularSymbol>(ns.k0);
    auto km1 = std::make_shared<const AngularSymbol>(ns.km1);
    auto dx = std::make_shared<const PrincipalDerivative>(ns.dx_k0);
    auto at_origin = [](const Vec2& x) {
        if (x.squaredNorm() != 0.0) throw InvalidArgument("node symbol is sampled at the chart origin only");
    };
    TwoTermSymbol& sym = ns.symbol;
    sym.dim = 3;
    sym.realness = Realness::similar_to_hermitian;
    sym.a0 = [k0, at_origin](const Vec2& x, const Vec2& xi) {
        at_origin(x);
        return CMat((*k0)(xi));
    };
    sym.a_m1 = [km1, at_origin](const Vec2& x, const Vec2& xi) {
        at_origin(x);
        return CMat((*km1)(xi));
    };
    sym.dx_a0 = [dx, at_origin](const Vec2& x, const Vec2& xi) {
        at_origin(x);
        const auto g = (*dx)(xi);
        return std::array<CMat, 2>{CMat(g[0]), CMat(g[1])};
    };
    sym.dxi_a0 = [k0, at_origin](const Vec2& x, const Vec2& xi) {
        at_origin(x);
        const auto g = k0->gradient(xi);
        return std::array<CMat, 2>{CMat(g[0]), CMat(g[1])};
    };
    const auto roots = essential_spectrum(P);
    for (int iota = 0; iota < roots.degree(); ++iota) ns.m.push_back(build_Bi_symbol(sym, roots, iota, opt.bi));
    return ns;
}

SymbolField np_symbol_field(const ParametrizedSurface& S, const LameParams& P, const std::vector<FieldNode>& nodes,
                            const FieldOptions& opt) {
    if (!opt.frame_angles.empty() && opt.frame_angles.size() != nodes.size())
        throw InvalidArgument("frame_angles must match the node count");
    SymbolField f;
    f.P = P;
    f.roots = essential_spectrum(P);
    f.nodes.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        f.nodes.push_back(node_symbols(S, P, nodes[i], opt, opt.frame_angles.empty() ? 0.0 : opt.frame_angles[i]));
    return f;
}

}  // namespace npasym
