#include "npasym/spectral.hpp"
#include "npasym/spherical_harmonics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>

namespace npasym {

namespace {

Vec3 theta_hat(double th, double ph) {
    return {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
}
Vec3 phi_hat(double ph) { return {-std::sin(ph), std::cos(ph), 0.0}; }

// Column offsets of the three families.
struct Layout {
    int nY;
    int radial(int k) const { return k; }
    int grad(int k) const { return nY + k - 1; }
    int curl(int k) const { return 2 * nY - 1 + k - 1; }
};

// Scatter per-point scalar-harmonic contractions into basis columns.
// G* are (rows x nY): a.Y, b.Yt + c.Yps, c.Yt - b.Yps.
void scatter_families(int J, const RMat& Gr, const RMat& Gg, const RMat& Gc, RMat& out, int row0) {
    Layout lay{(J + 1) * (J + 1)};
    const int rows = static_cast<int>(Gr.rows());
    for (int l = 0; l <= J; ++l) {
        const double inv = l > 0 ? 1.0 / std::sqrt(l * (l + 1.0)) : 0.0;
        for (int m = -l; m <= l; ++m) {
            const int k = sh_index(l, m);
            out.block(row0, lay.radial(k), rows, 1) = Gr.col(k);
            if (l > 0) {
                out.block(row0, lay.grad(k), rows, 1) = inv * Gg.col(k);
                out.block(row0, lay.curl(k), rows, 1) = inv * Gc.col(k);
            }
        }
    }
}

// Y(phi0 + dphi) expressed through Y(phi0): columns (l,m), (l,-m) mix.
void rotate_columns(int J, double dphi, RMat& G) {
    for (int l = 1; l <= J; ++l)
        for (int m = 1; m <= l; ++m) {
            const double c = std::cos(m * dphi), s = std::sin(m * dphi);
            const int kp = sh_index(l, m), km = sh_index(l, -m);
            const RVec gp = G.col(kp), gm = G.col(km);
            G.col(kp) = c * gp - s * gm;
            G.col(km) = s * gp + c * gm;
        }
}

}  // namespace

RMat VshBasis::evaluate(const Vec3& s) const {
    double th, ph;
    to_angles(s, th, ph);
    ShValues v;
    eval_sh(J, th, ph, v);
    const Vec3 sh = s.normalized(), et = theta_hat(th, ph), ep = phi_hat(ph);
    RMat out(3, dim());
    RMat Gr = v.Y.transpose();
    // per component contraction: component c of s Y is s_c Y, etc.
    RMat R(3, scalar_count()), Gg(3, scalar_count()), Gc(3, scalar_count());
    for (int c = 0; c < 3; ++c) {
        R.row(c) = sh(c) * v.Y.transpose();
        Gg.row(c) = et(c) * v.Yt.transpose() + ep(c) * v.Yps.transpose();
        Gc.row(c) = ep(c) * v.Yt.transpose() - et(c) * v.Yps.transpose();
    }
    scatter_families(J, R, Gg, Gc, out, 0);
    return out;
}

void VshBasis::describe(int k, int& j, int& family) const {
    const int nY = scalar_count();
    int idx;
    if (k < nY) {
        family = 0;
        idx = k;
    } else if (k < 2 * nY - 1) {
        family = 1;
        idx = k - nY + 1;
    } else {
        family = 2;
        idx = k - 2 * nY + 2;
    }
    j = static_cast<int>(std::floor(std::sqrt(double(idx)) + 1e-12));
}

namespace {

// Basis fields at the quadrature nodes: (3 * nodes) x dim.
RMat basis_at_nodes(const VshBasis& B, const SurfaceQuadrature& q) {
    RMat Phi(3 * q.nodes.size(), B.dim());
    for (std::size_t i = 0; i < q.nodes.size(); ++i) Phi.middleRows(3 * i, 3) = B.evaluate(q.nodes[i].s);
    return Phi;
}

}  // namespace

Discretization discretize(const ParametrizedSurface& surf, const LameParams& P, const DiscretizationOptions& opt) {
    if (opt.n < 8) throw InvalidArgument("discretization needs n >= 8");
    Discretization d;
    d.n = opt.n;
    d.basis.J = opt.n - 2;
    d.quad = surface_quadrature(surf, opt.n);
    const int J = d.basis.J, nY = d.basis.scalar_count(), D = d.basis.dim();
    const int n = opt.n, nphi = 2 * n;
    const int Nn = static_cast<int>(d.quad.nodes.size());

    // rotated polar grid around each target: Gauss-Legendre in the polar
    // angle over (0, pi), even trapezoid count in the azimuth
    const int Mt = n + opt.extra_theta, Mp = 2 * Mt;
    std::vector<double> gx, gw;
    gauss_legendre(Mt, gx, gw);
    const int Np = Mt * Mp;

    RMat HK(3 * Nn, D), HS;
    if (opt.single_layer) HS.resize(3 * Nn, D);

    RMat Y0(Np, nY), Yt0(Np, nY), Yps0(Np, nY);
    std::vector<Vec3> p0(Np);
    std::vector<double> w0(Np), th0(Np), ph0(Np);
    RMat A(3 * nphi, Np), Bm(3 * nphi, Np), C(3 * nphi, Np);
    RMat As, Bs, Cs;
    if (opt.single_layer) {
        As.resize(3 * nphi, Np);
        Bs.resize(3 * nphi, Np);
        Cs.resize(3 * nphi, Np);
    }
    ShValues v;
    for (int r = 0; r < n; ++r) {
        const double thr = d.quad.nodes[r * nphi].theta;
        const double cr = std::cos(thr), sr = std::sin(thr);
        for (int a = 0; a < Mt; ++a) {
            const double tp = 0.5 * kPi * (gx[a] + 1.0);
            const double wt = 0.5 * kPi * gw[a] * std::sin(tp) * (2.0 * kPi / Mp);
            for (int b = 0; b < Mp; ++b) {
                const double pp = 2.0 * kPi * b / Mp;
                const Vec3 loc = from_angles(tp, pp);
                // rotate about y by the ring colatitude
                const Vec3 g(cr * loc(0) + sr * loc(2), loc(1), -sr * loc(0) + cr * loc(2));
                const int idx = a * Mp + b;
                p0[idx] = g;
                w0[idx] = wt;
                to_angles(g, th0[idx], ph0[idx]);
                eval_sh(J, th0[idx], ph0[idx], v);
                Y0.row(idx) = v.Y.transpose();
                Yt0.row(idx) = v.Yt.transpose();
                Yps0.row(idx) = v.Yps.transpose();
            }
        }
        for (int t = 0; t < nphi; ++t) {
            const auto& tgt = d.quad.nodes[r * nphi + t];
            const double dphi = tgt.phi;
            const double cd = std::cos(dphi), sd = std::sin(dphi);
            for (int idx = 0; idx < Np; ++idx) {
                const Vec3 s(cd * p0[idx](0) - sd * p0[idx](1), sd * p0[idx](0) + cd * p0[idx](1), p0[idx](2));
                const Vec3 y = surf.position(s);
                const Vec3 nu = surf.normal(s);
                const double w = w0[idx] * surf.area_factor(s);
                const double ph = ph0[idx] + dphi;
                const Vec3 et = theta_hat(th0[idx], ph), ep = phi_hat(ph);
                const Mat3 Kk = w * np_operator_kernel(P, tgt.x, y, nu);
                A.block<3, 1>(3 * t, idx) = Kk * s;
                Bm.block<3, 1>(3 * t, idx) = Kk * et;
                C.block<3, 1>(3 * t, idx) = Kk * ep;
                if (opt.single_layer) {
                    const Mat3 Ks = w * single_layer_operator_kernel(P, tgt.x, y);
                    As.block<3, 1>(3 * t, idx) = Ks * s;
                    Bs.block<3, 1>(3 * t, idx) = Ks * et;
                    Cs.block<3, 1>(3 * t, idx) = Ks * ep;
                }
            }
        }
        auto contract = [&](const RMat& a, const RMat& b, const RMat& c, RMat& H) {
            const RMat Gr = a * Y0;
            const RMat Gg = b * Yt0 + c * Yps0;
            const RMat Gc = c * Yt0 - b * Yps0;
            for (int t = 0; t < nphi; ++t) {
                RMat gr = Gr.middleRows(3 * t, 3), gg = Gg.middleRows(3 * t, 3), gc = Gc.middleRows(3 * t, 3);
                const double dphi = d.quad.nodes[r * nphi + t].phi;
                rotate_columns(J, dphi, gr);
                rotate_columns(J, dphi, gg);
                rotate_columns(J, dphi, gc);
                scatter_families(J, gr, gg, gc, H, 3 * (r * nphi + t));
            }
        };
        contract(A, Bm, C, HK);
        if (opt.single_layer) contract(As, Bs, Cs, HS);
    }

    const RMat Phi = basis_at_nodes(d.basis, d.quad);
    RMat WPhi = Phi;
    for (int i = 0; i < Nn; ++i) WPhi.middleRows(3 * i, 3) *= d.quad.nodes[i].w;
    const RMat M = WPhi.transpose() * Phi;
    Eigen::LLT<RMat> llt(M);
    if (llt.info() != Eigen::Success) throw NumericalFailure("discretize: Gram matrix is not positive definite");
    const auto L = llt.matrixL();
    auto orthonormalize = [&](const RMat& G) {
        RMat X = L.solve(G);
        return RMat(L.solve(X.transpose()).transpose());
    };
    d.K = orthonormalize(WPhi.transpose() * HK);
    if (opt.single_layer) {
        RMat Sg = orthonormalize(WPhi.transpose() * HS);
        d.s_asymmetry = (Sg - Sg.transpose()).norm() / Sg.norm();
        d.S = 0.5 * (Sg + Sg.transpose());
    }
    return d;
}

RVec project_field(const Discretization& d, const std::function<Vec3(const Vec3&, const Vec3&)>& field) {
    const RMat Phi = basis_at_nodes(d.basis, d.quad);
    const int Nn = static_cast<int>(d.quad.nodes.size());
    RVec f(3 * Nn);
    RMat WPhi = Phi;
    for (int i = 0; i < Nn; ++i) {
        f.segment<3>(3 * i) = field(d.quad.nodes[i].s, d.quad.nodes[i].x);
        WPhi.middleRows(3 * i, 3) *= d.quad.nodes[i].w;
    }
    const RMat M = WPhi.transpose() * Phi;
    Eigen::LLT<RMat> llt(M);
    // coefficients c in the basis Phi solve M c = Phi^T W f; in the
    // orthonormal basis psi = Phi L^{-T} they become L^T c = L^{-1} Phi^T W f
    return llt.matrixL().solve(RVec(WPhi.transpose() * f));
}

SpectrumResult spectrum(const RMat& M, double realness_tol) {
    const int n = static_cast<int>(M.rows());
    if (n != M.cols()) throw InvalidArgument("spectrum: matrix is not square");
    if (!M.allFinite()) throw InvalidArgument("spectrum: non-finite entries");
    SpectrumResult res;
    if (n == 0) return res;
    RMat A = M;
    std::vector<double> wr(n), wi(n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, A.data(), n, wr.data(), wi.data(), nullptr, 1,
                                          nullptr, 1);
    if (info != 0) throw NumericalFailure("spectrum: dgeev failed with info " + std::to_string(info));
    double rad = 0.0;
    for (int i = 0; i < n; ++i) rad = std::max(rad, std::hypot(wr[i], wi[i]));
    for (int i = 0; i < n; ++i) res.max_imag = std::max(res.max_imag, std::abs(wi[i]) / std::max(rad, 1e-300));
    if (res.max_imag > realness_tol)
        throw NumericalFailure("spectrum: imaginary parts up to " + std::to_string(res.max_imag) +
                               " of the spectral radius (discretization fault)");
    res.values = wr;
    std::sort(res.values.begin(), res.values.end());
    return res;
}

std::vector<double> symmetric_spectrum(const RMat& M) {
    Eigen::SelfAdjointEigenSolver<RMat> es(M, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + M.rows());
    return v;
}

SymmetrizeResult symmetrize(const RMat& K, const RMat& S) {
    Eigen::SelfAdjointEigenSolver<RMat> es(-S);
    const RVec ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0) throw NumericalFailure("symmetrize: -S is not positive definite");
    const RMat& V = es.eigenvectors();
    const RMat half = V * ev.cwiseSqrt().asDiagonal() * V.transpose();
    const RMat ihalf = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    const RMat A0 = ihalf * K * half;
    SymmetrizeResult r;
    r.asymmetry = (A0 - A0.transpose()).norm() / A0.norm();
    r.A = 0.5 * (A0 + A0.transpose());
    r.plemelj_residual = (K * S - S * K.transpose()).norm() / (S.norm() * K.norm());
    return r;
}

std::vector<Window> root_windows(const SpectralPolynomial& roots, const WindowPolicy& policy) {
    std::vector<double> w = roots.roots();
    std::sort(w.begin(), w.end());
    const int L = static_cast<int>(w.size());
    std::vector<Window> out(L);
    for (int i = 0; i < L; ++i) {
        const double gl = i > 0 ? w[i] - w[i - 1] : (L > 1 ? w[1] - w[0] : 1.0);
        const double gr = i + 1 < L ? w[i + 1] - w[i] : (L > 1 ? w[L - 1] - w[L - 2] : 1.0);
        out[i].lo = w[i] - gl * (0.5 - policy.guard);
        out[i].hi = w[i] + gr * (0.5 - policy.guard);
    }
    for (int i = 0; i + 1 < L; ++i)
        if (out[i].hi >= out[i + 1].lo) throw InvalidArgument("root windows overlap");
    return out;
}

SpectralSample make_sample(const std::vector<double>& eigenvalues, const SpectralPolynomial& roots,
                           const WindowPolicy& policy) {
    SpectralSample s;
    s.eigenvalues = eigenvalues;
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    s.N = static_cast<int>(eigenvalues.size());
    s.roots = roots.roots();
    std::sort(s.roots.begin(), s.roots.end());
    s.windows = root_windows(roots, policy);
    s.clusters.assign(s.roots.size(), {});
    for (double l : s.eigenvalues) {
        bool placed = false;
        for (std::size_t i = 0; i < s.windows.size(); ++i)
            if (l > s.windows[i].lo && l < s.windows[i].hi) {
                s.clusters[i].push_back(l);
                placed = true;
                break;
            }
        if (!placed) s.unclustered.push_back(l);
    }
    return s;
}

namespace {

std::vector<double> geometric_grid(double hi, double lo, int points) {
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i) t[i] = hi * std::pow(lo / hi, double(i) / (points - 1));
    return t;
}

}  // namespace

CountingFunction cluster_and_count(const SpectralSample& sample, int iota, int points) {
    if (iota < 0 || iota >= static_cast<int>(sample.roots.size())) throw InvalidArgument("root index out of range");
    CountingFunction cf;
    const double w = sample.roots[iota];
    const Window win = sample.windows[iota];
    double gap = 1.0;
    if (sample.roots.size() > 1) {
        gap = INFINITY;
        for (std::size_t j = 0; j < sample.roots.size(); ++j)
            if (static_cast<int>(j) != iota) gap = std::min(gap, std::abs(sample.roots[j] - w));
    }
    cf.root = w;
    const double edge = std::min(win.hi - w, w - win.lo);
    cf.tau = geometric_grid(edge, 1e-3 * gap, points);
    for (double t : cf.tau) {
        double np = 0, nm = 0;
        for (double l : sample.clusters[iota]) {
            if (l > w + t && l < win.hi) np += 1;
            if (l < w - t && l > win.lo) nm += 1;
        }
        cf.n_plus.push_back(np);
        cf.n_minus.push_back(nm);
    }
    return cf;
}

CountingFunction count_sequence(double root, const std::vector<double>& values, const std::vector<double>& mult,
                                double tau_max, double tau_min, int points) {
    if (values.size() != mult.size()) throw InvalidArgument("count_sequence: size mismatch");
    CountingFunction cf;
    cf.root = root;
    cf.tau = geometric_grid(tau_max, tau_min, points);
    for (double t : cf.tau) {
        double np = 0, nm = 0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (values[k] - root > t) np += mult[k];
            if (root - values[k] > t) nm += mult[k];
        }
        cf.n_plus.push_back(np);
        cf.n_minus.push_back(nm);
    }
    return cf;
}

PowerFit fit_power_law(const std::vector<double>& tau, const std::vector<double>& n, double drop_small_tau) {
    if (tau.size() != n.size()) throw InvalidArgument("fit_power_law: size mismatch");
    if (drop_small_tau < 0.0 || drop_small_tau >= 1.0) throw InvalidArgument("fit_power_law: bad drop fraction");
    std::vector<std::pair<double, double>> all;
    for (std::size_t i = 0; i < tau.size(); ++i) all.push_back({tau[i], n[i]});
    std::sort(all.begin(), all.end());
    const std::size_t skip = static_cast<std::size_t>(drop_small_tau * all.size());
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = skip; i < all.size(); ++i)
        if (all[i].second >= 1.0 && all[i].first > 0.0) pts.push_back(all[i]);
    if (pts.size() < 8) throw InvalidArgument("fit_power_law: fewer than 8 usable samples");
    double tmin = INFINITY, tmax = 0.0;
    for (auto& p : pts) tmin = std::min(tmin, p.first), tmax = std::max(tmax, p.first);
    if (tmax < 10.0 * tmin) throw InvalidArgument("fit_power_law: samples span less than one decade");
    std::stable_sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.second > b.second; });
    const int use = std::max(2, static_cast<int>((pts.size() + 1) / 2));
    RMat A(use, 2);
    RVec y(use);
    for (int i = 0; i < use; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = -std::log(pts[i].first);
        y(i) = std::log(pts[i].second);
    }
    const RVec c = A.colPivHouseholderQr().solve(y);
    PowerFit f;
    f.C = std::exp(c(0));
    f.h = c(1);
    f.used = use;
    for (int i = 0; i < use; ++i) {
        const double model = f.C * std::pow(pts[i].first, -f.h);
        f.residual = std::max(f.residual, std::abs(model - pts[i].second) / pts[i].second);
    }
    f.power_like = f.h > 0.1 && f.residual < 0.25;
    return f;
}

CompactnessReport compactness_from_values(const std::vector<double>& eig, const SpectralPolynomial& roots,
                                          double range_lo, double range_hi) {
    CompactnessReport r;
    std::vector<double> a;
    for (double l : eig) a.push_back(std::abs(roots(l)));
    std::sort(a.begin(), a.end(), std::greater<>());
    const int N = static_cast<int>(a.size());
    const int lo = std::max(1, static_cast<int>(range_lo * N)), hi = std::max(lo + 2, static_cast<int>(range_hi * N));
    std::vector<double> lx, ly;
    for (int j = lo; j < hi && j < N; ++j)
        if (a[j] > 0) {
            lx.push_back(std::log(j + 1.0));
            ly.push_back(std::log(a[j]));
        }
    if (lx.size() >= 2) {
        RMat A(lx.size(), 2);
        RVec y(lx.size());
        for (std::size_t i = 0; i < lx.size(); ++i) A(i, 0) = 1.0, A(i, 1) = lx[i], y(i) = ly[i];
        const RVec c = A.colPivHouseholderQr().solve(y);
        r.slope = c(1);
        r.slope_residual = (A * c - y).cwiseAbs().maxCoeff();
    }
    // distance bound on windows of half-width delta0 = gap / 4
    std::vector<double> w = roots.roots();
    std::sort(w.begin(), w.end());
    const Polynomial p = roots.poly(), dp = p.derivative();
    r.distance_violation = -INFINITY;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double gap = 1.0;
        if (w.size() > 1) {
            gap = INFINITY;
            for (std::size_t j = 0; j < w.size(); ++j)
                if (j != i) gap = std::min(gap, std::abs(w[j] - w[i]));
        }
        const double d0 = 0.25 * gap;
        double eps0 = INFINITY;
        for (int k = 0; k <= 2000; ++k) eps0 = std::min(eps0, std::abs(dp(w[i] - d0 + 2.0 * d0 * k / 2000)));
        for (double l : eig)
            if (std::abs(l - w[i]) <= d0)
                r.distance_violation = std::max(r.distance_violation, std::abs(l - w[i]) - std::abs(p(l)) / eps0);
    }
    return r;
}

CompactnessReport compactness_check(const RMat& K, const SpectralPolynomial& roots, bool exact_mapping) {
    const auto eig = spectrum(K, 1.0).values;
    CompactnessReport r = compactness_from_values(eig, roots);
    if (exact_mapping) {
        // p(K) by Horner on the monic coefficients
        const Polynomial poly = roots.poly();
        const auto& c = poly.coeffs();
        const int n = static_cast<int>(K.rows());
        RMat PK = c.back() * RMat::Identity(n, n);
        for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
            PK = K * PK;
            PK.diagonal().array() += c[k];
        }
        auto direct = spectrum(PK, 1.0).values;
        std::vector<double> mapped;
        for (double l : eig) mapped.push_back(roots(l));
        std::sort(mapped.begin(), mapped.end());
        double mx = 1e-300;
        for (double v : mapped) mx = std::max(mx, std::abs(v));
        for (std::size_t i = 0; i < mapped.size(); ++i)
            r.mapping_error = std::max(r.mapping_error, std::abs(mapped[i] - direct[i]) / mx);
    }
    return r;
}

std::vector<double> flag_spurious(const std::vector<double>& coarse, const std::vector<double>& fine, double gap,
                                  double frac) {
    std::vector<double> out;
    for (double c : coarse) {
        double best = INFINITY;
        for (double f : fine) best = std::min(best, std::abs(c - f));
        if (best > frac * gap) out.push_back(c);
    }
    return out;
}

MultiplicityFit measure_multiplicities(const std::vector<double>& eig, const std::vector<double>& targets,
                                       const std::vector<double>& other_values, int k_first, double tol) {
    MultiplicityFit f;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double t = targets[i];
        bool ambiguous = false;
        for (double o : other_values)
            if (std::abs(o - t) < 2.0 * tol) ambiguous = true;
        for (std::size_t j = 0; j < targets.size(); ++j)
            if (j != i && std::abs(targets[j] - t) < 2.0 * tol) ambiguous = true;
        if (ambiguous) continue;
        int c = 0;
        for (double l : eig)
            if (std::abs(l - t) < tol) ++c;
        if (c == 0) break;
        f.k.push_back(k_first + static_cast<int>(i));
        f.mult.push_back(c);
    }
    if (f.k.size() >= 2) {
        RMat A(f.k.size(), 2);
        RVec y(f.k.size());
        for (std::size_t i = 0; i < f.k.size(); ++i) A(i, 0) = f.k[i], A(i, 1) = 1.0, y(i) = f.mult[i];
        const RVec c = A.colPivHouseholderQr().solve(y);
        f.alpha = c(0);
        f.beta = c(1);
    }
    return f;
}

double MultiplicityFit::predict(int kk) const { return std::round(alpha * kk + beta); }

BallCounting ball_counting(const LameParams& P, const std::vector<double>& eigenvalues, int iota, int k_min,
                           int k_max, int points, double tol) {
    if (iota < 0 || iota > 2) throw InvalidArgument("ball_counting: root index out of range");
    const auto roots = essential_spectrum(P);
    const double w = roots.root(iota);
    const auto ex = sphere_exact_eigenvalues(P, k_max);
    // roots ascend as (-k, 0, k); the families accumulating there are
    // minus, zero and plus respectively
    const std::vector<double>* fam[3] = {&ex.minus, &ex.zero, &ex.plus};
    BallCounting bc;
    bc.iota = iota;
    const auto& f = *fam[iota];
    int start = k_min;
    while (start <= k_max && !(f[start - 1] - w > 1e-12 * roots.min_gap())) ++start;
    if (start > k_max) throw InvalidArgument("ball_counting: family never exceeds the root");
    bc.k_start = start;
    // multiplicity is a property of the family index, measured from k = 1
    std::vector<double> targets(f.begin(), f.begin() + std::min(k_max, 200));
    std::vector<double> others;
    for (int j = 0; j < 3; ++j)
        if (j != iota) others.insert(others.end(), fam[j]->begin(), fam[j]->begin() + std::min(k_max, 400));
    bc.mult = measure_multiplicities(eigenvalues, targets, others, 1, tol);
    if (bc.mult.k.size() < 3) throw NumericalFailure("ball_counting: fewer than 3 multiplicities measured");
    std::vector<double> vals, mult;
    for (int k = start; k <= k_max; ++k) {
        vals.push_back(f[k - 1]);
        mult.push_back(bc.mult.predict(k));
    }
    // just above the sign change the family is not yet monotone
    double tmax = 0.0;
    for (double v : vals) tmax = std::max(tmax, v - w);
    // stay above the truncation of the sequence at k_max
    const double tmin = std::max(1e-3 * tmax, 4.0 * (vals.back() - w));
    bc.counting = count_sequence(w, vals, mult, tmax, tmin, points);
    bc.fit = fit_power_law(bc.counting.tau, bc.counting.n_plus);
    return bc;
}

void write_npmat(std::ostream& os, const RMat& M) {
    os << "NPMAT v1 " << M.rows() << ' ' << M.cols() << " real\n";
    char buf[40];
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
}

RMat read_npmat(std::istream& is) {
    std::string magic, ver, kind;
    long rows = 0, cols = 0;
    is >> magic >> ver >> rows >> cols >> kind;
    if (magic != "NPMAT" || ver != "v1" || rows < 0 || cols < 0) throw InvalidArgument("not an NPMAT v1 stream");
    if (kind != "real") throw InvalidArgument("only real NPMAT matrices are read");
    RMat M(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            if (!(is >> M(i, j))) throw InvalidArgument("NPMAT stream truncated");
    return M;
}

}  // namespace npasym
