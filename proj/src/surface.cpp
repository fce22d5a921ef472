#include "npasym/surface.hpp"
#include "npasym/spherical_harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace npasym {

ParametrizedSurface ParametrizedSurface::sphere(double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
    ParametrizedSurface S;
    S.kind_ = SurfaceKind::sphere;
    S.axes_ = Vec3::Constant(radius);
    return S;
}

ParametrizedSurface ParametrizedSurface::ellipsoid(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw InvalidArgument("ellipsoid semi-axes must be positive");
    ParametrizedSurface S;
    S.kind_ = SurfaceKind::ellipsoid;
    S.axes_ = Vec3(a, b, c);
    return S;
}

ParametrizedSurface ParametrizedSurface::radial_graph(std::vector<Harmonic> harmonics) {
    ParametrizedSurface S;
    S.kind_ = SurfaceKind::radial_graph;
    for (const auto& h : harmonics) {
        if (h.l < 0 || std::abs(h.m) > h.l) throw InvalidArgument("harmonic index out of range");
        S.lmax_ = std::max(S.lmax_, h.l);
    }
    S.harm_ = std::move(harmonics);
    // positivity of r on a fine grid, with a margin for the grid spacing
    double total = 0.0;
    for (const auto& h : S.harm_) total += std::abs(h.c);
    if (total > 0.0) {
        const int nt = 24 + 4 * S.lmax_;
        for (int i = 0; i <= nt; ++i)
            for (int j = 0; j < 2 * nt; ++j) {
                const Vec3 s = from_angles(kPi * i / nt, kPi * j / nt);
                if (S.radius_fn(s, nullptr) <= 0.0)
                    throw InvalidArgument("radial graph radius must stay positive");
            }
    }
    return S;
}

std::string ParametrizedSurface::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case SurfaceKind::sphere: os << "sphere R=" << axes_(0); break;
        case SurfaceKind::ellipsoid: os << "ellipsoid " << axes_(0) << "," << axes_(1) << "," << axes_(2); break;
        case SurfaceKind::radial_graph:
            os << "radial_graph";
            for (const auto& h : harm_) os << " (" << h.l << "," << h.m << "," << h.c << ")";
            break;
    }
    return os.str();
}

double ParametrizedSurface::radius_fn(const Vec3& s, Vec3* grad) const {
    double th, ph;
    to_angles(s, th, ph);
    ShValues v;
    eval_sh(lmax_, th, ph, v);
    double r = 1.0;
    double gt = 0.0, gp = 0.0;
    for (const auto& h : harm_) {
        const int k = sh_index(h.l, h.m);
        r += h.c * v.Y(k);
        gt += h.c * v.Yt(k);
        gp += h.c * v.Yps(k);
    }
    if (grad) {
        const Vec3 et(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
        const Vec3 ep(-std::sin(ph), std::cos(ph), 0.0);
        *grad = gt * et + gp * ep;
    }
    return r;
}

Vec3 ParametrizedSurface::position(const Vec3& s) const {
    switch (kind_) {
        case SurfaceKind::sphere:
        case SurfaceKind::ellipsoid: return axes_.cwiseProduct(s);
        case SurfaceKind::radial_graph: return radius_fn(s, nullptr) * s;
    }
    return s;
}

Vec3 ParametrizedSurface::normal(const Vec3& s) const {
    switch (kind_) {
        case SurfaceKind::sphere: return s.normalized();
        case SurfaceKind::ellipsoid: return s.cwiseQuotient(axes_).normalized();
        case SurfaceKind::radial_graph: {
            Vec3 g;
            const double r = radius_fn(s, &g);
            return (r * s - g).normalized();
        }
    }
    return s;
}

double ParametrizedSurface::area_factor(const Vec3& s) const {
    switch (kind_) {
        case SurfaceKind::sphere: return axes_(0) * axes_(0);
        case SurfaceKind::ellipsoid: {
            const Vec3 cof(axes_(1) * axes_(2), axes_(0) * axes_(2), axes_(0) * axes_(1));
            return cof.cwiseProduct(s).norm();
        }
        case SurfaceKind::radial_graph: {
            Vec3 g;
            const double r = radius_fn(s, &g);
            return r * std::sqrt(r * r + g.squaredNorm());
        }
    }
    return 1.0;
}

Vec3 ParametrizedSurface::param_from_point(const Vec3& X) const {
    if (kind_ == SurfaceKind::ellipsoid) return X.cwiseQuotient(axes_).normalized();
    return X.normalized();
}

ParametrizedSurface::AngleDerivatives ParametrizedSurface::angle_derivatives(double th, double ph) const {
    const double ct = std::cos(th), st = std::sin(th), cp = std::cos(ph), sp = std::sin(ph);
    const Vec3 s(st * cp, st * sp, ct);
    const Vec3 s_t(ct * cp, ct * sp, -st);
    const Vec3 s_p(-st * sp, st * cp, 0.0);
    const Vec3 s_tt = -s;
    const Vec3 s_tp(-ct * sp, ct * cp, 0.0);
    const Vec3 s_pp(-st * cp, -st * sp, 0.0);
    AngleDerivatives d;
    if (kind_ != SurfaceKind::radial_graph) {
        d.X = axes_.cwiseProduct(s);
        d.Xt = axes_.cwiseProduct(s_t);
        d.Xp = axes_.cwiseProduct(s_p);
        d.Xtt = axes_.cwiseProduct(s_tt);
        d.Xtp = axes_.cwiseProduct(s_tp);
        d.Xpp = axes_.cwiseProduct(s_pp);
        return d;
    }
    ShValues v;
    eval_sh(lmax_, th, ph, v, true);
    double r = 1.0, rt = 0, rp = 0, rtt = 0, rtp = 0, rpp = 0;
    for (const auto& h : harm_) {
        const int k = sh_index(h.l, h.m);
        r += h.c * v.Y(k);
        rt += h.c * v.Yt(k);
        rp += h.c * v.Yps(k) * st;
        rtt += h.c * v.Ytt(k);
        rtp += h.c * v.Ytp(k);
        rpp += h.c * v.Ypp(k);
    }
    d.X = r * s;
    d.Xt = rt * s + r * s_t;
    d.Xp = rp * s + r * s_p;
    d.Xtt = rtt * s + 2 * rt * s_t + r * s_tt;
    d.Xtp = rtp * s + rt * s_p + rp * s_t + r * s_tp;
    d.Xpp = rpp * s + 2 * rp * s_p + r * s_pp;
    return d;
}

FormCurvatures fundamental_form_curvatures(const ParametrizedSurface& S, double theta, double phi) {
    const auto d = S.angle_derivatives(theta, phi);
    const double E = d.Xt.dot(d.Xt), F = d.Xt.dot(d.Xp), G = d.Xp.dot(d.Xp);
    const double det = E * G - F * F;
    if (!(det > 1e-20 * E * E + 1e-300)) throw NumericalFailure("degenerate parametrization (first fundamental form)");
    const Vec3 nu = S.normal(from_angles(theta, phi));
    const double L = d.Xtt.dot(nu), M = d.Xtp.dot(nu), N = d.Xpp.dot(nu);
    FormCurvatures c;
    c.gauss = (L * N - M * M) / det;
    c.mean = (E * N - 2 * F * M + G * L) / (2 * det);
    const double disc = std::sqrt(std::max(0.0, c.mean * c.mean - c.gauss));
    c.k1 = c.mean - disc;
    c.k2 = c.mean + disc;
    return c;
}

namespace {

Vec3 least_aligned_axis(const Vec3& n) {
    int i = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(n(k)) < std::abs(n(i))) i = k;
    Vec3 v = Vec3::Zero();
    v(i) = 1.0;
    return (v - v.dot(n) * n).normalized();
}

}  // namespace

CChart::CChart(const ParametrizedSurface& S, const Vec3& s0, double radius, double frame_angle)
    : S_(std::make_shared<const ParametrizedSurface>(S)), s0_(s0.normalized()), radius_(radius) {
    if (!(radius > 0.0)) throw InvalidArgument("chart radius must be positive");
    x0_ = S_->position(s0_);
    const Vec3 n = S_->normal(s0_);
    const Vec3 b1 = least_aligned_axis(s0_);
    B_.col(0) = s0_;
    B_.col(1) = b1;
    B_.col(2) = s0_.cross(b1);

    const Vec3 a1 = least_aligned_axis(n);
    E_.col(0) = a1;
    E_.col(1) = n.cross(a1);
    E_.col(2) = n;
    auto jac0 = [this] {
        const double h = 1e-6;
        Mat2 J;
        for (int b = 0; b < 2; ++b) {
            const Vec3 sp = (s0_ + h * B_.col(1 + b)).normalized();
            const Vec3 sm = (s0_ - h * B_.col(1 + b)).normalized();
            J.col(b) = (coords(S_->position(sp)) - coords(S_->position(sm))) / (2 * h);
        }
        Jinv0_ = J.inverse();
    };
    jac0();

    const Mat2 H = numeric_hessian();
    Eigen::SelfAdjointEigenSolver<Mat2> es(H);
    k1_ = es.eigenvalues()(0);
    k2_ = es.eigenvalues()(1);
    umbilic_ = std::abs(k1_ - k2_) < 1e-8 * (std::abs(k1_) + std::abs(k2_) + 1.0);
    if (!umbilic_) {
        const Vec2 v = es.eigenvectors().col(0);
        const Vec3 e1 = (v(0) * E_.col(0) + v(1) * E_.col(1)).normalized();
        E_.col(0) = e1;
        E_.col(1) = n.cross(e1);
    }
    if (frame_angle != 0.0) {
        const double c = std::cos(frame_angle), s = std::sin(frame_angle);
        const Vec3 e1 = c * E_.col(0) + s * E_.col(1);
        E_.col(0) = e1;
        E_.col(1) = n.cross(e1);
    }
    jac0();
}

CChart CChart::rotated(double angle) const {
    CChart c = *this;
    const double co = std::cos(angle), si = std::sin(angle);
    const Vec3 e1 = co * E_.col(0) + si * E_.col(1);
    c.E_.col(0) = e1;
    c.E_.col(1) = E_.col(2).cross(e1);
    const Mat2 R = (Mat2() << co, -si, si, co).finished();
    // coordinates in the rotated frame are R^T times the old ones
    c.Jinv0_ = Jinv0_ * R;
    return c;
}

Vec2 CChart::coords(const Vec3& X) const {
    const Vec3 d = X - x0_;
    return {d.dot(E_.col(0)), d.dot(E_.col(1))};
}

Vec3 CChart::solve(const Vec2& x) const {
    if (x.norm() > radius_) throw InvalidArgument("chart coordinates outside the chart radius");
    Vec2 t = Jinv0_ * x;
    auto param = [this](const Vec2& tt) { return Vec3((s0_ + tt(0) * B_.col(1) + tt(1) * B_.col(2)).normalized()); };
    const double scale = std::max(1.0, x0_.norm());
    for (int it = 0; it < 60; ++it) {
        const Vec3 s = param(t);
        const Vec2 r = coords(S_->position(s)) - x;
        if (r.norm() < 4e-16 * scale) return s;
        const double h = 1e-7;
        Mat2 J;
        for (int b = 0; b < 2; ++b) {
            Vec2 tb = t;
            tb(b) += h;
            J.col(b) = (coords(S_->position(param(tb))) - x - r) / h;
        }
        const Vec2 dt = J.fullPivLu().solve(r);
        t -= dt;
        if (!std::isfinite(t.norm()) || t.norm() > 2.0)
            throw NumericalFailure("chart: surface is not a graph over the tangent plane here");
        if (dt.norm() < 1e-16 * (1.0 + t.norm())) return param(t);
    }
    const Vec3 s = param(t);
    if ((coords(S_->position(s)) - x).norm() < 1e-12 * scale) return s;
    throw NumericalFailure("chart: height function solve did not converge");
}

Vec3 CChart::param_at(const Vec2& x) const { return solve(x); }

double CChart::F(const Vec2& x) const { return (S_->position(solve(x)) - x0_).dot(E_.col(2)); }

Vec3 CChart::point(const Vec2& x) const { return S_->position(solve(x)); }

Vec2 CChart::gradF(const Vec2& x) const {
    const Vec3 nu = S_->normal(solve(x));
    const double nn = nu.dot(E_.col(2));
    return {-nu.dot(E_.col(0)) / nn, -nu.dot(E_.col(1)) / nn};
}

Mat2 CChart::numeric_hessian() const {
    auto f = [this](double a, double b) {
        if (a == 0.0 && b == 0.0) return 0.0;
        return F(Vec2(a, b));
    };
    auto level = [&](double h) {
        Mat2 H;
        H(0, 0) = (f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h);
        H(1, 1) = (f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h);
        H(0, 1) = H(1, 0) = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
        return H;
    };
    const double h = 2e-3 * std::max(1.0, x0_.norm());
    return (4.0 * level(h) - level(2 * h)) / 3.0;
}

Mat2 CChart::hessianF() const { return numeric_hessian(); }

PrincipalCurvatures principal_curvatures(const ParametrizedSurface& S, const Vec3& point) {
    CChart c(S, S.param_from_point(point));
    return {c.kappa1(), c.kappa2(), c.e1(), c.e2()};
}

ConsistentChart consistent_chart(const CChart& base, const Vec3& q_param) {
    const auto& S = base.surface();
    ConsistentChart cc;
    cc.q_param = q_param.normalized();
    cc.q_point = S.position(cc.q_param);
    cc.x_prime = base.coords(cc.q_point);
    if (cc.x_prime.norm() > base.radius()) throw InvalidArgument("consistent_chart: point outside the chart radius");
    cc.nu_q = S.normal(cc.q_param);
    const Vec3 e1 = base.e1(), e2 = base.e2(), n = base.n();
    cc.f1 = e1 - e1.dot(cc.nu_q) * cc.nu_q;
    cc.f2 = e2 - e2.dot(cc.nu_q) * cc.nu_q;
    const double nn = cc.nu_q.dot(n);
    const Vec2 gF(-cc.nu_q.dot(e1) / nn, -cc.nu_q.dot(e2) / nn);
    const Vec3 dX1 = e1 + gF(0) * n, dX2 = e2 + gF(1) * n;
    Mat2 G, R;
    G << cc.f1.dot(cc.f1), cc.f1.dot(cc.f2), cc.f2.dot(cc.f1), cc.f2.dot(cc.f2);
    R << cc.f1.dot(dX1), cc.f1.dot(dX2), cc.f2.dot(dX1), cc.f2.dot(dX2);
    cc.DZ = G.inverse() * R;
    Mat3 F;
    F.col(0) = cc.f1;
    F.col(1) = cc.f2;
    F.col(2) = cc.nu_q;
    cc.U = base.frame().transpose() * F;
    return cc;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = z;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

double SurfaceQuadrature::area() const {
    double a = 0.0;
    for (const auto& q : nodes) a += q.w;
    return a;
}

SurfaceQuadrature surface_quadrature(const ParametrizedSurface& S, int n) {
    if (n < 8) throw InvalidArgument("surface quadrature needs n >= 8");
    std::vector<double> t, wt;
    gauss_legendre(n, t, wt);
    SurfaceQuadrature q;
    q.n = n;
    const int np = 2 * n;
    for (int i = 0; i < n; ++i) {
        const double th = std::acos(t[i]);
        for (int j = 0; j < np; ++j) {
            const double ph = 2.0 * kPi * j / np;
            QuadratureNode nd;
            nd.theta = th;
            nd.phi = ph;
            nd.s = from_angles(th, ph);
            nd.x = S.position(nd.s);
            nd.nu = S.normal(nd.s);
            nd.w = wt[i] * (2.0 * kPi / np) * S.area_factor(nd.s);
            q.nodes.push_back(nd);
        }
    }
    return q;
}

}  // namespace npasym
