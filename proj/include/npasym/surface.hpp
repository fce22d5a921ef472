#pragma once

#include "npasym/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace npasym {

enum class SurfaceKind { sphere, ellipsoid, radial_graph };

struct Harmonic {
    int l = 0;
    int m = 0;
    double c = 0.0;
};

// Closed star-shaped surface parametrized over the unit sphere: every point is
// X(s) for a unit vector s.  Sphere X = R s, ellipsoid X = diag(a,b,c) s,
// radial graph X = r(s) s with r = 1 + sum c_lm Y_lm.
class ParametrizedSurface {
public:
    static ParametrizedSurface sphere(double radius = 1.0);
    static ParametrizedSurface ellipsoid(double a, double b, double c);
    static ParametrizedSurface radial_graph(std::vector<Harmonic> harmonics);

    SurfaceKind kind() const { return kind_; }
    const Vec3& axes() const { return axes_; }
    const std::vector<Harmonic>& harmonics() const { return harm_; }
    std::string describe() const;

    Vec3 position(const Vec3& s) const;
    Vec3 normal(const Vec3& s) const;            // outward unit normal
    double area_factor(const Vec3& s) const;     // dS per unit-sphere area element
    Vec3 param_from_point(const Vec3& X) const;  // inverse of position for points on S

    struct AngleDerivatives {
        Vec3 X, Xt, Xp, Xtt, Xtp, Xpp;
    };
    AngleDerivatives angle_derivatives(double theta, double phi) const;

private:
    SurfaceKind kind_ = SurfaceKind::sphere;
    Vec3 axes_{1, 1, 1};
    std::vector<Harmonic> harm_;
    int lmax_ = 0;

    double radius_fn(const Vec3& s, Vec3* grad) const;
};

// Principal curvatures from the first and second fundamental forms of the
// (theta, phi) parametrization.  Throws at the parametrization poles.
struct FormCurvatures {
    double k1, k2, gauss, mean;
};
FormCurvatures fundamental_form_curvatures(const ParametrizedSurface& S, double theta, double phi);

// Curvature-aligned tangent-plane chart: X(x) = origin + x1 e1 + x2 e2 + F(x) n.
class CChart {
public:
    CChart() = default;
    CChart(const ParametrizedSurface& S, const Vec3& s0, double radius = 0.5, double frame_angle = 0.0);

    const ParametrizedSurface& surface() const { return *S_; }
    const Vec3& origin() const { return x0_; }
    const Vec3& origin_param() const { return s0_; }
    const Mat3& frame() const { return E_; }  // columns e1, e2, n
    Vec3 e1() const { return E_.col(0); }
    Vec3 e2() const { return E_.col(1); }
    Vec3 n() const { return E_.col(2); }
    double kappa1() const { return k1_; }
    double kappa2() const { return k2_; }
    double radius() const { return radius_; }
    bool umbilic() const { return umbilic_; }

    // Parameter of the surface point above chart coordinates x; throws when
    // |x| exceeds the chart radius or the graph equation has no solution.
    Vec3 param_at(const Vec2& x) const;
    double F(const Vec2& x) const;
    Vec3 point(const Vec2& x) const;
    Vec2 gradF(const Vec2& x) const;
    Vec2 coords(const Vec3& X) const;
    Mat2 hessianF() const;

    // Tangent frame rotated by angle in the (e1, e2) plane.
    CChart rotated(double angle) const;

private:
    std::shared_ptr<const ParametrizedSurface> S_;
    Vec3 s0_ = Vec3::UnitZ(), x0_ = Vec3::Zero();
    Mat3 E_ = Mat3::Identity();
    Mat3 B_ = Mat3::Identity();  // s0 and an orthonormal tangent pair for the Newton parametrization
    Mat2 Jinv0_ = Mat2::Identity();  // inverse Jacobian of the Newton map at the origin
    double k1_ = 0, k2_ = 0, radius_ = 0.5;
    bool umbilic_ = false;

    Vec3 solve(const Vec2& x) const;
    Mat2 numeric_hessian() const;
};

struct PrincipalCurvatures {
    double k1, k2;
    Vec3 d1, d2;
};
PrincipalCurvatures principal_curvatures(const ParametrizedSurface& S, const Vec3& point);

// Chart at a nearby point q built from the base frame projected onto T_q, as
// in the consistent-coordinates construction.
struct ConsistentChart {
    Vec3 q_param, q_point, nu_q;
    Vec3 f1, f2;
    Vec2 x_prime;  // base-chart coordinates of q
    Mat2 DZ;       // d y / d x at x_prime
    Mat3 U;        // base-frame components of (f1, f2, nu_q)
};
ConsistentChart consistent_chart(const CChart& base, const Vec3& q_param);

struct QuadratureNode {
    Vec3 s;       // parameter on the unit sphere
    double theta, phi;
    Vec3 x;       // surface point
    Vec3 nu;      // outward normal
    double w;     // area weight
};

struct SurfaceQuadrature {
    int n = 0;    // Gauss-Legendre order in theta; 2n trapezoid points in phi
    std::vector<QuadratureNode> nodes;
    double area() const;
};

SurfaceQuadrature surface_quadrature(const ParametrizedSurface& S, int n);

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace npasym
