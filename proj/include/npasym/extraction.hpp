#pragma once

#include "npasym/elasticity.hpp"
#include "npasym/surface.hpp"
#include "npasym/symbol_algebra.hpp"

#include <array>
#include <functional>
#include <vector>

namespace npasym {

// NP operator kernel at the chart origin and the surface point with planar
// coordinates -z, expressed in the chart frame and against the chart measure.
Mat3 chart_kernel(const LameParams& P, const CChart& chart, const Vec2& z);

// Part Omega(theta) / |z|^a of a kernel, sampled at theta_k = 2 pi k / N.
struct HomogeneousKernelPart {
    int a = 2;
    std::vector<Mat3> samples;
    Vec3 basepoint = Vec3::Zero();

    int size() const { return static_cast<int>(samples.size()); }
    double angle(int k) const;
    Mat3 operator()(double theta) const;  // trigonometric interpolation
};

struct KernelExpansion {
    HomogeneousKernelPart K0;   // a = 2
    HomogeneousKernelPart Km1;  // a = 1
    double err_estimate = 0.0;  // relative change between fit orders
    double oddness = 0.0;       // max |K0(theta+pi) + K0(theta)| / max |K0|
};

struct ExpansionOptions {
    std::vector<double> eps_ladder{6.25e-4, 1.25e-3, 2.5e-3, 5e-3, 1e-2};
    int directions = 128;
    double tol = 1e-3;
};

KernelExpansion homogeneous_parts(const std::function<Mat3(const Vec2&)>& kernel, const ExpansionOptions& opt = {});

// 2^{2-a} pi (-i)^{|n|} Gamma((|n|-a+2)/2) / Gamma((|n|+a)/2).
cplx fourier_multiplier(int n, int a);

// Homogeneous symbol sum_n s_n e^{i n phi} |xi|^{degree} of a kernel part.
class AngularSymbol {
public:
    AngularSymbol() = default;
    AngularSymbol(int degree, std::vector<int> modes, std::vector<CMat3> coeffs);

    int degree() const { return degree_; }
    CMat3 operator()(const Vec2& xi) const;
    std::array<CMat3, 2> gradient(const Vec2& xi) const;
    const std::vector<int>& modes() const { return modes_; }
    const std::vector<CMat3>& coeffs() const { return coeffs_; }

private:
    int degree_ = 0;
    std::vector<int> modes_;
    std::vector<CMat3> coeffs_;
};

// Throws NumericalFailure for a = 2 input with even modes above 1e-8.
AngularSymbol angular_fourier_symbol(const HomogeneousKernelPart& part, double oddness_tol = 1e-8);

struct FieldOptions {
    double chart_radius = 0.25;
    ExpansionOptions expansion;
    double k0_tol = 1e-4;
    double dx_step = 1e-3;
    BiOptions bi;
    // optional per-node rotation of the tangent frame (radians)
    std::vector<double> frame_angles;
};

// x-derivative of k0 at the chart origin, by Richardson-extrapolated central
// differences of the principal symbol carried over from consistent charts at
// offsets (+h, -h, +2h, -2h) along e1 and e2.
struct PrincipalDerivative {
    LameParams P;
    double h = 0.0;
    std::array<std::array<ConsistentChart, 4>, 2> transitions;

    std::array<CMat3, 2> operator()(const Vec2& xi) const;
};

struct NodeSymbols {
    Vec3 s;
    double weight = 0.0;
    CChart chart;
    KernelExpansion expansion;
    AngularSymbol k0, km1;
    double k0_error = 0.0;  // max deviation from np_principal_symbol on the circle
    PrincipalDerivative dx_k0;
    TwoTermSymbol symbol;  // evaluable at the chart origin x = 0 only
    std::vector<TwoTermSymbol> m;  // b_{iota,-1} per root
};

struct SymbolField {
    LameParams P;
    SpectralPolynomial roots{std::vector<double>{0.0}};
    std::vector<NodeSymbols> nodes;
};

struct FieldNode {
    Vec3 s;
    double weight = 0.0;
};

std::vector<FieldNode> field_nodes(const SurfaceQuadrature& q);

NodeSymbols node_symbols(const ParametrizedSurface& S, const LameParams& P, const FieldNode& node,
                         const FieldOptions& opt, double frame_angle = 0.0);

SymbolField np_symbol_field(const ParametrizedSurface& S, const LameParams& P, const std::vector<FieldNode>& nodes,
                            const FieldOptions& opt = {});

}  // namespace npasym
