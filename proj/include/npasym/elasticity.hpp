#pragma once

#include "npasym/polynomial.hpp"
#include "npasym/types.hpp"

#include <vector>

namespace npasym {

struct LameParams {
    double lambda = 1.0;
    double mu = 1.0;
    double lambda_p = 0.0;  // lambda'
    double mu_p = 0.0;      // mu'
    double kappa = 0.0;     // half-width of the essential spectrum
    double m = 0.0;
};

// Validates mu > 0, 3 lambda + 2 mu > 0 and fills the derived constants.
LameParams make_lame(double lambda, double mu);

// Kupradze-normalized Kelvin matrix lambda' delta/|x-y| + mu' (x-y)(x-y)^T/|x-y|^3.
Mat3 kelvin_matrix(const LameParams& P, const Vec3& x, const Vec3& y);
Mat3 single_layer_kernel(const LameParams& P, const Vec3& x, const Vec3& y);

// Double-layer kernel in the normalization of kelvin_matrix (no transpose,
// no factor), with nu the unit normal at y.
Mat3 np_kernel(const LameParams& P, const Vec3& x, const Vec3& y, const Vec3& nu_y);

// Layer-potential normalization used by assembly and symbol extraction: the
// NP operator has kernel 0.5 * np_kernel(x, y)^T and the single layer
// operator has kernel -0.5 * kelvin_matrix.  With these the principal symbol
// is np_principal_symbol and rigid motions are eigenfunctions with value 1/2.
Mat3 np_operator_kernel(const LameParams& P, const Vec3& x, const Vec3& y, const Vec3& nu_y);
Mat3 single_layer_operator_kernel(const LameParams& P, const Vec3& x, const Vec3& y);

CMat3 np_principal_symbol(const LameParams& P, const Vec2& xi);
Mat2 lambda_projector(const Vec2& xi);
Mat3 single_layer_symbol(const LameParams& P, const Vec2& xi);

struct SymmetrizerSymbols {
    Mat3 r1;     // inverse of the single layer symbol
    Mat3 q_mh;   // (-s)^{1/2}
    Mat3 z_h;    // q^{-1}
};
SymmetrizerSymbols symmetrizer_symbols(const LameParams& P, const Vec2& xi);

// Roots {-kappa, 0, kappa} ascending.
SpectralPolynomial essential_spectrum(const LameParams& P);

struct SphereEigenvalues {
    std::vector<double> zero, minus, plus;  // index k-1 holds lambda_k
};
SphereEigenvalues sphere_exact_eigenvalues(const LameParams& P, int k_max);

}  // namespace npasym
