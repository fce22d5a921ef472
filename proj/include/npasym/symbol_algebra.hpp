#pragma once

#include "npasym/polynomial.hpp"
#include "npasym/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace npasym {

using SymbolFn = std::function<CMat(const Vec2& x, const Vec2& xi)>;
using SymbolGradFn = std::function<std::array<CMat, 2>(const Vec2& x, const Vec2& xi)>;

enum class Realness { general, hermitian, similar_to_hermitian };

// Two leading terms (degrees 0 and -1) of a matrix-valued classical symbol in
// a chart.  Derivative evaluators are optional; when absent the accessors fall
// back to central differences (tangential on the xi-circle so homogeneity is
// respected).
struct TwoTermSymbol {
    int dim = 0;
    SymbolFn a0;
    SymbolFn a_m1;
    SymbolGradFn dx_a0;
    SymbolGradFn dxi_a0;
    Realness realness = Realness::general;

    CMat principal(const Vec2& x, const Vec2& xi) const;
    CMat minus_one(const Vec2& x, const Vec2& xi) const;
    std::array<CMat, 2> grad_x(const Vec2& x, const Vec2& xi) const;
    std::array<CMat, 2> grad_xi(const Vec2& x, const Vec2& xi) const;
};

TwoTermSymbol identity_symbol(int dim);

// Symbol built from x-independent closures; derivative data is filled in.
TwoTermSymbol constant_in_x(int dim, SymbolFn a0, SymbolFn a_m1, SymbolGradFn dxi_a0 = {});

TwoTermSymbol compose(const TwoTermSymbol& A, const TwoTermSymbol& B);
TwoTermSymbol shift(const TwoTermSymbol& A, double omega);
TwoTermSymbol scale(const TwoTermSymbol& A, double factor);

struct BiOptions {
    // Allowed size of p_iota(a0) relative to max(1, |a0|)^(2L-1).
    double residual_tol = 1e-8;
};

// Largest singular value of p_iota(a0(x, xi)).
double order_zero_residual(const TwoTermSymbol& A, const SpectralPolynomial& P, int iota,
                           const Vec2& x, const Vec2& xi);

// Degree -1 principal symbol b_{iota,-1} of p_iota(A).  The result has a0 == 0
// and carries b in a_m1.  Evaluation throws NumericalFailure when the
// order-zero part p_iota(a0) does not vanish.
TwoTermSymbol build_Bi_symbol(const TwoTermSymbol& A, const SpectralPolynomial& P, int iota,
                              BiOptions opt = {});

// a_sub = a_m1 + (1/2i) sum_alpha d_{x_alpha} d_{xi_alpha} a0.
SymbolFn subprincipal(const TwoTermSymbol& A);

struct DegeneracyReport {
    bool degenerate = false;
    double max_norm = 0.0;
};

struct SymbolSample {
    Vec2 x;
    Vec2 xi;
};

DegeneracyReport detect_degeneracy(const TwoTermSymbol& b, const std::vector<SymbolSample>& samples,
                                   double tol = 1e-6);

// Eigenvalues of a matrix whose spectrum should be real.  Imaginary parts
// below tol * spectral radius are dropped, larger ones raise NumericalFailure.
std::vector<double> real_eigenvalues(const CMat& M, double tol = 1e-8);

}  // namespace npasym
