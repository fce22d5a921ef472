#pragma once

#include <vector>

namespace npasym {

// Real polynomial with coefficients in ascending powers: c[0] + c[1] w + ...
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial from_roots(const std::vector<double>& roots);
    static Polynomial constant(double c) { return Polynomial({c}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }
    double operator()(double w) const;
    Polynomial derivative() const;

    Polynomial operator*(const Polynomial& o) const;
    bool divides(const Polynomial& o, double tol = 1e-10) const;

private:
    std::vector<double> c_;
};

// Monic polynomial p(w) = prod (w - w_l) with simple real roots.
class SpectralPolynomial {
public:
    explicit SpectralPolynomial(std::vector<double> roots);

    const std::vector<double>& roots() const { return roots_; }
    int degree() const { return static_cast<int>(roots_.size()); }
    double root(int iota) const;
    double min_gap() const;
    Polynomial poly() const { return Polynomial::from_roots(roots_); }
    double operator()(double w) const;

    // prod_{l != iota} (w_iota - w_l)^2, the derivative of p_iota at its own root.
    double projector_slope(int iota) const;

private:
    std::vector<double> roots_;
};

// p_iota(w) = (w - w_iota) prod_{l != iota} (w - w_l)^2.  Indices are 0-based.
Polynomial projector_polynomial(const SpectralPolynomial& P, int iota);

// (w - w_iota) prod_{l != iota} (w - w_l)^{order + 1}, order >= 2.
Polynomial degenerate_polynomial(const SpectralPolynomial& P, int iota, int order);

}  // namespace npasym
