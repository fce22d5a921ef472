#include "npasym/polynomial.hpp"
#include "npasym/types.hpp"

#include <algorithm>
#include <cmath>

namespace npasym {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
}

Polynomial Polynomial::from_roots(const std::vector<double>& roots) {
    Polynomial p({1.0});
    for (double r : roots) p = p * Polynomial({-r, 1.0});
    return p;
}

double Polynomial::operator()(double w) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * w + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
}

bool Polynomial::divides(const Polynomial& o, double tol) const {
    // synthetic long division of o by *this, remainder must vanish
    std::vector<double> rem = o.c_;
    const int n = degree();
    const double lead = c_.back();
    if (n > o.degree()) return false;
    double scale = 0.0;
    for (double v : o.c_) scale = std::max(scale, std::abs(v));
    for (int k = o.degree(); k >= n; --k) {
        const double q = rem[k] / lead;
        for (int j = 0; j <= n; ++j) rem[k - n + j] -= q * c_[j];
    }
    for (int k = 0; k < n; ++k)
        if (std::abs(rem[k]) > tol * std::max(1.0, scale)) return false;
    return true;
}

SpectralPolynomial::SpectralPolynomial(std::vector<double> roots) : roots_(std::move(roots)) {
    if (roots_.empty()) throw InvalidArgument("spectral polynomial needs at least one root");
    for (std::size_t i = 0; i < roots_.size(); ++i)
        for (std::size_t j = i + 1; j < roots_.size(); ++j)
            if (roots_[i] == roots_[j]) throw InvalidArgument("spectral polynomial roots must be distinct");
}

double SpectralPolynomial::root(int iota) const {
    if (iota < 0 || iota >= degree()) throw InvalidArgument("root index out of range");
    return roots_[iota];
}

double SpectralPolynomial::min_gap() const {
    double g = INFINITY;
    for (std::size_t i = 0; i < roots_.size(); ++i)
        for (std::size_t j = i + 1; j < roots_.size(); ++j) g = std::min(g, std::abs(roots_[i] - roots_[j]));
    return g;
}

double SpectralPolynomial::operator()(double w) const {
    double v = 1.0;
    for (double r : roots_) v *= (w - r);
    return v;
}

double SpectralPolynomial::projector_slope(int iota) const {
    const double wi = root(iota);
    double v = 1.0;
    for (int l = 0; l < degree(); ++l)
        if (l != iota) v *= (wi - roots_[l]) * (wi - roots_[l]);
    return v;
}

namespace {

Polynomial root_power_product(const SpectralPolynomial& P, int iota, int order) {
    const double wi = P.root(iota);
    Polynomial p({-wi, 1.0});
    for (int l = 0; l < P.degree(); ++l) {
        if (l == iota) continue;
        for (int k = 0; k <= order; ++k) p = p * Polynomial({-P.roots()[l], 1.0});
    }
    return p;
}

}  // namespace

Polynomial projector_polynomial(const SpectralPolynomial& P, int iota) {
    return root_power_product(P, iota, 1);
}

Polynomial degenerate_polynomial(const SpectralPolynomial& P, int iota, int order) {
    if (order < 2) throw InvalidArgument("degeneracy order must be at least 2");
    return root_power_product(P, iota, order);
}

}  // namespace npasym
