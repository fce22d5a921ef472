#pragma once

#include "npasym/elasticity.hpp"
#include "npasym/polynomial.hpp"
#include "npasym/surface.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace npasym {

// Vector spherical harmonic trial space on the parameter sphere, complete up
// to degree J: s Y_jm (j >= 0), grad Y_jm / sqrt(j(j+1)) and
// s x grad Y_jm / sqrt(j(j+1)) (j >= 1).
struct VshBasis {
    int J = 0;
    int scalar_count() const { return (J + 1) * (J + 1); }
    int dim() const { return 3 * scalar_count() - 2; }
    // evaluate all basis fields at a parameter point: 3 x dim()
    RMat evaluate(const Vec3& s) const;
    // degree j and family (0 radial, 1 gradient, 2 curl) of basis index k
    void describe(int k, int& j, int& family) const;
};

struct DiscretizationOptions {
    int n = 24;           // Gauss-Legendre order of the surface rule; J = n - 2
    int extra_theta = 8;  // rotated-grid polar order is n + extra_theta
    bool single_layer = true;
};

struct Discretization {
    int n = 0;
    VshBasis basis;
    SurfaceQuadrature quad;
    RMat K;  // NP operator in an L2(surface)-orthonormal basis of the trial space
    RMat S;  // single layer operator in the same basis, symmetrized
    double s_asymmetry = 0.0;  // |S - S^T| / |S| before symmetrization
    int dof() const { return static_cast<int>(K.rows()); }
};

Discretization discretize(const ParametrizedSurface& surf, const LameParams& P, const DiscretizationOptions& opt = {});

// Coefficients (in the orthonormal basis of d) of the L2 projection of a
// vector field given at parameter points.
RVec project_field(const Discretization& d, const std::function<Vec3(const Vec3& s, const Vec3& x)>& field);

struct SpectrumResult {
    std::vector<double> values;  // ascending
    double max_imag = 0.0;       // largest |Im| relative to the spectral radius
};

// Full nonsymmetric eigenvalue solve; imaginary parts above tol times the
// spectral radius raise NumericalFailure.
SpectrumResult spectrum(const RMat& M, double realness_tol = 1e-4);
std::vector<double> symmetric_spectrum(const RMat& M);

struct SymmetrizeResult {
    RMat A;
    double plemelj_residual = 0.0;  // |K S - S K^T| / (|S| |K|)
    double asymmetry = 0.0;         // |A0 - A0^T| / |A0| before symmetrization
};
SymmetrizeResult symmetrize(const RMat& K, const RMat& S);

struct WindowPolicy {
    double guard = 0.05;  // fraction of the gap excluded at the far edge
};

struct Window {
    double lo = 0.0, hi = 0.0;  // zeta_-, zeta_+
};

struct SpectralSample {
    std::vector<double> eigenvalues;
    int N = 0;
    std::vector<double> roots;
    std::vector<Window> windows;
    std::vector<std::vector<double>> clusters;  // per root
    std::vector<double> unclustered;
};

SpectralSample make_sample(const std::vector<double>& eigenvalues, const SpectralPolynomial& roots,
                           const WindowPolicy& policy = {});
std::vector<Window> root_windows(const SpectralPolynomial& roots, const WindowPolicy& policy = {});

struct CountingFunction {
    double root = 0.0;
    std::vector<double> tau, n_plus, n_minus;
};

// n_+(tau) = #{lambda in (w + tau, zeta_+)}, n_- analogous, on a geometric
// tau grid from the window edge down to 1e-3 gap.
CountingFunction cluster_and_count(const SpectralSample& sample, int iota, int points = 40);

// Counting function of explicit sequences lambda_k with multiplicities m_k,
// attributed to the cluster of root w by family rather than by window.
CountingFunction count_sequence(double root, const std::vector<double>& values, const std::vector<double>& mult,
                                double tau_max, double tau_min, int points = 40);

struct PowerFit {
    double h = 0.0;         // exponent in n ~ C tau^{-h}
    double C = 0.0;
    double residual = 0.0;  // max relative residual over the fitted range
    int used = 0;
    bool power_like = false;  // clear accumulation: h > 0.1 and residual < 0.25
};

// Least squares of log n on log tau over the largest-n half of the samples,
// after dropping the given fraction of smallest-tau samples (unresolved
// regime of a finite matrix; 0 for exact sequences).
PowerFit fit_power_law(const std::vector<double>& tau, const std::vector<double>& n, double drop_small_tau = 0.0);

struct CompactnessReport {
    double mapping_error = 0.0;  // max |eig p(K) - p(eig K)| / max |p|
    double slope = 0.0;          // log-log slope of sorted |p(lambda_j)| vs j on the central range
    double slope_residual = 0.0;
    double distance_violation = 0.0;  // max of |lambda - w| - |p(lambda)| / eps0 over the windows (<= 0 holds)
};

// The slope is fitted over sorted indices [range_lo N, range_hi N): below it
// the few lowest modes are pre-asymptotic, above it the truncation of the
// trial space cuts the families unevenly.
CompactnessReport compactness_check(const RMat& K, const SpectralPolynomial& roots, bool exact_mapping = true);
CompactnessReport compactness_from_values(const std::vector<double>& eig, const SpectralPolynomial& roots,
                                          double range_lo = 0.2, double range_hi = 0.5);

// Eigenvalues of the coarse spectrum farther than frac * gap from every fine
// eigenvalue.
std::vector<double> flag_spurious(const std::vector<double>& coarse, const std::vector<double>& fine, double gap,
                                  double frac = 0.25);

struct MultiplicityFit {
    std::vector<int> k;     // family indices that were measured
    std::vector<int> mult;  // measured cluster sizes
    double alpha = 0.0, beta = 0.0;  // m_k ~ alpha k + beta
    // multiplicities are integers, so the linear model is rounded
    double predict(int kk) const;
};

// Count computed eigenvalues within tol of each target value; targets that lie
// within 2 tol of another family's value are skipped as ambiguous.
MultiplicityFit measure_multiplicities(const std::vector<double>& eig, const std::vector<double>& targets,
                                       const std::vector<double>& other_values, int k_first, double tol);

// Counting route on the ball: exact family values of the root's family with
// multiplicities measured from a discretized spectrum and extrapolated
// linearly.  The family starts at the first k >= k_min strictly on the + side
// of the root; tau runs from the largest family gap down to 1e-3 of it.
struct BallCounting {
    int iota = 0;
    int k_start = 0;
    MultiplicityFit mult;
    CountingFunction counting;
    PowerFit fit;
};

BallCounting ball_counting(const LameParams& P, const std::vector<double>& eigenvalues, int iota, int k_min = 2,
                           int k_max = 20000, int points = 40, double tol = 1e-6);

void write_npmat(std::ostream& os, const RMat& M);
RMat read_npmat(std::istream& is);

}  // namespace npasym
