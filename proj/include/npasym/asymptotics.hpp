#pragma once

#include "npasym/extraction.hpp"
#include "npasym/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace npasym {

enum class Side { plus, minus };

std::string to_string(Side s);
Side side_from_string(const std::string& s);

// Sum of d-th powers of the positive eigenvalues (plus) or of the absolute
// values of the negative ones (minus).  Eigenvalues within zero_tol times the
// spectral radius of zero count for neither side.
double signed_power_trace(const CMat& M, int d, Side side, double realness_tol = 1e-6, double zero_tol = 1e-8);

// One surface point of the cosphere integral: quadrature weight and the
// degree -1 symbol, evaluated on unit covectors.
struct CosphereSample {
    double weight = 0.0;
    std::function<CMat(const Vec2& xi)> m;
};

struct CosphereIntegral {
    double plus = 0.0, minus = 0.0;
};

// d^{-1} (2 pi)^{-d} sum_x w(x) int_{S^1} Tr[m(x, xi)_+-^d] dtheta with the
// trapezoid rule on `angles` equispaced covectors.
CosphereIntegral cosphere_integral(const std::vector<CosphereSample>& samples, int d, int angles);

struct CoefficientOptions {
    int d = 2;
    int angles = 64;          // >= 64; the drift check reruns with twice as many
    double drift_tol = 0.02;  // relative
};

struct Coefficients {
    double C_plus = 0.0, C_minus = 0.0;  // counting coefficients of the operator itself
    double B_plus = 0.0, B_minus = 0.0;  // coefficients for the auxiliary operator B_iota
    double slope = 1.0;                  // p_iota'(w_iota)
    double drift = 0.0;                  // relative change between angles and 2 angles
};

// Symbol-route counting coefficients for root iota.  The integral gives the
// coefficients of B_iota; near w_iota its eigenvalues are slope * (lambda -
// w_iota), so the operator's counting coefficients are B / slope^d.
Coefficients coefficient_integral(const SymbolField& field, int iota, const CoefficientOptions& opt = {});

// lambda_n = w +- (C / n)^{1/d}, n = 1, 2, ...
struct SequenceModel {
    double C = 0.0, omega = 0.0;
    int d = 2;
    Side side = Side::plus;
    bool degenerate = false;  // C == 0: no accumulation on this side
    double operator()(int n) const;
    std::vector<double> first(int count) const;
};

SequenceModel counting_to_sequence(double C, int d, Side side, double omega);

struct AsymptoticReport {
    double root = 0.0;
    Side side = Side::plus;
    double C = 0.0;
    int d = 2;
    std::string route;  // "symbol" or "spectral"
    double err_estimate = 0.0;
};

std::string to_json(const std::vector<AsymptoticReport>& reports);

}  // namespace npasym
