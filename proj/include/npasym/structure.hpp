#pragma once

#include "npasym/extraction.hpp"

#include <vector>

namespace npasym {

// m_{iota,-1} at one surface point, sampled on unit covectors at angles
// 2 pi k / angles in the point's curvature-aligned chart.
struct StructurePoint {
    double kappa1 = 0.0, kappa2 = 0.0;
    std::vector<CMat> m;
};

StructurePoint structure_point(const NodeSymbols& node, int iota, int angles);

// Least-squares model m = kappa1 M1 + kappa2 M2 + c over all points and
// angles.  Residual and intercept are relative to the data norm.
struct StructureFit {
    int angles = 0;
    std::vector<CMat> M1, M2, intercept;
    double residual = 0.0;
    double intercept_norm = 0.0;
};

StructureFit fit_curvature_structure(const std::vector<StructurePoint>& pts);

// Relative residuals of the coordinate-symmetry relations of the fitted
// parts: exchange of the axes (V) and reflection of xi_1, xi_2 or both
// (V1, V2, V12).  angles must be divisible by 4.
struct SymmetryResiduals {
    double exchange = 0.0;
    double flip1 = 0.0, flip2 = 0.0, flip12 = 0.0;
};

SymmetryResiduals symmetry_residuals(const StructureFit& fit);

}  // namespace npasym
