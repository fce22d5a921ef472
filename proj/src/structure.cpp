#include "npasym/structure.hpp"

#include <cmath>

namespace npasym {

StructurePoint structure_point(const NodeSymbols& node, int iota, int angles) {
    if (iota < 0 || iota >= static_cast<int>(node.m.size())) throw InvalidArgument("structure_point: bad root index");
    StructurePoint p;
    p.kappa1 = node.chart.kappa1();
    p.kappa2 = node.chart.kappa2();
    for (int k = 0; k < angles; ++k) {
        const double th = 2.0 * kPi * k / angles;
        p.m.push_back(node.m[iota].minus_one(Vec2::Zero(), Vec2(std::cos(th), std::sin(th))));
    }
    return p;
}

StructureFit fit_curvature_structure(const std::vector<StructurePoint>& pts) {
    if (pts.size() < 4) throw InvalidArgument("fit_curvature_structure: need at least 4 points");
    const int A = static_cast<int>(pts.front().m.size());
    const int P = static_cast<int>(pts.size());
    const int n = static_cast<int>(pts.front().m.front().rows());
    RMat X(P, 3);
    CMat Y(P, A * n * n);
    for (int p = 0; p < P; ++p) {
        if (static_cast<int>(pts[p].m.size()) != A) throw InvalidArgument("fit_curvature_structure: angle mismatch");
        X(p, 0) = pts[p].kappa1;
        X(p, 1) = pts[p].kappa2;
        X(p, 2) = 1.0;
        for (int a = 0; a < A; ++a)
            for (int i = 0; i < n * n; ++i) Y(p, a * n * n + i) = pts[p].m[a](i % n, i / n);
    }
    const CMat Xc = X.cast<cplx>();
    const CMat B = Xc.colPivHouseholderQr().solve(Y);
    StructureFit f;
    f.angles = A;
    const double ynorm = Y.norm();
    f.residual = (Xc * B - Y).norm() / ynorm;
    // intercept measured against the data scale per point
    f.intercept_norm = B.row(2).norm() * std::sqrt(double(P)) / ynorm;
    for (int a = 0; a < A; ++a) {
        CMat m1(n, n), m2(n, n), c(n, n);
        for (int i = 0; i < n * n; ++i) {
            m1(i % n, i / n) = B(0, a * n * n + i);
            m2(i % n, i / n) = B(1, a * n * n + i);
            c(i % n, i / n) = B(2, a * n * n + i);
        }
        f.M1.push_back(m1);
        f.M2.push_back(m2);
        f.intercept.push_back(c);
    }
    return f;
}

SymmetryResiduals symmetry_residuals(const StructureFit& f) {
    const int A = f.angles;
    if (A % 4 != 0) throw InvalidArgument("symmetry_residuals: angle count must be divisible by 4");
    auto idx = [A](int k) { return ((k % A) + A) % A; };
    CMat V = CMat::Zero(3, 3);
    V(0, 1) = V(1, 0) = V(2, 2) = 1.0;
    const CMat V1 = Eigen::Vector3cd(-1, 1, 1).asDiagonal();
    const CMat V2 = Eigen::Vector3cd(1, -1, 1).asDiagonal();
    const CMat V12 = Eigen::Vector3cd(-1, -1, 1).asDiagonal();
    double n1 = 0, ex = 0, f1 = 0, f2 = 0, f12 = 0;
    for (int k = 0; k < A; ++k) {
        n1 += f.M1[k].squaredNorm() + f.M2[k].squaredNorm();
        // (xi2, xi1) sits at angle pi/2 - theta
        ex += (f.M2[k] - V * f.M1[idx(A / 4 - k)] * V).squaredNorm();
        // (-xi1, xi2) at pi - theta, (xi1, -xi2) at -theta, -xi at theta + pi
        for (const auto* M : {&f.M1, &f.M2}) {
            f1 += ((*M)[idx(A / 2 - k)] - V1 * (*M)[k] * V1).squaredNorm();
            f2 += ((*M)[idx(-k)] - V2 * (*M)[k] * V2).squaredNorm();
            f12 += ((*M)[idx(k + A / 2)] - V12 * (*M)[k] * V12).squaredNorm();
        }
    }
    SymmetryResiduals r;
    r.exchange = std::sqrt(2.0 * ex / n1);
    r.flip1 = std::sqrt(f1 / n1);
    r.flip2 = std::sqrt(f2 / n1);
    r.flip12 = std::sqrt(f12 / n1);
    return r;
}

}  // namespace npasym
