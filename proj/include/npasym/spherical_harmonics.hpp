#pragma once

#include "npasym/types.hpp"

namespace npasym {

// Real orthonormal spherical harmonics Y_lm, m = -l..l, stored at l*l + l + m.
// m > 0 uses cos(m phi), m < 0 uses sin(|m| phi), both with a sqrt(2) factor.
inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int lmax) { return (lmax + 1) * (lmax + 1); }

struct ShValues {
    RVec Y;      // Y
    RVec Yt;     // dY/dtheta
    RVec Yps;    // (1/sin theta) dY/dphi, finite at the poles
    RVec Ytt;    // second derivatives, filled only on request
    RVec Ytp;
    RVec Ypp;
};

void eval_sh(int lmax, double theta, double phi, ShValues& out, bool second = false);

// Spherical angles of a unit vector (theta in [0, pi], phi in (-pi, pi]).
void to_angles(const Vec3& s, double& theta, double& phi);
Vec3 from_angles(double theta, double phi);

}  // namespace npasym
