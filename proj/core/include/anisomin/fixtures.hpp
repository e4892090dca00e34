#pragma once

#include <string_view>

#include "anisomin/surface.hpp"

namespace anisomin {

// Standard parametrizations used as test surfaces. `grid` is the node count
// per direction.

SurfacePatch plane_patch(int grid, double length = 1.0, double width = 1.0);

// Longitude u in [0, 2 pi) (periodic), colatitude v in [1e-3, pi - 1e-3];
// oriented by the outward normal, so H_gamma = -2 for gamma = 1.
SurfacePatch sphere_patch(int grid);

// (cosh v cos u, cosh v sin u, v), v in [-V, V], V in (0, 4].
SurfacePatch catenoid_patch(double V, int grid);

// (u - u^3/3 + u v^2, v - v^3/3 + u^2 v, u^2 - v^2) on [-R, R]^2, R in (0, 1.5].
SurfacePatch enneper_patch(double R, int grid);

// M applied to the catenoid immersion; oriented by sign(det M).
SurfacePatch sheared_catenoid_patch(const Mat3& M, double V, int grid);

// Weierstrass data f = 2, g = z^k on [-R, R]^2: Gauss map branched with order
// k - 1 at the origin and at the end. k = 1 is Enneper's surface.
SurfacePatch branched_enneper_patch(double R, int k, int grid);

/// `plane[:L,W]` | `sphere` | `catenoid:V` | `enneper:R` |
/// `sheared_catenoid:V,m11,m12,m13,m21,m22,m23,m31,m32,m33` | `branched_enneper:R,k`
/// Throws UnknownFixture, SingularShear or InvalidArgument.
SurfacePatch make_fixture(std::string_view text, int grid);

}  // namespace anisomin
