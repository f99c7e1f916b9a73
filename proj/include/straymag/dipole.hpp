#pragma once

#include <cmath>

#include "straymag/errors.hpp"
#include "straymag/units.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

// Point-dipole field B = (mu0 / 4 pi) (3 (m.r^) r^ - m) / r^3, the far-field
// reference for any compact magnet.
inline Vec3 field_dipole(const Vec3& moment, const Vec3& r0, const Vec3& p) {
    if (!moment.finite() || !r0.finite() || !p.finite())
        throw NonFiniteInput("dipole inputs must be finite");
    const Vec3 r = p - r0;
    const double r2 = r.norm2();
    if (r2 < 1e-300) throw CoincidentPoint("field point coincides with the dipole position");
    const double rn = std::sqrt(r2);
    const Vec3 rhat = r / rn;
    const double inv_r3 = 1.0 / (r2 * rn);
    const double proj = moment.dot(rhat);
    return (rhat * (3.0 * proj) - moment) * (PhysicalConstants::mu0 / (4.0 * pi) * inv_r3);
}

}  // namespace straymag
