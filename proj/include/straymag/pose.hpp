#pragma once

#include <array>
#include <cmath>

#include "straymag/errors.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

struct Mat3 {
    // Row-major.
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static Mat3 identity() { return {}; }

    static Mat3 from_columns(const Vec3& cx, const Vec3& cy, const Vec3& cz) {
        Mat3 r;
        r.m = {{{cx.x, cy.x, cz.x}, {cx.y, cy.y, cz.y}, {cx.z, cy.z, cz.z}}};
        return r;
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    // Max absolute deviation of R^T R from the identity.
    double orthonormality_defect() const {
        const Mat3 g = transposed() * (*this);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double target = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(g.m[i][j] - target));
            }
        return worst;
    }
};

inline Mat3 rotation_about(const Vec3& axis, double angle_rad) {
    const Vec3 u = axis.normalized();
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    const double t = 1.0 - c;
    Mat3 r;
    r.m = {{{c + u.x * u.x * t, u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s},
            {u.y * u.x * t + u.z * s, c + u.y * u.y * t, u.y * u.z * t - u.x * s},
            {u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t}}};
    return r;
}

// Rigid placement of a magnet frame in the world: world = R * local + t,
// local = R^T * (world - t). Rotation must be proper orthogonal.
class Pose {
public:
    Pose() = default;

    Pose(const Mat3& rotation, const Vec3& translation)
        : rotation_(rotation), translation_(translation) {
        if (!translation_.finite())
            throw NonFiniteInput("pose translation must be finite");
        const double defect = rotation_.orthonormality_defect();
        if (defect > 1e-12)
            throw InvalidRotation("rotation is not orthogonal (defect " +
                                  std::to_string(defect) + ")");
        if (std::abs(rotation_.det() - 1.0) > 1e-12)
            throw InvalidRotation("rotation must be proper (det = +1)");
    }

    static Pose translation_only(const Vec3& t) { return Pose(Mat3::identity(), t); }

    const Mat3& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }

    Vec3 to_world(const Vec3& p_local) const { return rotation_ * p_local + translation_; }
    Vec3 to_local(const Vec3& p_world) const {
        return rotation_.transposed() * (p_world - translation_);
    }

private:
    Mat3 rotation_ = Mat3::identity();
    Vec3 translation_{};
};

inline Vec3 to_magnet_frame(const Pose& pose, const Vec3& p_world) {
    return pose.to_local(p_world);
}

// Completes an orthonormal frame whose +z is the given axis. The frame x axis
// is the normalized projection of world x onto the plane normal to the axis;
// when the axis is (anti)parallel to world x, world y is projected instead.
// This makes the cross-section orientation of an axis-specified magnet
// reproducible.
inline Mat3 frame_from_axis(const Vec3& axis) {
    const Vec3 ez = axis.normalized();
    Vec3 seed{1.0, 0.0, 0.0};
    Vec3 ex = seed - ez * seed.dot(ez);
    if (ex.norm() < 1e-9) {
        seed = Vec3{0.0, 1.0, 0.0};
        ex = seed - ez * seed.dot(ez);
    }
    ex = ex.normalized();
    const Vec3 ey = ez.cross(ex);
    return Mat3::from_columns(ex, ey, ez);
}

}  // namespace straymag
