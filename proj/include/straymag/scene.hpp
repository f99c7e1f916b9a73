#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "straymag/errors.hpp"
#include "straymag/pose.hpp"
#include "straymag/units.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

// A rectangular prism occupying [0,a] x [0,b] x [0,c] in its local frame,
// uniformly magnetized along local +z with moment per unit length m_s
// (A*m^2 per meter of length along c). The pose maps the local frame into
// world coordinates. mu_r is the relative permeability of the surroundings.
struct CuboidMagnet {
    double a = 0.0;  // m, local x edge
    double b = 0.0;  // m, local y edge
    double c = 0.0;  // m, local z edge (magnetization axis)
    Pose pose;
    double m_s = 0.0;   // A*m^2/m along local +z
    double mu_r = 1.0;

    double total_moment() const { return m_s * c; }  // A*m^2
    double m_s_muB_per_um() const { return moment_per_length_muB_um(m_s); }
    Vec3 center_world() const { return pose.to_world({a / 2, b / 2, c / 2}); }
    Vec3 axis_world() const { return pose.rotation() * Vec3{0, 0, 1}; }
};

inline CuboidMagnet make_cuboid(double a_m, double b_m, double c_m, const Pose& pose,
                                double m_s_muB_per_um, double mu_r = 1.0) {
    if (!(std::isfinite(a_m) && std::isfinite(b_m) && std::isfinite(c_m)))
        throw NonFiniteInput("cuboid dimensions must be finite");
    if (!(a_m > 0.0 && b_m > 0.0 && c_m > 0.0))
        throw NonPositiveDimension("cuboid dimensions must be positive, got (" +
                                   std::to_string(a_m) + ", " + std::to_string(b_m) + ", " +
                                   std::to_string(c_m) + ") m");
    if (!std::isfinite(m_s_muB_per_um))
        throw NonFiniteInput("moment per unit length must be finite");
    if (!(mu_r > 0.0) || !std::isfinite(mu_r))
        throw NonPositiveDimension("relative permeability must be positive");
    CuboidMagnet cub;
    cub.a = a_m;
    cub.b = b_m;
    cub.c = c_m;
    cub.pose = pose;
    cub.m_s = moment_per_length_si(m_s_muB_per_um);
    cub.mu_r = mu_r;
    return cub;
}

// An ordered collection of magnets sharing one ambient medium. Field
// evaluations superpose members in list order.
struct Scene {
    std::vector<CuboidMagnet> magnets;
    double mu_r = 1.0;

    void add(const CuboidMagnet& magnet) {
        if (magnet.mu_r != mu_r)
            throw ValidationError("magnet mu_r " + std::to_string(magnet.mu_r) +
                                  " differs from scene ambient mu_r " + std::to_string(mu_r));
        magnets.push_back(magnet);
    }
};

// One shell cuboid with the long (magnetization) axis along world z, centered
// at the world origin: (a, b, c) = (thickness, width, length).
inline Scene preset_vls_shell(double length_m, double width_m, double thickness_m,
                              double m_s_muB_per_um) {
    const Pose centered(Mat3::identity(),
                        Vec3{-thickness_m / 2, -width_m / 2, -length_m / 2});
    Scene scene;
    scene.add(make_cuboid(thickness_m, width_m, length_m, centered, m_s_muB_per_um));
    return scene;
}

}  // namespace straymag
