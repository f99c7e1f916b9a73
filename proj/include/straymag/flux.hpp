#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "straymag/cuboid_field.hpp"
#include "straymag/dipole.hpp"
#include "straymag/errors.hpp"
#include "straymag/quadrature.hpp"
#include "straymag/scene.hpp"
#include "straymag/sensor.hpp"
#include "straymag/units.hpp"

namespace straymag {

namespace detail {

// Closest-pair iteration between two convex sets: the pickup disk (horizontal,
// normal +z) and a magnet box. Distance shrinking to ~0 means intersection.
inline bool disk_intersects_box(const CuboidMagnet& cub, const Vec3& disk_center,
                                double radius) {
    auto project_box = [&](const Vec3& p_world) {
        Vec3 q = cub.pose.to_local(p_world);
        q.x = std::clamp(q.x, 0.0, cub.a);
        q.y = std::clamp(q.y, 0.0, cub.b);
        q.z = std::clamp(q.z, 0.0, cub.c);
        return cub.pose.to_world(q);
    };
    auto project_disk = [&](const Vec3& p) {
        Vec3 q{p.x - disk_center.x, p.y - disk_center.y, 0.0};
        const double r = std::hypot(q.x, q.y);
        if (r > radius) q = q * (radius / r);
        return Vec3{disk_center.x + q.x, disk_center.y + q.y, disk_center.z};
    };

    Vec3 on_disk = disk_center;
    Vec3 on_box = project_box(on_disk);
    double dist = (on_box - on_disk).norm();
    for (int iter = 0; iter < 64; ++iter) {
        on_disk = project_disk(on_box);
        on_box = project_box(on_disk);
        const double next = (on_box - on_disk).norm();
        if (next < 1e-10) return true;
        if (dist - next < 1e-15 + 1e-9 * dist) return false;  // stalled above zero
        dist = next;
    }
    return dist < 1e-10;
}

// Integral of f over the disk of given radius around center (center.z fixes
// the plane), in polar form: Gauss-Legendre radially, uniform midpoints in
// angle. Refined until two successive levels agree; abs_floor guards the
// zero-signal case.
inline double disk_integral_converged(const std::function<double(const Vec3&)>& f,
                                      const Vec3& center, double radius, double rel_tol,
                                      double abs_floor) {
    double prev = 0.0;
    bool have_prev = false;
    for (int level = 0; level < 7; ++level) {
        const int n_r = 8 << level;
        const int n_t = 16 << level;
        const GaussRule& rule = gauss_legendre(n_r);
        double sum = 0.0;
        for (int i = 0; i < n_r; ++i) {
            const double r = rule.nodes[i] * radius;
            double ring = 0.0;
            for (int j = 0; j < n_t; ++j) {
                const double theta = 2.0 * pi * (j + 0.5) / n_t;
                ring += f({center.x + r * std::cos(theta), center.y + r * std::sin(theta),
                           center.z});
            }
            sum += rule.weights[i] * radius * r * ring * (2.0 * pi / n_t);
        }
        if (have_prev && std::abs(sum - prev) <= rel_tol * std::abs(sum) + abs_floor)
            return sum;
        prev = sum;
        have_prev = true;
    }
    throw QuadratureFailure("disk quadrature did not converge");
}

}  // namespace detail

// Flux through the pickup disk centered at `center` (the plane z = center.z),
// as the disk integral of the out-of-plane component Bz, in units of Phi0.
inline double flux_pickup(const Scene& scene, const Vec3& center, const SensorSpec& sensor) {
    if (!center.finite()) throw NonFinitePoint("pickup center must be finite");
    for (std::size_t i = 0; i < scene.magnets.size(); ++i)
        if (detail::disk_intersects_box(scene.magnets[i], center, sensor.pickup_radius))
            throw DiskIntersectsMagnet("pickup disk intersects magnet " + std::to_string(i));
    const double wb = detail::disk_integral_converged(
        [&](const Vec3& p) { return field_scene_vec(scene, p).z; }, center,
        sensor.pickup_radius, 1e-8, 1e-18 * PhysicalConstants::Phi0);
    return wb / PhysicalConstants::Phi0;
}

// Flux per unit dipole moment component: the disk integral of the dipole
// Green's function. Returns g with flux(m) = g . m, in Phi0 per A*m^2.
inline Vec3 dipole_flux_basis(const Vec3& dipole_pos, const Vec3& center,
                              const SensorSpec& sensor) {
    Vec3 g;
    const double mu_scale = PhysicalConstants::mu0 / (4.0 * pi);
    for (int axis = 0; axis < 3; ++axis) {
        const Vec3 m{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
        const double wb = detail::disk_integral_converged(
            [&](const Vec3& p) {
                const Vec3 r = p - dipole_pos;
                const double rn = r.norm();
                const double inv_r3 = 1.0 / (rn * rn * rn);
                const double proj = m.dot(r) / rn;
                return mu_scale * inv_r3 * (3.0 * proj * r.z / rn - m.z);
            },
            center, sensor.pickup_radius, 1e-9, 1e-24);
        (axis == 0 ? g.x : axis == 1 ? g.y : g.z) = wb / PhysicalConstants::Phi0;
    }
    return g;
}

}  // namespace straymag
