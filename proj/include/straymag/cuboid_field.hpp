#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "straymag/errors.hpp"
#include "straymag/kernels.hpp"
#include "straymag/scene.hpp"
#include "straymag/units.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

struct FieldSample {
    Vec3 position;          // world, m
    Vec3 B;                 // world, T
    double B_mag = 0.0;     // |B|, T
    double B_parallel = 0.0;  // component along the declared axis (default world z), T

    static FieldSample at(const Vec3& position, const Vec3& B, const Vec3& axis_unit) {
        FieldSample s;
        s.position = position;
        s.B = B;
        s.B_mag = B.norm();
        s.B_parallel = B.dot(axis_unit);
        return s;
    }
};

struct SheetCurrent {
    double J = 0.0;  // A/m, equivalent surface current density around the cross-section
    double K = 0.0;  // T, mu_r * mu0 * J / (4 pi)
};

// The bound surface current of a uniformly magnetized cuboid: one loop of
// density J circulates around each cross-section slab, J = m_s / (a b).
inline SheetCurrent sheet_current(const CuboidMagnet& cub) {
    SheetCurrent sc;
    sc.J = cub.m_s / (cub.a * cub.b);
    sc.K = cub.mu_r * PhysicalConstants::mu0 * sc.J / (4.0 * pi);
    return sc;
}

namespace detail {

inline constexpr double kEdgeEpsilon = 1e-12;  // m

inline double point_segment_distance(const Vec3& p, const Vec3& s0, const Vec3& s1) {
    const Vec3 d = s1 - s0;
    const double len2 = d.norm2();
    double t = len2 > 0.0 ? (p - s0).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (s0 + d * t)).norm();
}

inline double min_edge_distance(const CuboidMagnet& cub, const Vec3& p_local) {
    const double a = cub.a, b = cub.b, c = cub.c;
    const std::array<std::array<Vec3, 2>, 12> edges{{
        // along x
        {{{0, 0, 0}, {a, 0, 0}}},
        {{{0, b, 0}, {a, b, 0}}},
        {{{0, 0, c}, {a, 0, c}}},
        {{{0, b, c}, {a, b, c}}},
        // along y
        {{{0, 0, 0}, {0, b, 0}}},
        {{{a, 0, 0}, {a, b, 0}}},
        {{{0, 0, c}, {0, b, c}}},
        {{{a, 0, c}, {a, b, c}}},
        // along z
        {{{0, 0, 0}, {0, 0, c}}},
        {{{a, 0, 0}, {a, 0, c}}},
        {{{0, b, 0}, {0, b, c}}},
        {{{a, b, 0}, {a, b, c}}},
    }};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : edges)
        best = std::min(best, point_segment_distance(p_local, e[0], e[1]));
    return best;
}

// Signed distance to the box surface: negative inside.
inline double surface_distance(const CuboidMagnet& cub, const Vec3& p) {
    const Vec3 q{std::max(std::max(-p.x, p.x - cub.a), 0.0),
                 std::max(std::max(-p.y, p.y - cub.b), 0.0),
                 std::max(std::max(-p.z, p.z - cub.c), 0.0)};
    const double outside = q.norm();
    if (outside > 0.0) return outside;
    const double inside = std::min({p.x, cub.a - p.x, p.y, cub.b - p.y, p.z, cub.c - p.z});
    return -inside;
}

// Corner sums of the closed-form solution, in the magnet frame. The eight
// corner offsets (t1, t2, t3) with t1 in {x0, x0-a}, t2 in {y0, y0-b},
// t3 in {z0, z0-c} enter with sign (-1)^(i+j+k).
inline Vec3 cuboid_field_local(const CuboidMagnet& cub, const Vec3& p) {
    const SheetCurrent sc = sheet_current(cub);
    const double t1[2] = {p.x, p.x - cub.a};
    const double t2[2] = {p.y, p.y - cub.b};
    const double t3[2] = {p.z, p.z - cub.c};

    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const double sign = ((i + j + k) & 1) ? -1.0 : 1.0;
                sx += sign * kernel_xi(1, t1[i], t2[j], t3[k]);
                sy += sign * kernel_xi(2, t1[i], t2[j], t3[k]);
                sz += sign * (kernel_xi(3, t1[i], t2[j], t3[k]) +
                              kernel_xi(4, t1[i], t2[j], t3[k]));
            }

    return {-0.5 * sc.K * sx, -0.5 * sc.K * sy, sc.K * sz};
}

}  // namespace detail

// Closed-form field of one cuboid at a world point. Points within 1e-12 m of
// a cuboid edge are rejected; faces and the interior evaluate normally (the
// molecular-current field is defined there).
inline FieldSample field_analytic(const CuboidMagnet& cub, const Vec3& p_world) {
    if (!p_world.finite()) throw NonFinitePoint("field point must be finite");
    if (cub.m_s == 0.0) return FieldSample::at(p_world, {0, 0, 0}, {0, 0, 1});

    const Vec3 p = cub.pose.to_local(p_world);
    if (detail::min_edge_distance(cub, p) < detail::kEdgeEpsilon)
        throw EdgeSingularity("field point is within 1e-12 m of a cuboid edge");

    Vec3 b_local;
    try {
        b_local = detail::cuboid_field_local(cub, p);
    } catch (const Error& e) {
        // Off-edge points on the infinite extensions of the rim-edge lines
        // make individual kernels diverge even though the summed field has a
        // finite limit there; report them like edge hits.
        throw EdgeSingularity(std::string("field point lies on a kernel singular line (") +
                              e.code() + ")");
    }
    return FieldSample::at(p_world, cub.pose.rotation() * b_local, {0, 0, 1});
}

inline Vec3 field_scene_vec(const Scene& scene, const Vec3& p) {
    Vec3 sum;
    for (std::size_t i = 0; i < scene.magnets.size(); ++i) {
        try {
            sum += field_analytic(scene.magnets[i], p).B;
        } catch (const Error& e) {
            throw Error(e.code(), "magnet " + std::to_string(i) + ": " + e.what());
        }
    }
    return sum;
}

inline FieldSample field_scene(const Scene& scene, const Vec3& p) {
    return FieldSample::at(p, field_scene_vec(scene, p), {0, 0, 1});
}

}  // namespace straymag
