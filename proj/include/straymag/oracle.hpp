#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "straymag/cuboid_field.hpp"
#include "straymag/errors.hpp"
#include "straymag/kernels.hpp"
#include "straymag/scene.hpp"

namespace straymag {

// Discretization of the brute-force surface-current integration: n_z slabs
// along the magnetization axis, n_perimeter nodes per cross-section edge.
struct QuadratureSpec {
    int n_z = 64;
    int n_perimeter = 64;
};

namespace detail {

// Composite midpoint rule over the sheet-current loops. Each z slab carries a
// loop current J dz around the rectangle [0,a] x [0,b]; the line integral of
// I dl x r / r^3 over the four faces reduces to psi-kernel differences with a
// fixed evaluation order, so results are bit-reproducible.
inline Vec3 oracle_midpoint_local(const CuboidMagnet& cub, const Vec3& p, int n_z,
                                  int n_a, int n_b) {
    const SheetCurrent sc = sheet_current(cub);
    const double dz = cub.c / n_z;
    const double dx = cub.a / n_a;
    const double dy = cub.b / n_b;

    double bx = 0.0, by = 0.0, bz = 0.0;
    for (int l = 0; l < n_z; ++l) {
        const double w3 = p.z - (l + 0.5) * dz;
        double sbx = 0.0, sby = 0.0, sbz = 0.0;
        // Faces x = a and x = 0 (current +y / -y).
        for (int j = 0; j < n_b; ++j) {
            const double w2 = p.y - (j + 0.5) * dy;
            sbx += kernel_psi(3, p.x - cub.a, w2, w3) - kernel_psi(3, p.x, w2, w3);
            sbz += kernel_psi(1, p.x, w2, w3) - kernel_psi(1, p.x - cub.a, w2, w3);
        }
        sbx *= dy;
        sbz *= dy;
        // Faces y = b and y = 0 (current -x / +x).
        double sby_acc = 0.0, sbz2 = 0.0;
        for (int i = 0; i < n_a; ++i) {
            const double w1 = p.x - (i + 0.5) * dx;
            sby_acc += kernel_psi(3, w1, p.y - cub.b, w3) - kernel_psi(3, w1, p.y, w3);
            sbz2 += kernel_psi(2, w1, p.y, w3) - kernel_psi(2, w1, p.y - cub.b, w3);
        }
        sby = sby_acc * dx;
        sbz += sbz2 * dx;
        bx += sbx * dz;
        by += sby * dz;
        bz += sbz * dz;
    }
    return {sc.K * bx, sc.K * by, sc.K * bz};
}

inline void check_oracle_point(const CuboidMagnet& cub, const Vec3& p_local) {
    if (std::abs(surface_distance(cub, p_local)) <= 1e-12)
        throw SurfacePoint("quadrature point lies on the magnet surface");
}

}  // namespace detail

// Brute-force Biot-Savart reference at a fixed resolution. Independent of the
// closed-form path: its only ingredients are the psi kernel and the midpoint
// rule.
inline FieldSample field_oracle(const CuboidMagnet& cub, const Vec3& p_world,
                                const QuadratureSpec& q) {
    if (q.n_z < 2 || q.n_perimeter < 2)
        throw InvalidParameter("quadrature spec requires n_z >= 2 and n_perimeter >= 2");
    if (!p_world.finite()) throw NonFinitePoint("field point must be finite");
    if (cub.m_s == 0.0) return FieldSample::at(p_world, {0, 0, 0}, {0, 0, 1});
    const Vec3 p = cub.pose.to_local(p_world);
    detail::check_oracle_point(cub, p);
    const Vec3 b = detail::oracle_midpoint_local(cub, p, q.n_z, q.n_perimeter, q.n_perimeter);
    return FieldSample::at(p_world, cub.pose.rotation() * b, {0, 0, 1});
}

// Ladder refinement with Richardson extrapolation of the midpoint estimates:
// off the surface the midpoint error is a smooth series in h^2, so a small
// extrapolation table (up to h^8) collapses it quickly. Initial resolutions
// scale with edge length over the point's distance to the surface; all
// directions then double until two successive diagonal entries agree to
// rel_tol.
inline FieldSample field_oracle_converged(const CuboidMagnet& cub, const Vec3& p_world,
                                          double rel_tol = 1e-8) {
    if (!p_world.finite()) throw NonFinitePoint("field point must be finite");
    if (cub.m_s == 0.0) return FieldSample::at(p_world, {0, 0, 0}, {0, 0, 1});
    const Vec3 p = cub.pose.to_local(p_world);
    detail::check_oracle_point(cub, p);

    const double dist = std::abs(detail::surface_distance(cub, p));
    auto initial = [&](double edge) {
        const double n = std::ceil(2.0 * edge / dist);
        return static_cast<int>(std::clamp(n, 4.0, 4096.0));
    };
    int n_z = initial(cub.c);
    int n_a = initial(cub.a);
    int n_b = initial(cub.b);

    constexpr int kMaxLevels = 10;
    constexpr int kMaxOrder = 3;  // extrapolation columns beyond the raw midpoint
    Vec3 table[kMaxLevels][kMaxOrder + 1];
    Vec3 prev_diag;
    for (int level = 0; level < kMaxLevels; ++level) {
        if (static_cast<double>(n_z) * (n_a + n_b) > 2e8)
            throw QuadratureTooCoarse(
                "refinement would exceed the node budget; the point is too close to the "
                "magnet surface for the requested tolerance");
        table[level][0] = detail::oracle_midpoint_local(cub, p, n_z, n_a, n_b);
        const int order = std::min(level, kMaxOrder);
        for (int k = 1; k <= order; ++k) {
            const double weight = std::pow(4.0, k);
            table[level][k] =
                (table[level][k - 1] * weight - table[level - 1][k - 1]) / (weight - 1.0);
        }
        const Vec3 diag = table[level][order];
        if (level >= 2) {
            const double err = (diag - prev_diag).norm();
            const double scale = std::max(diag.norm(), 1e-300);
            if (err <= rel_tol * scale)
                return FieldSample::at(p_world, cub.pose.rotation() * diag, {0, 0, 1});
        }
        prev_diag = diag;
        n_z = std::min(n_z * 2, 1 << 20);
        n_a = std::min(n_a * 2, 1 << 20);
        n_b = std::min(n_b * 2, 1 << 20);
    }
    throw QuadratureTooCoarse("field_oracle did not reach the requested relative tolerance "
                              "within the refinement budget");
}

}  // namespace straymag
