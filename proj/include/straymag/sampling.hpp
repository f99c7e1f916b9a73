#pragma once

#include <string>
#include <vector>

#include "straymag/cuboid_field.hpp"
#include "straymag/errors.hpp"
#include "straymag/parallel.hpp"
#include "straymag/scene.hpp"

namespace straymag {

// n samples on the closed segment [from, to], endpoints included.
// B_parallel is the component along the given axis.
inline std::vector<FieldSample> sample_line(const Scene& scene, const Vec3& from,
                                            const Vec3& to, int n, const Vec3& axis) {
    if (n < 2) throw InvalidParameter("sample_line needs at least 2 samples");
    if (!from.finite() || !to.finite()) throw NonFiniteInput("line endpoints must be finite");
    const Vec3 axis_unit = axis.normalized();

    std::vector<FieldSample> samples(static_cast<std::size_t>(n));
    const Vec3 step = (to - from) / static_cast<double>(n - 1);
    parallel_for(samples.size(), [&](std::size_t i) {
        const Vec3 p = from + step * static_cast<double>(i);
        try {
            samples[i] = FieldSample::at(p, field_scene_vec(scene, p), axis_unit);
        } catch (const Error& e) {
            throw Error(e.code(), "sample " + std::to_string(i) + ": " + e.what());
        }
    });
    return samples;
}

// Row-major raster on the parallelogram spanned by e1 and e2 (full extents;
// samples include both ends of each axis). B_parallel is taken along the
// plane normal e1 x e2.
struct FieldGrid {
    Vec3 origin, e1, e2;
    int n1 = 0, n2 = 0;
    std::vector<FieldSample> samples;  // index i1 * n2 + i2

    Vec3 position(int i1, int i2) const {
        return origin + e1 * (static_cast<double>(i1) / (n1 - 1)) +
               e2 * (static_cast<double>(i2) / (n2 - 1));
    }
    const FieldSample& at(int i1, int i2) const {
        return samples[static_cast<std::size_t>(i1) * n2 + i2];
    }
};

inline FieldGrid sample_grid(const Scene& scene, const Vec3& origin, const Vec3& e1,
                             const Vec3& e2, int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw InvalidParameter("sample_grid needs n1, n2 >= 2");
    if (!origin.finite() || !e1.finite() || !e2.finite())
        throw NonFiniteInput("grid geometry must be finite");
    const Vec3 normal = e1.cross(e2);
    if (normal.norm() < 1e-12 * e1.norm() * e2.norm())
        throw DegenerateAxes("grid axes are linearly dependent");
    const Vec3 axis_unit = normal.normalized();

    FieldGrid grid;
    grid.origin = origin;
    grid.e1 = e1;
    grid.e2 = e2;
    grid.n1 = n1;
    grid.n2 = n2;
    grid.samples.resize(static_cast<std::size_t>(n1) * n2);
    parallel_for(grid.samples.size(), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx) / n2;
        const int i2 = static_cast<int>(idx) % n2;
        const Vec3 p = grid.position(i1, i2);
        try {
            grid.samples[idx] = FieldSample::at(p, field_scene_vec(scene, p), axis_unit);
        } catch (const Error& e) {
            throw Error(e.code(), "pixel (" + std::to_string(i1) + ", " + std::to_string(i2) +
                                      "): " + e.what());
        }
    });
    return grid;
}

}  // namespace straymag
