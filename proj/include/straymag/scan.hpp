#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "straymag/errors.hpp"
#include "straymag/flux.hpp"
#include "straymag/parallel.hpp"
#include "straymag/scene.hpp"
#include "straymag/sensor.hpp"

namespace straymag {

struct GridSpec {
    Vec3 origin, e1, e2;
    int n1 = 0, n2 = 0;
};

// Discrete 2D convolution with zero padding outside the image. The kernel
// pitch must match the (square) image pitch.
inline ScanImage apply_psf(const ScanImage& img, const PsfKernel& kernel) {
    const double p1 = img.pitch1();
    const double p2 = img.pitch2();
    auto matches = [](double u, double v) { return std::abs(u - v) <= 1e-9 * std::max(u, v); };
    if (!matches(p1, p2))
        throw PitchMismatch("PSF convolution requires square image pixels");
    if (!matches(kernel.pixel_pitch, p1))
        throw PitchMismatch("kernel pitch differs from image pitch");

    const int cr = (kernel.rows - 1) / 2;
    const int cc = (kernel.cols - 1) / 2;
    ScanImage out = img;
    for (int i = 0; i < img.n1; ++i)
        for (int j = 0; j < img.n2; ++j) {
            double acc = 0.0;
            for (int u = 0; u < kernel.rows; ++u)
                for (int v = 0; v < kernel.cols; ++v) {
                    const int si = i - (u - cr);
                    const int sj = j - (v - cc);
                    if (si < 0 || si >= img.n1 || sj < 0 || sj >= img.n2) continue;
                    acc += kernel.at(u, v) * img.at(si, sj);
                }
            out.at(i, j) = acc;
        }
    return out;
}

// Raster of pickup-loop fluxes over the grid; the sensor PSF, when present,
// is applied to the finished raster.
inline ScanImage scan_image(const Scene& scene, const SensorSpec& sensor, const Vec3& origin,
                            const Vec3& e1, const Vec3& e2, int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw InvalidParameter("scan grid needs n1, n2 >= 2");
    const Vec3 normal = e1.cross(e2);
    if (normal.norm() < 1e-12 * e1.norm() * e2.norm())
        throw DegenerateAxes("scan grid axes are linearly dependent");

    ScanImage img;
    img.origin = origin;
    img.e1 = e1;
    img.e2 = e2;
    img.n1 = n1;
    img.n2 = n2;
    img.flux.resize(static_cast<std::size_t>(n1) * n2);
    parallel_for(img.flux.size(), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx) / n2;
        const int i2 = static_cast<int>(idx) % n2;
        try {
            img.flux[idx] = flux_pickup(scene, img.position(i1, i2), sensor);
        } catch (const Error& e) {
            throw Error(e.code(), "pixel (" + std::to_string(i1) + ", " + std::to_string(i2) +
                                      "): " + e.what());
        }
    });
    if (sensor.psf) return apply_psf(img, *sensor.psf);
    return img;
}

inline ScanImage scan_image(const Scene& scene, const SensorSpec& sensor,
                            const GridSpec& grid) {
    return scan_image(scene, sensor, grid.origin, grid.e1, grid.e2, grid.n1, grid.n2);
}

// Peak-to-peak flux swing of an image, reported in milli-Phi0.
inline double peak_to_peak(const ScanImage& img) {
    if (img.flux.empty()) throw EmptyImage("peak_to_peak of an empty image");
    const auto [lo, hi] = std::minmax_element(img.flux.begin(), img.flux.end());
    return (*hi - *lo) * 1000.0;
}

// Inverts a measured peak-to-peak signal to a moment per unit length, using a
// forward-simulated template. The forward map is linear in the magnetization
// scale, so the inversion is a single ratio against the template's first
// magnet.
inline double estimate_moment(double p2p_target_mPhi0, const Scene& templ,
                              const SensorSpec& sensor, const GridSpec& grid) {
    if (templ.magnets.empty())
        throw ZeroTemplateSignal("template scene has no magnets");
    const double m_s_ref = templ.magnets.front().m_s_muB_per_um();
    const double p2p_sim = peak_to_peak(scan_image(templ, sensor, grid));
    if (!(p2p_sim > 0.0) || !std::isfinite(p2p_sim))
        throw ZeroTemplateSignal("template scene produces no peak-to-peak signal");
    return m_s_ref * p2p_target_mPhi0 / p2p_sim;
}

}  // namespace straymag
