#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "straymag/errors.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

// Imaging response kernel on a square pixel raster, normalized to unit sum
// on construction.
struct PsfKernel {
    double pixel_pitch = 0.0;      // m
    int rows = 0, cols = 0;
    std::vector<double> values;    // row-major

    PsfKernel() = default;

    PsfKernel(double pitch_m, int rows_, int cols_, std::vector<double> raw)
        : pixel_pitch(pitch_m), rows(rows_), cols(cols_), values(std::move(raw)) {
        if (!(pixel_pitch > 0.0)) throw ValidationError("PSF pixel pitch must be positive");
        if (rows < 1 || cols < 1 ||
            values.size() != static_cast<std::size_t>(rows) * cols)
            throw ValidationError("PSF dimensions do not match the value array");
        double sum = 0.0;
        for (double v : values) {
            if (!std::isfinite(v)) throw ValidationError("PSF values must be finite");
            sum += v;
        }
        if (std::abs(sum) < 1e-300)
            throw ValidationError("PSF values sum to zero; kernel cannot be normalized");
        for (double& v : values) v /= sum;
    }

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

struct SensorSpec {
    double pickup_radius = 0.0;  // m, inner radius of the pickup loop
    double scan_height = 0.0;    // m, height of the pickup plane above the substrate
    std::optional<PsfKernel> psf;

    SensorSpec() = default;
    SensorSpec(double radius_m, double height_m, std::optional<PsfKernel> kernel = {})
        : pickup_radius(radius_m), scan_height(height_m), psf(std::move(kernel)) {
        if (!(pickup_radius > 0.0) || !std::isfinite(pickup_radius))
            throw ValidationError("pickup radius must be positive");
        if (!(scan_height > 0.0) || !std::isfinite(scan_height))
            throw ValidationError("scan height must be positive");
    }
};

// Raster of pickup-loop flux values in units of the flux quantum, with the
// grid geometry it was sampled on (e1/e2 are full extents, endpoints
// included, row-major storage).
struct ScanImage {
    Vec3 origin, e1, e2;
    int n1 = 0, n2 = 0;
    std::vector<double> flux;  // Phi0, index i1 * n2 + i2

    Vec3 position(int i1, int i2) const {
        return origin + e1 * (static_cast<double>(i1) / (n1 - 1)) +
               e2 * (static_cast<double>(i2) / (n2 - 1));
    }
    double at(int i1, int i2) const { return flux[static_cast<std::size_t>(i1) * n2 + i2]; }
    double& at(int i1, int i2) { return flux[static_cast<std::size_t>(i1) * n2 + i2]; }
    double pitch1() const { return e1.norm() / (n1 - 1); }
    double pitch2() const { return e2.norm() / (n2 - 1); }
};

}  // namespace straymag
