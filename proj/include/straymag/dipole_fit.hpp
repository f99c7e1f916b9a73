#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "straymag/errors.hpp"
#include "straymag/flux.hpp"
#include "straymag/parallel.hpp"
#include "straymag/sensor.hpp"

namespace straymag {

struct DipoleFit {
    Vec3 position;        // m, world; z is held fixed during fitting
    Vec3 moment;          // A*m^2
    double residual_norm = 0.0;  // Phi0, L2 over pixels
    bool converged = false;
    int iterations = 0;
};

namespace detail {

// Per-pixel flux basis rows g(pixel; pos) with model flux = g . m. The moment
// enters linearly, so for a candidate position the optimal moment is the
// 3-parameter linear least-squares solution (variable projection).
struct DipoleModel {
    const ScanImage* img;
    const SensorSpec* sensor;

    std::vector<Vec3> basis(const Vec3& pos) const {
        std::vector<Vec3> rows(img->flux.size());
        parallel_for(rows.size(), [&](std::size_t idx) {
            const int i1 = static_cast<int>(idx) / img->n2;
            const int i2 = static_cast<int>(idx) % img->n2;
            rows[idx] = dipole_flux_basis(pos, img->position(i1, i2), *sensor);
        });
        return rows;
    }

    static Vec3 solve_moment(const std::vector<Vec3>& rows, const std::vector<double>& f) {
        // Normal equations, 3x3 symmetric.
        double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double rhs[3] = {0, 0, 0};
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const double g[3] = {rows[p].x, rows[p].y, rows[p].z};
            for (int i = 0; i < 3; ++i) {
                rhs[i] += g[i] * f[p];
                for (int j = i; j < 3; ++j) A[i][j] += g[i] * g[j];
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < i; ++j) A[i][j] = A[j][i];
        // Gaussian elimination with partial pivoting.
        int perm[3] = {0, 1, 2};
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
            std::swap(perm[col], perm[piv]);
            const double d = A[perm[col]][col];
            if (std::abs(d) < 1e-300) return {0, 0, 0};  // degenerate basis
            for (int r = col + 1; r < 3; ++r) {
                const double s = A[perm[r]][col] / d;
                for (int c2 = col; c2 < 3; ++c2) A[perm[r]][c2] -= s * A[perm[col]][c2];
                rhs[perm[r]] -= s * rhs[perm[col]];
            }
        }
        double x[3];
        for (int i = 2; i >= 0; --i) {
            double s = rhs[perm[i]];
            for (int j = i + 1; j < 3; ++j) s -= A[perm[i]][j] * x[j];
            x[i] = s / A[perm[i]][i];
        }
        return {x[0], x[1], x[2]};
    }

    double residual(const std::vector<Vec3>& rows, const Vec3& m) const {
        double s = 0.0;
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const double r = rows[p].dot(m) - img->flux[p];
            s += r * r;
        }
        return std::sqrt(s);
    }

    // Best residual and moment at an in-plane position.
    std::pair<double, Vec3> evaluate(const Vec3& pos) const {
        const auto rows = basis(pos);
        const Vec3 m = solve_moment(rows, img->flux);
        return {residual(rows, m), m};
    }
};

}  // namespace detail

// Least-squares point-dipole fit to a flux image: in-plane position by
// Nelder-Mead, moment vector by an exact linear solve at each candidate
// position. Never returns a residual above the initial guess. When the
// relative residual improvement stays below 1e-10 the fit is converged;
// after 200 iterations the best result so far is returned flagged.
inline DipoleFit fit_dipole(const ScanImage& img, const SensorSpec& sensor,
                            const DipoleFit& init) {
    if (img.flux.empty()) throw EmptyImage("fit_dipole on an empty image");
    const auto [lo, hi] = std::minmax_element(img.flux.begin(), img.flux.end());
    if (*hi - *lo == 0.0) throw NoSignal("image is constant; nothing to fit");

    const detail::DipoleModel model{&img, &sensor};
    const double z = init.position.z;

    // Initial residual with the caller's moment as given; the fit result may
    // only improve on it.
    const double init_residual = model.residual(model.basis(init.position), init.moment);

    struct Candidate {
        double x, y;
        double residual;
        Vec3 moment;
    };
    auto evaluate = [&](double x, double y) {
        const auto [res, m] = model.evaluate({x, y, z});
        return Candidate{x, y, res, m};
    };

    const double step = std::max(img.pitch1(), img.pitch2());
    std::array<Candidate, 3> simplex{evaluate(init.position.x, init.position.y),
                                     evaluate(init.position.x + step, init.position.y),
                                     evaluate(init.position.x, init.position.y + step)};
    auto by_residual = [](const Candidate& a, const Candidate& b) {
        return a.residual < b.residual;
    };
    std::sort(simplex.begin(), simplex.end(), by_residual);

    Candidate best = simplex[0];
    bool converged = false;
    int iter = 0;
    constexpr int kMaxIter = 200;
    for (; iter < kMaxIter; ++iter) {
        const double prev_best = best.residual;

        // Centroid of the two better vertices, reflect the worst.
        const double cx = 0.5 * (simplex[0].x + simplex[1].x);
        const double cy = 0.5 * (simplex[0].y + simplex[1].y);
        const Candidate& worst = simplex[2];
        Candidate reflected = evaluate(2.0 * cx - worst.x, 2.0 * cy - worst.y);
        if (reflected.residual < simplex[0].residual) {
            Candidate expanded =
                evaluate(cx + 2.0 * (cx - worst.x), cy + 2.0 * (cy - worst.y));
            simplex[2] = by_residual(expanded, reflected) ? expanded : reflected;
        } else if (reflected.residual < simplex[1].residual) {
            simplex[2] = reflected;
        } else {
            Candidate contracted =
                evaluate(cx + 0.5 * (worst.x - cx), cy + 0.5 * (worst.y - cy));
            if (contracted.residual < worst.residual) {
                simplex[2] = contracted;
            } else {
                // Shrink toward the best vertex.
                for (int k = 1; k < 3; ++k)
                    simplex[k] = evaluate(0.5 * (simplex[0].x + simplex[k].x),
                                          0.5 * (simplex[0].y + simplex[k].y));
            }
        }
        std::sort(simplex.begin(), simplex.end(), by_residual);
        if (simplex[0].residual < best.residual) best = simplex[0];

        const double improvement = prev_best - best.residual;
        if (improvement >= 0.0 && improvement < 1e-10 * std::max(prev_best, 1e-300)) {
            converged = true;
            ++iter;
            break;
        }
    }

    DipoleFit out;
    if (best.residual <= init_residual) {
        out.position = {best.x, best.y, z};
        out.moment = best.moment;
        out.residual_norm = best.residual;
    } else {
        out.position = init.position;
        out.moment = init.moment;
        out.residual_norm = init_residual;
    }
    out.converged = converged;
    out.iterations = iter;
    return out;
}

}  // namespace straymag
