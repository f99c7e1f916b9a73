#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "straymag/cuboid_field.hpp"
#include "straymag/dipole.hpp"
#include "straymag/epitaxy.hpp"
#include "straymag/oracle.hpp"
#include "straymag/parallel.hpp"
#include "straymag/quadrature.hpp"
#include "straymag/sampling.hpp"
#include "straymag/scene.hpp"

namespace straymag {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidationConfig {
    std::uint64_t seed = 0x5eed0001u;
    int n_cuboids = 10;
    int n_oracle_points = 100;   // per cuboid
    int n_maxwell_points = 200;  // total
    double oracle_rel_tol = 1e-8;
};

namespace detail {

struct RandomGeometry {
    std::mt19937_64 rng;
    explicit RandomGeometry(std::uint64_t seed) : rng(seed) {}

    CuboidMagnet cuboid() {
        std::uniform_real_distribution<double> logdim(std::log(30e-9), std::log(1e-6));
        std::uniform_real_distribution<double> logm(std::log(1e6), std::log(1e8));
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        std::uniform_real_distribution<double> shift(-1e-6, 1e-6);
        const double a = std::exp(logdim(rng));
        const double b = std::exp(logdim(rng));
        const double c = std::exp(logdim(rng));
        const Mat3 rot = rotation_about({0, 0, 1}, angle(rng)) *
                         rotation_about({0, 1, 0}, angle(rng)) *
                         rotation_about({1, 0, 0}, angle(rng));
        const Pose pose(rot, {shift(rng), shift(rng), shift(rng)});
        return make_cuboid(a, b, c, pose, std::exp(logm(rng)));
    }

    // A world point whose local-frame distance to the cuboid surface is at
    // least min_dist_frac of the diagonal (inside or outside).
    Vec3 point_near(const CuboidMagnet& cub, double min_dist_frac, bool allow_inside) {
        const double diag = std::sqrt(cub.a * cub.a + cub.b * cub.b + cub.c * cub.c);
        std::uniform_real_distribution<double> ux(-1.0 * diag, cub.a + 1.0 * diag);
        std::uniform_real_distribution<double> uy(-1.0 * diag, cub.b + 1.0 * diag);
        std::uniform_real_distribution<double> uz(-1.0 * diag, cub.c + 1.0 * diag);
        for (int tries = 0; tries < 10000; ++tries) {
            const Vec3 local{ux(rng), uy(rng), uz(rng)};
            const double sd = surface_distance(cub, local);
            if (!allow_inside && sd < 0.0) continue;
            if (std::abs(sd) >= min_dist_frac * diag) return cub.pose.to_world(local);
        }
        throw InvalidParameter("could not sample a point at the requested clearance");
    }
};

inline double partial(const CuboidMagnet& cub, const Vec3& p, int b_comp, int axis,
                      double h) {
    auto B = [&](const Vec3& q) {
        const Vec3 v = field_analytic(cub, q).B;
        return b_comp == 0 ? v.x : b_comp == 1 ? v.y : v.z;
    };
    Vec3 e;
    (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = 1.0;
    return (-B(p + e * (2 * h)) + 8.0 * B(p + e * h) - 8.0 * B(p - e * h) + B(p - e * (2 * h))) /
           (12.0 * h);
}

}  // namespace detail

// Closed-form field vs the Biot-Savart quadrature reference at random
// external points of random cuboids. Returns the worst per-component
// deviation normalized by |B|.
inline CheckResult check_oracle_agreement(const ValidationConfig& cfg) {
    CheckResult r{"magnetostatics.oracle_agreement", 0.0, 1e-6, false, ""};
    detail::RandomGeometry gen(cfg.seed);
    std::vector<CuboidMagnet> cuboids;
    std::vector<Vec3> points;
    for (int ci = 0; ci < cfg.n_cuboids; ++ci) {
        const CuboidMagnet cub = gen.cuboid();
        for (int pi = 0; pi < cfg.n_oracle_points; ++pi) {
            cuboids.push_back(cub);
            points.push_back(gen.point_near(cub, 0.05, false));
        }
    }
    std::vector<double> dev(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const Vec3 ba = field_analytic(cuboids[i], points[i]).B;
        const Vec3 bo = field_oracle_converged(cuboids[i], points[i], cfg.oracle_rel_tol).B;
        const Vec3 d = ba - bo;
        const double scale = std::max(bo.norm(), 1e-300);
        dev[i] = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)}) / scale;
    });
    r.measured = *std::max_element(dev.begin(), dev.end());
    r.pass = r.measured <= r.tolerance;
    r.detail = std::to_string(points.size()) + " points";
    return r;
}

// Finite-difference divergence and curl at random points outside the magnet,
// each normalized by the local gradient scale, plus closed-surface flux
// cancellation over an enclosing cube.
inline std::vector<CheckResult> check_maxwell(const ValidationConfig& cfg) {
    detail::RandomGeometry gen(cfg.seed + 1);
    double worst_div = 0.0, worst_curl = 0.0;
    int done = 0;
    while (done < cfg.n_maxwell_points) {
        const CuboidMagnet cub = gen.cuboid();
        const double h = 1e-3 * std::min({cub.a, cub.b, cub.c});
        for (int k = 0; k < 10 && done < cfg.n_maxwell_points; ++k, ++done) {
            const Vec3 p = gen.point_near(cub, 0.05, false);
            double grad[3][3];
            for (int bc = 0; bc < 3; ++bc)
                for (int ax = 0; ax < 3; ++ax) grad[bc][ax] = detail::partial(cub, p, bc, ax, h);
            const double scale =
                std::abs(grad[0][0]) + std::abs(grad[1][1]) + std::abs(grad[2][2]);
            if (scale < 1e-30) continue;
            const double div = grad[0][0] + grad[1][1] + grad[2][2];
            const double curl = std::max({std::abs(grad[2][1] - grad[1][2]),
                                          std::abs(grad[0][2] - grad[2][0]),
                                          std::abs(grad[1][0] - grad[0][1])});
            worst_div = std::max(worst_div, std::abs(div) / scale);
            worst_curl = std::max(worst_curl, curl / scale);
        }
    }

    // Net flux through a cube enclosing one magnet.
    detail::RandomGeometry gen2(cfg.seed + 2);
    const CuboidMagnet cub = gen2.cuboid();
    const double diag = std::sqrt(cub.a * cub.a + cub.b * cub.b + cub.c * cub.c);
    const Vec3 center = cub.center_world();
    const double half = 0.75 * diag;
    const auto& rule = detail::gauss_legendre(64);
    double net = 0.0, gross = 0.0;
    for (int face = 0; face < 6; ++face) {
        const int axis = face / 2;
        const double sign = (face % 2) ? 1.0 : -1.0;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const double u = (2.0 * rule.nodes[i] - 1.0) * half;
                const double v = (2.0 * rule.nodes[j] - 1.0) * half;
                Vec3 p = center;
                (axis == 0 ? p.x : axis == 1 ? p.y : p.z) += sign * half;
                (axis == 0 ? p.y : axis == 1 ? p.z : p.x) += u;
                (axis == 0 ? p.z : axis == 1 ? p.x : p.y) += v;
                const Vec3 b = field_analytic(cub, p).B;
                const double bn = sign * (axis == 0 ? b.x : axis == 1 ? b.y : b.z);
                const double w = rule.weights[i] * rule.weights[j] * 4.0 * half * half;
                net += w * bn;
                gross += w * std::abs(bn);
            }
    }

    std::vector<CheckResult> out;
    out.push_back({"magnetostatics.divergence", worst_div, 1e-6, worst_div <= 1e-6,
                   std::to_string(cfg.n_maxwell_points) + " points"});
    out.push_back({"magnetostatics.curl", worst_curl, 1e-6, worst_curl <= 1e-6,
                   std::to_string(cfg.n_maxwell_points) + " points"});
    const double flux_ratio = std::abs(net) / std::max(gross, 1e-300);
    out.push_back({"magnetostatics.gauss_flux", flux_ratio, 1e-6, flux_ratio <= 1e-6,
                   "enclosing cube, 64x64 Gauss-Legendre per face"});
    return out;
}

// Far-field approach to the equivalent point dipole m = m_s * c, with a
// monotone deviation ladder.
inline std::vector<CheckResult> check_far_field(const ValidationConfig& cfg) {
    detail::RandomGeometry gen(cfg.seed + 3);
    const CuboidMagnet cub = gen.cuboid();
    const double maxdim = std::max({cub.a, cub.b, cub.c});
    const Vec3 center = cub.center_world();
    const Vec3 moment = cub.axis_world() * cub.total_moment();
    const Vec3 directions[4] = {Vec3{0.3, -0.5, 0.81}.normalized(),
                                Vec3{-0.7, 0.2, 0.4}.normalized(),
                                Vec3{0.9, 0.43, -0.1}.normalized(),
                                Vec3{-0.2, -0.8, -0.55}.normalized()};
    const double radii[5] = {25, 50, 100, 200, 400};
    double dev[5] = {0, 0, 0, 0, 0};
    for (int ri = 0; ri < 5; ++ri)
        for (const Vec3& dir : directions) {
            const Vec3 p = center + dir * (radii[ri] * maxdim);
            const Vec3 ba = field_analytic(cub, p).B;
            const Vec3 bd = field_dipole(moment, center, p);
            dev[ri] = std::max(dev[ri], (ba - bd).norm() / bd.norm());
        }
    double worst_ratio = 0.0;
    for (int ri = 1; ri < 5; ++ri) worst_ratio = std::max(worst_ratio, dev[ri] / dev[ri - 1]);

    std::vector<CheckResult> out;
    out.push_back({"magnetostatics.far_field_100x", dev[2], 1e-2, dev[2] <= 1e-2,
                   "4 directions at r = 100 max dimension"});
    out.push_back({"magnetostatics.far_field_monotone", worst_ratio, 1.0, worst_ratio < 1.0,
                   "deviation ratio along the 25..400x ladder"});
    return out;
}

// Scaling the moment scales the field; doubling is exact in floating point,
// a general factor agrees to rounding.
inline CheckResult check_linearity(const ValidationConfig& cfg) {
    CheckResult r{"magnetostatics.linearity", 0.0, 1e-14, false, "scale factors 2 and 3"};
    detail::RandomGeometry gen(cfg.seed + 4);
    for (int trial = 0; trial < 5; ++trial) {
        const CuboidMagnet cub = gen.cuboid();
        CuboidMagnet cub2 = cub, cub3 = cub;
        cub2.m_s *= 2.0;
        cub3.m_s *= 3.0;
        for (int k = 0; k < 10; ++k) {
            const Vec3 p = gen.point_near(cub, 0.05, false);
            const Vec3 b1 = field_analytic(cub, p).B;
            const Vec3 b2 = field_analytic(cub2, p).B;
            const Vec3 b3 = field_analytic(cub3, p).B;
            const double scale = std::max(b1.norm(), 1e-300);
            r.measured = std::max(r.measured, (b2 - b1 * 2.0).norm() / (2.0 * scale));
            r.measured = std::max(r.measured, (b3 - b1 * 3.0).norm() / (3.0 * scale));
        }
    }
    r.pass = r.measured <= r.tolerance;
    return r;
}

// Field profile along a thin shell magnet: the magnitude must concentrate at
// the wire ends (outer 5% of an axial line just outside the shell) and stay
// below a tenth of the end peak at the middle.
inline std::vector<CheckResult> check_axial_profile() {
    const Scene scene = preset_vls_shell(10 * micrometer, 50 * nanometer, 3 * nanometer, 3e7);
    const Vec3 from{-50 * nanometer, 0.0, -5 * micrometer};
    const Vec3 to{-50 * nanometer, 0.0, 5 * micrometer};
    const int n = 1001;
    const auto samples = sample_line(scene, from, to, n, {0, 0, 1});

    int peak_lo = 0, peak_hi = n - 1;
    for (int i = 0; i < n; ++i) {
        if (samples[i].B_mag > samples[peak_lo].B_mag && i < n / 2) peak_lo = i;
        if (samples[i].B_mag > samples[peak_hi].B_mag && i >= n / 2) peak_hi = i;
    }
    const double frac_lo = static_cast<double>(peak_lo) / (n - 1);
    const double frac_hi = static_cast<double>(n - 1 - peak_hi) / (n - 1);
    const double worst_frac = std::max(frac_lo, frac_hi);
    const double mid = samples[n / 2].B_mag;
    const double peak = std::min(samples[peak_lo].B_mag, samples[peak_hi].B_mag);
    const double ratio = mid / peak;

    std::vector<CheckResult> out;
    out.push_back({"magnetostatics.axial_peak_location", worst_frac, 0.05,
                   worst_frac <= 0.05, "distance of |B| peaks from the line ends"});
    out.push_back({"magnetostatics.axial_mid_ratio", ratio, 0.1, ratio <= 0.1,
                   "mid-wire |B| over end peak"});
    return out;
}

// The interface-table regression: quoted percentages with their tolerances in
// percentage points.
inline std::vector<CheckResult> check_epitaxy(const MaterialTable& mats) {
    struct Anchor {
        const char* name;
        const char* pair;
        const char* label;
        double quoted_percent;
        double tol_pp;
    };
    const Anchor anchors[] = {
        {"epitaxy.eus_on_wz_1100_parallel", "InAs-WZ/EuS@1-100", "parallel", 0.0, 0.5},
        {"epitaxy.eus_on_wz_1100_transverse", "InAs-WZ/EuS@1-100", "transverse", -1.5, 0.3},
        {"epitaxy.eus_on_wz_1120_parallel", "InAs-WZ/EuS@11-20", "parallel", 4.5, 0.3},
        {"epitaxy.eus_on_wz_1120_transverse", "InAs-WZ/EuS@11-20", "transverse", -7.1, 0.3},
        {"epitaxy.eus_on_wz_1120_rotated", "InAs-WZ/EuS@11-20", "transverse_rotated", -3.8,
         0.2},
        {"epitaxy.al_on_eus_parallel", "EuS/Al", "parallel", 0.2, 0.3},
        {"epitaxy.al_on_eus_transverse", "EuS/Al", "transverse", 1.8, 0.3},
        {"epitaxy.eus_on_zb_cube", "InAs-ZB/EuS", "parallel", -1.5, 0.3},
    };
    std::vector<CheckResult> out;
    for (const Anchor& a : anchors) {
        CheckResult r{a.name, 0.0, a.tol_pp, false, ""};
        try {
            const auto report = interface_report(a.pair, mats);
            double percent = 0.0;
            for (const auto& e : report.entries)
                if (e.label == a.label) percent = 100.0 * e.match.mismatch;
            r.measured = std::abs(percent - a.quoted_percent);
            r.pass = r.measured <= r.tolerance;
            r.detail = std::string(a.pair) + " " + a.label + " = " +
                       std::to_string(percent) + "%, quoted " +
                       std::to_string(a.quoted_percent) + "%";
        } catch (const Error& e) {
            r.measured = std::numeric_limits<double>::infinity();
            r.detail = e.what();
        }
        out.push_back(r);
    }
    return out;
}

// Every validation suite whose name contains the filter substring; an empty
// filter runs everything.
inline std::vector<CheckResult> run_validation(
    const std::string& filter = "", const MaterialTable& mats = MaterialTable::defaults(),
    const ValidationConfig& cfg = ValidationConfig{}) {
    std::vector<CheckResult> all;
    auto want = [&](const char* prefix) {
        return filter.empty() || std::string(prefix).find(filter) != std::string::npos;
    };
    if (want("magnetostatics.oracle_agreement")) all.push_back(check_oracle_agreement(cfg));
    if (want("magnetostatics.maxwell"))
        for (auto& r : check_maxwell(cfg)) all.push_back(std::move(r));
    if (want("magnetostatics.far_field"))
        for (auto& r : check_far_field(cfg)) all.push_back(std::move(r));
    if (want("magnetostatics.linearity")) all.push_back(check_linearity(cfg));
    if (want("magnetostatics.axial_profile"))
        for (auto& r : check_axial_profile()) all.push_back(std::move(r));
    if (want("epitaxy.regression"))
        for (auto& r : check_epitaxy(mats)) all.push_back(std::move(r));
    return all;
}

}  // namespace straymag
