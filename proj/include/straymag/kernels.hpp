#pragma once

#include <cmath>
#include <string>

#include "straymag/errors.hpp"
#include "straymag/units.hpp"

namespace straymag {

namespace detail {
inline constexpr double kSingularFloor = 1e-300;

inline std::string triple(double t1, double t2, double t3) {
    return "(" + std::to_string(t1) + ", " + std::to_string(t2) + ", " +
           std::to_string(t3) + ")";
}

// Principal-branch arctangent of num/den that stays finite when the
// denominator vanishes: den -> 0 gives +-pi/2 with the sign of num.
inline double principal_atan(double num, double den) {
    if (den == 0.0) {
        if (num > 0.0) return pi / 2;
        if (num < 0.0) return -pi / 2;
        return 0.0;
    }
    return den > 0.0 ? std::atan2(num, den) : -std::atan2(num, -den);
}

// ln((R - s)/(R + s)) with R = sqrt(rho2 + s^2), evaluated without the
// cancellation that the naive form suffers when |s| ~ R.
inline double log_ratio(double rho2, double s) {
    const double r = std::sqrt(rho2 + s * s);
    if (s >= 0.0) return std::log(rho2) - 2.0 * std::log(r + s);
    return 2.0 * std::log(r - s) - std::log(rho2);
}

// Shared-forms used by the analytic assembly, taking a precomputed full norm.
inline double xi_log(double rho2, double s) { return log_ratio(rho2, s); }
inline double xi_atan(double num_a, double num_b, double den, double r) {
    return principal_atan(num_a * num_b, den * r);
}
}  // namespace detail

// Point kernel tau_i / (tau1^2 + tau2^2 + tau3^2)^(3/2); the building block
// of the sheet-current line integrals.
inline double kernel_psi(int i, double t1, double t2, double t3) {
    if (i < 1 || i > 3) throw InvalidParameter("kernel_psi index must be 1, 2 or 3");
    const double r2 = t1 * t1 + t2 * t2 + t3 * t3;
    if (r2 < detail::kSingularFloor)
        throw SingularPoint("kernel_psi evaluated at the origin " + detail::triple(t1, t2, t3));
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    const double num = (i == 1) ? t1 : (i == 2) ? t2 : t3;
    return num * inv_r3;
}

// Corner kernels of the assembled cuboid field. With R = |(t1,t2,t3)|:
//   k=1:  ln((R - t2)/(R + t2))          k=2: same with t1 and t2 exchanged
//   k=3:  arctan(t2 t3 / (t1 R))         k=4: same with t1 and t2 exchanged
// The arctangent uses two-argument semantics so a vanishing denominator
// yields the +-pi/2 limit. The log forms diverge on the lines t1 = t3 = 0
// (k=1) and t2 = t3 = 0 (k=2), which contain the magnet rim edges.
inline double kernel_xi(int k, double t1, double t2, double t3) {
    const double r2 = t1 * t1 + t2 * t2 + t3 * t3;
    switch (k) {
        case 1: {
            const double rho2 = t1 * t1 + t3 * t3;
            if (rho2 < detail::kSingularFloor)
                throw LogSingularity("kernel_xi(1) on its singular line at " +
                                     detail::triple(t1, t2, t3));
            return detail::xi_log(rho2, t2);
        }
        case 2: {
            const double rho2 = t2 * t2 + t3 * t3;
            if (rho2 < detail::kSingularFloor)
                throw LogSingularity("kernel_xi(2) on its singular line at " +
                                     detail::triple(t1, t2, t3));
            return detail::xi_log(rho2, t1);
        }
        case 3: {
            if (r2 < detail::kSingularFloor)
                throw SingularPoint("kernel_xi(3) at the origin");
            return detail::xi_atan(t2, t3, t1, std::sqrt(r2));
        }
        case 4: {
            if (r2 < detail::kSingularFloor)
                throw SingularPoint("kernel_xi(4) at the origin");
            return detail::xi_atan(t1, t3, t2, std::sqrt(r2));
        }
        default:
            throw InvalidParameter("kernel_xi index must be 1..4");
    }
}

}  // namespace straymag
