#pragma once

// Unit conventions: the core works in SI (meters, tesla, A*m^2). Interfaces
// that take nanometers, micrometers, Angstrom or Bohr magnetons per
// micrometer say so in their parameter names.

namespace straymag {

inline constexpr double pi = 3.14159265358979323846;

struct PhysicalConstants {
    static constexpr double mu0 = 4.0 * pi * 1e-7;   // J/(A^2 m)
    static constexpr double muB = 9.274e-24;         // A m^2, Bohr magneton
    static constexpr double Phi0 = 2.067834e-15;     // Wb, flux quantum h/2e
};

inline constexpr double nanometer = 1e-9;
inline constexpr double micrometer = 1e-6;
inline constexpr double angstrom = 1e-10;

// Moment per unit length, muB/um -> A*m^2/m.
inline constexpr double moment_per_length_si(double muB_per_um) {
    return muB_per_um * PhysicalConstants::muB * 1e6;
}

inline constexpr double moment_per_length_muB_um(double si) {
    return si / (PhysicalConstants::muB * 1e6);
}

}  // namespace straymag
