#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "straymag/errors.hpp"
#include "straymag/vec3.hpp"

namespace straymag {

// Only the Bravais translation lattice matters here: rock-salt and
// zinc-blende sublattices are cubic_F, the wurtzite sublattice is
// hexagonal_P. Lengths are in Angstrom.
enum class LatticeSystem { cubic_P, cubic_F, hexagonal_P };

struct Lattice {
    LatticeSystem system = LatticeSystem::cubic_P;
    double a = 0.0;  // Angstrom
    double c = 0.0;  // Angstrom, hexagonal only

    static Lattice cubic_p(double a) { return validated({LatticeSystem::cubic_P, a, 0.0}); }
    static Lattice cubic_f(double a) { return validated({LatticeSystem::cubic_F, a, 0.0}); }
    static Lattice hexagonal(double a, double c) {
        return validated({LatticeSystem::hexagonal_P, a, c});
    }

    static Lattice validated(const Lattice& lat) {
        if (!(lat.a > 0.0) || !std::isfinite(lat.a))
            throw ValidationError("lattice constant a must be positive");
        if (lat.system == LatticeSystem::hexagonal_P &&
            (!(lat.c > 0.0) || !std::isfinite(lat.c)))
            throw ValidationError("hexagonal lattice needs a positive c");
        return lat;
    }

    bool hexagonal_system() const { return system == LatticeSystem::hexagonal_P; }

    // Conventional cell vectors in a fixed Cartesian embedding.
    std::array<Vec3, 3> conventional_basis() const {
        if (hexagonal_system())
            return {Vec3{a, 0, 0}, Vec3{-a / 2, a * std::sqrt(3.0) / 2, 0}, Vec3{0, 0, c}};
        return {Vec3{a, 0, 0}, Vec3{0, a, 0}, Vec3{0, 0, a}};
    }

    // Primitive translation vectors.
    std::array<Vec3, 3> primitive_basis() const {
        if (system == LatticeSystem::cubic_F)
            return {Vec3{a / 2, a / 2, 0}, Vec3{a / 2, 0, a / 2}, Vec3{0, a / 2, a / 2}};
        return conventional_basis();
    }
};

// A crystallographic direction: [u v w], or 4-index [u v t w] for hexagonal
// lattices with t = -(u + v).
struct Direction {
    std::array<std::int64_t, 4> idx{0, 0, 0, 0};
    int count = 3;

    static Direction three(std::int64_t u, std::int64_t v, std::int64_t w) {
        Direction d;
        d.idx = {u, v, w, 0};
        d.count = 3;
        d.validate();
        return d;
    }

    static Direction four(std::int64_t u, std::int64_t v, std::int64_t t, std::int64_t w) {
        Direction d;
        d.idx = {u, v, t, w};
        d.count = 4;
        d.validate();
        return d;
    }

    void validate() const {
        bool all_zero = true;
        for (int i = 0; i < count; ++i) all_zero = all_zero && idx[i] == 0;
        if (all_zero) throw ZeroDirection("direction indices are all zero");
        if (count == 4 && idx[2] != -(idx[0] + idx[1]))
            throw FourIndexInvalid("four-index direction needs t = -(u + v), got t = " +
                                   std::to_string(idx[2]));
    }

    // Conventional-basis components: 4-index [u v t w] reduces to
    // (u - t, v - t, w) because a3 = -(a1 + a2).
    std::array<std::int64_t, 3> conventional() const {
        if (count == 4) return {idx[0] - idx[2], idx[1] - idx[2], idx[3]};
        return {idx[0], idx[1], idx[2]};
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < count; ++i) s += (i ? " " : "") + std::to_string(idx[i]);
        return s + "]";
    }
};

// Cartesian direction vector u a1 + v a2 (+ t a3) + w c, in Angstrom.
inline Vec3 direction_vector(const Lattice& lat, const Direction& dir) {
    dir.validate();
    const auto basis = lat.conventional_basis();
    if (dir.count == 4 && !lat.hexagonal_system())
        throw FourIndexInvalid("four-index directions apply to hexagonal lattices only");
    const auto uvw = dir.conventional();
    Vec3 v;
    for (int i = 0; i < 3; ++i) v += basis[i] * static_cast<double>(uvw[i]);
    if (v.norm2() == 0.0) throw ZeroDirection("direction reduces to the zero vector");
    return v;
}

}  // namespace straymag
