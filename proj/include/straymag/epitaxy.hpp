#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "straymag/errors.hpp"
#include "straymag/lattice.hpp"
#include "straymag/units.hpp"

namespace straymag {

// How to turn a direction into a repeat period:
//   shortest_translation  - the shortest lattice translation along the ray
//                           (face-centering halves ⟨110⟩-type periods).
//   conventional_over(k)  - |conventional vector| / gcd(indices) / k, an
//                           override for unit conventions that are not
//                           lattice translations.
struct Convention {
    enum class Kind { shortest_translation, conventional_over };
    Kind kind = Kind::shortest_translation;
    int k = 1;

    static Convention shortest() { return {}; }
    static Convention conventional_over(int k) {
        if (k < 1) throw InvalidParameter("conventional_over needs k >= 1");
        return {Kind::conventional_over, k};
    }

    std::string str() const {
        if (kind == Kind::shortest_translation) return "shortest";
        return "conventional/" + std::to_string(k);
    }
};

namespace detail {

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
    return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

// Integer coordinates of a conventional-basis vector in the primitive basis.
inline std::array<std::int64_t, 3> primitive_coords(const Lattice& lat,
                                                    const std::array<std::int64_t, 3>& uvw) {
    if (lat.system == LatticeSystem::cubic_F) {
        const auto [u, v, w] = uvw;
        return {u + v - w, u - v + w, -u + v + w};
    }
    return uvw;
}

}  // namespace detail

// Repeat period of the lattice along a direction, in Angstrom.
inline double period_along(const Lattice& lat, const Direction& dir,
                           const Convention& conv = Convention::shortest()) {
    const Vec3 vec = direction_vector(lat, dir);  // validates
    const auto uvw = dir.conventional();
    const std::int64_t g_conv = detail::gcd3(uvw[0], uvw[1], uvw[2]);

    if (conv.kind == Convention::Kind::conventional_over)
        return vec.norm() / static_cast<double>(g_conv) / conv.k;

    auto k = detail::primitive_coords(lat, uvw);
    const std::int64_t g = detail::gcd3(k[0], k[1], k[2]);
    for (auto& v : k) v /= g;
    const auto prim = lat.primitive_basis();
    Vec3 t;
    for (int i = 0; i < 3; ++i) t += prim[i] * static_cast<double>(k[i]);
    return t.norm();
}

// Signed residual mismatch of n film periods over m substrate periods:
// f = (n L_f - m L_s) / (m L_s).
inline double residual_mismatch(int n, const Lattice& lat_f, const Direction& dir_f,
                                const Convention& conv_f, int m, const Lattice& lat_s,
                                const Direction& dir_s, const Convention& conv_s) {
    if (n < 1 || m < 1) throw InvalidParameter("domain multiplicities must be >= 1");
    const double lf = period_along(lat_f, dir_f, conv_f);
    const double ls = period_along(lat_s, dir_s, conv_s);
    return (n * lf - m * ls) / (m * ls);
}

// An in-plane rotation of the film rows by theta lengthens the effective
// repeat along the matching direction by sec(theta).
inline double rotated_mismatch(double f, double theta_deg) {
    if (!(std::abs(theta_deg) < 90.0))
        throw AngleOutOfRange("rotation must satisfy |theta| < 90 deg");
    const double sec = 1.0 / std::cos(theta_deg * pi / 180.0);
    return (1.0 + f) * sec - 1.0;
}

struct DomainMatch {
    int n = 1, m = 1;
    Direction dir_film, dir_sub;
    Convention conv_film, conv_sub;
    double L_film = 0.0;  // Angstrom, one film period
    double L_sub = 0.0;   // Angstrom, one substrate period
    double rotation_deg = 0.0;
    double mismatch = 0.0;  // signed fraction, consistent with the fields above
};

inline DomainMatch make_domain_match(int n, const Lattice& lat_f, const Direction& dir_f,
                                     const Convention& conv_f, int m, const Lattice& lat_s,
                                     const Direction& dir_s, const Convention& conv_s,
                                     double rotation_deg = 0.0) {
    DomainMatch dm;
    dm.n = n;
    dm.m = m;
    dm.dir_film = dir_f;
    dm.dir_sub = dir_s;
    dm.conv_film = conv_f;
    dm.conv_sub = conv_s;
    dm.L_film = period_along(lat_f, dir_f, conv_f);
    dm.L_sub = period_along(lat_s, dir_s, conv_s);
    dm.rotation_deg = rotation_deg;
    const double flat = (n * dm.L_film - m * dm.L_sub) / (m * dm.L_sub);
    dm.mismatch = rotation_deg == 0.0 ? flat : rotated_mismatch(flat, rotation_deg);
    return dm;
}

struct ConventionPair {
    Convention film = Convention::shortest();
    Convention sub = Convention::shortest();
};

// Exhaustive (n, m) x convention enumeration ranked by |mismatch|, ties by
// smaller n + m, then smaller n.
inline std::vector<DomainMatch> search_matches(const Lattice& lat_f, const Direction& dir_f,
                                               const Lattice& lat_s, const Direction& dir_s,
                                               int n_max,
                                               const std::vector<ConventionPair>& conventions = {
                                                   ConventionPair{}}) {
    if (n_max < 1) throw InvalidParameter("search_matches needs n_max >= 1");
    std::vector<DomainMatch> out;
    for (const auto& conv : conventions)
        for (int n = 1; n <= n_max; ++n)
            for (int m = 1; m <= n_max; ++m)
                out.push_back(make_domain_match(n, lat_f, dir_f, conv.film, m, lat_s, dir_s,
                                                conv.sub));
    std::stable_sort(out.begin(), out.end(), [](const DomainMatch& a, const DomainMatch& b) {
        const double fa = std::abs(a.mismatch), fb = std::abs(b.mismatch);
        if (fa != fb) return fa < fb;
        if (a.n + a.m != b.n + b.m) return a.n + a.m < b.n + b.m;
        return a.n < b.n;
    });
    // Drop exact duplicates produced by equivalent convention pairs.
    out.erase(std::unique(out.begin(), out.end(),
                          [](const DomainMatch& a, const DomainMatch& b) {
                              return a.n == b.n && a.m == b.m && a.L_film == b.L_film &&
                                     a.L_sub == b.L_sub;
                          }),
              out.end());
    return out;
}

// Bulk lattice constants (Angstrom). Overridable via configuration.
struct MaterialTable {
    std::map<std::string, Lattice> materials;

    static MaterialTable defaults() {
        MaterialTable t;
        t.materials["Al"] = Lattice::cubic_f(4.0495);
        t.materials["EuS"] = Lattice::cubic_f(5.968);
        t.materials["InAs-ZB"] = Lattice::cubic_f(6.0583);
        t.materials["InAs-WZ"] = Lattice::hexagonal(4.2839, 6.9954);
        return t;
    }

    const Lattice& at(const std::string& name) const {
        auto it = materials.find(name);
        if (it == materials.end()) throw UnknownMaterial("no lattice constants for " + name);
        return it->second;
    }
};

struct MatchEntry {
    std::string label;  // "parallel", "transverse", "transverse_rotated"
    std::string film, sub;
    DomainMatch match;
};

struct MatchReport {
    std::string pair;
    std::vector<MatchEntry> entries;
};

// The named substrate/film interface reports. Pair names use
// substrate/film order; the two wurtzite facets are selected with a suffix.
inline MatchReport interface_report(const std::string& pair_name,
                                    const MaterialTable& mats = MaterialTable::defaults()) {
    const auto shortest = Convention::shortest();
    const auto over3 = Convention::conventional_over(3);

    auto entry = [&](const std::string& label, const std::string& film,
                     const std::string& sub, int n, const Direction& df,
                     const Convention& cf, int m, const Direction& ds, const Convention& cs,
                     double rot = 0.0) {
        return MatchEntry{label, film, sub,
                          make_domain_match(n, mats.at(film), df, cf, m, mats.at(sub), ds, cs,
                                            rot)};
    };

    std::string name = pair_name;
    // Accept brace/space spellings of the facet suffix.
    for (const char* alias : {" on {1-100}", "@{1-100}"})
        if (auto pos = name.find(alias); pos != std::string::npos)
            name = name.substr(0, pos) + "@1-100";
    for (const char* alias : {" on {11-20}", "@{11-20}"})
        if (auto pos = name.find(alias); pos != std::string::npos)
            name = name.substr(0, pos) + "@11-20";

    MatchReport report;
    report.pair = name;
    if (name == "InAs-WZ/EuS@1-100") {
        report.entries = {
            entry("parallel", "EuS", "InAs-WZ", 3, Direction::three(3, 3, 2), over3, 4,
                  Direction::four(0, 0, 0, -1), shortest),
            entry("transverse", "EuS", "InAs-WZ", 1, Direction::three(1, -1, 0), shortest, 1,
                  Direction::four(1, 1, -2, 0), shortest),
        };
    } else if (name == "InAs-WZ/EuS@11-20") {
        report.entries = {
            entry("parallel", "EuS", "InAs-WZ", 1, Direction::three(1, 1, 2), shortest, 1,
                  Direction::four(0, 0, 0, 1), shortest),
            entry("transverse", "EuS", "InAs-WZ", 2, Direction::three(1, 1, -1), shortest, 3,
                  Direction::four(1, -1, 0, 0), shortest),
            entry("transverse_rotated", "EuS", "InAs-WZ", 2, Direction::three(1, 1, -1),
                  shortest, 3, Direction::four(1, -1, 0, 0), shortest, 15.0),
        };
    } else if (name == "EuS/Al") {
        report.entries = {
            entry("parallel", "Al", "EuS", 4, Direction::three(-1, -1, -1), shortest, 3,
                  Direction::three(3, 3, 2), over3),
            entry("transverse", "Al", "EuS", 3, Direction::three(1, -1, 0), shortest, 2,
                  Direction::three(1, -1, 0), shortest),
        };
    } else if (name == "InAs-ZB/EuS") {
        report.entries = {
            entry("parallel", "EuS", "InAs-ZB", 1, Direction::three(0, 1, 1), shortest, 1,
                  Direction::three(0, 1, 1), shortest),
            entry("transverse", "EuS", "InAs-ZB", 1, Direction::three(0, -1, 1), shortest, 1,
                  Direction::three(0, -1, 1), shortest),
        };
    } else {
        throw UnknownPair("unknown interface pair '" + pair_name +
                          "'; known: InAs-WZ/EuS@1-100, InAs-WZ/EuS@11-20, EuS/Al, "
                          "InAs-ZB/EuS");
    }
    return report;
}

}  // namespace straymag
