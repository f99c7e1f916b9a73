#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "straymag/csv.hpp"
#include "straymag/epitaxy.hpp"
#include "straymag/errors.hpp"
#include "straymag/scene.hpp"
#include "straymag/sensor.hpp"
#include "straymag/units.hpp"

namespace straymag {

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + e.what());
    }
}

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& known,
                                const std::string& path) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw SchemaError(path + ": unknown key '" + key + "'");
}

inline double number_at(const nlohmann::json& obj, const std::string& key,
                        const std::string& path) {
    if (!obj.contains(key)) throw SchemaError(path + "." + key + ": missing");
    if (!obj[key].is_number()) throw SchemaError(path + "." + key + ": expected a number");
    return obj[key].get<double>();
}

inline Vec3 vec3_at(const nlohmann::json& obj, const std::string& key,
                    const std::string& path) {
    if (!obj.contains(key)) throw SchemaError(path + "." + key + ": missing");
    const auto& arr = obj[key];
    if (!arr.is_array() || arr.size() != 3)
        throw SchemaError(path + "." + key + ": expected an array of 3 numbers");
    for (const auto& v : arr)
        if (!v.is_number()) throw SchemaError(path + "." + key + ": expected numbers");
    return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace detail

// Scene file schema:
//   { "mu_r": 1.0,                                 // optional, ambient
//     "magnets": [ { "dims_nm": [a, b, c],         // edge lengths
//                    "position_nm": [x, y, z],     // cuboid center, optional
//                    "axis": [ux, uy, uz],         // magnetization axis, optional
//                    "m_s_muB_per_um": 3e7 } ] }
// The axis fixes the magnet-frame z; the frame is completed deterministically
// (see frame_from_axis). Unknown keys are rejected.
inline Scene scene_from_json(const nlohmann::json& root, const std::string& origin) {
    if (!root.is_object()) throw SchemaError(origin + ": top level must be an object");
    detail::reject_unknown_keys(root, {"magnets", "mu_r"}, origin);
    if (!root.contains("magnets") || !root["magnets"].is_array())
        throw SchemaError(origin + ".magnets: missing or not an array");

    Scene scene;
    if (root.contains("mu_r")) {
        if (!root["mu_r"].is_number()) throw SchemaError(origin + ".mu_r: expected a number");
        scene.mu_r = root["mu_r"].get<double>();
        if (!(scene.mu_r > 0.0)) throw ValidationError(origin + ".mu_r: must be positive");
    }

    int index = 0;
    for (const auto& mj : root["magnets"]) {
        const std::string path = origin + ".magnets[" + std::to_string(index) + "]";
        if (!mj.is_object()) throw SchemaError(path + ": expected an object");
        detail::reject_unknown_keys(mj, {"dims_nm", "position_nm", "axis", "m_s_muB_per_um"},
                                    path);
        const Vec3 dims = detail::vec3_at(mj, "dims_nm", path);
        const Vec3 center = mj.contains("position_nm") ? detail::vec3_at(mj, "position_nm", path)
                                                       : Vec3{0, 0, 0};
        const Vec3 axis = mj.contains("axis") ? detail::vec3_at(mj, "axis", path)
                                              : Vec3{0, 0, 1};
        const double m_s = detail::number_at(mj, "m_s_muB_per_um", path);

        Mat3 rot;
        try {
            rot = frame_from_axis(axis);
        } catch (const Error& e) {
            throw ValidationError(path + ".axis: " + e.what());
        }
        const Vec3 local_center{dims.x / 2 * nanometer, dims.y / 2 * nanometer,
                                dims.z / 2 * nanometer};
        const Pose pose(rot, center * nanometer - rot * local_center);
        try {
            scene.add(make_cuboid(dims.x * nanometer, dims.y * nanometer, dims.z * nanometer,
                                  pose, m_s, scene.mu_r));
        } catch (const Error& e) {
            throw ValidationError(path + ".dims_nm: " + e.what());
        }
        ++index;
    }
    return scene;
}

inline Scene parse_scene(const std::string& path) {
    return scene_from_json(detail::parse_json_text(read_text_file(path), path), path);
}

// Sensor file schema:
//   { "pickup_radius_nm": 3000, "scan_height_nm": 1000, "psf_csv": "k.csv" }
inline SensorSpec parse_sensor(const std::string& path) {
    const auto root = detail::parse_json_text(read_text_file(path), path);
    if (!root.is_object()) throw SchemaError(path + ": top level must be an object");
    detail::reject_unknown_keys(root, {"pickup_radius_nm", "scan_height_nm", "psf_csv"}, path);
    const double radius = detail::number_at(root, "pickup_radius_nm", path);
    const double height = detail::number_at(root, "scan_height_nm", path);
    std::optional<PsfKernel> psf;
    if (root.contains("psf_csv")) {
        if (!root["psf_csv"].is_string())
            throw SchemaError(path + ".psf_csv: expected a string");
        psf = load_psf_csv(root["psf_csv"].get<std::string>());
    }
    try {
        return SensorSpec(radius * nanometer, height * nanometer, std::move(psf));
    } catch (const Error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// Lattice-constant override file: { "EuS": {"system": "cubic_F", "a": 5.97},
// "InAs-WZ": {"system": "hexagonal_P", "a": 4.28, "c": 7.0} }. Entries merge
// over the built-in defaults.
inline MaterialTable parse_material_overrides(const std::string& path,
                                              MaterialTable table = MaterialTable::defaults()) {
    const auto root = detail::parse_json_text(read_text_file(path), path);
    if (!root.is_object()) throw SchemaError(path + ": top level must be an object");
    for (const auto& [name, spec] : root.items()) {
        const std::string where = path + "." + name;
        if (!spec.is_object()) throw SchemaError(where + ": expected an object");
        detail::reject_unknown_keys(spec, {"system", "a", "c"}, where);
        if (!spec.contains("system") || !spec["system"].is_string())
            throw SchemaError(where + ".system: missing or not a string");
        const std::string system = spec["system"].get<std::string>();
        const double a = detail::number_at(spec, "a", where);
        try {
            if (system == "cubic_P") {
                table.materials[name] = Lattice::cubic_p(a);
            } else if (system == "cubic_F") {
                table.materials[name] = Lattice::cubic_f(a);
            } else if (system == "hexagonal_P") {
                table.materials[name] = Lattice::hexagonal(a, detail::number_at(spec, "c", where));
            } else {
                throw SchemaError(where + ".system: unknown system '" + system + "'");
            }
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return table;
}

}  // namespace straymag
