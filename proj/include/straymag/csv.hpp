#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "straymag/errors.hpp"
#include "straymag/sensor.hpp"
#include "straymag/units.hpp"

namespace straymag {

// Shortest round-trip decimal form; the one float format used in every
// emitted file, so identical inputs give byte-identical outputs.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ParseError("bad number '" + s + "' in " + where);
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw ValidationError("failed writing " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// PSF kernel file: first line "pitch_nm,<value>", then comma-separated rows.
inline PsfKernel load_psf_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty PSF file");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "pitch_nm")
        throw SchemaError(path + ": first line must be 'pitch_nm,<value>'");
    const double pitch_nm = parse_double(header[1], path + " pitch");

    std::vector<double> values;
    int rows = 0, cols = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (cols < 0) cols = static_cast<int>(fields.size());
        if (static_cast<int>(fields.size()) != cols)
            throw SchemaError(path + ": ragged PSF row " + std::to_string(rows + 1));
        for (const auto& f : fields)
            values.push_back(parse_double(f, path + " row " + std::to_string(rows + 1)));
        ++rows;
    }
    if (rows == 0) throw SchemaError(path + ": PSF has no rows");
    return PsfKernel(pitch_nm * nanometer, rows, cols, std::move(values));
}

// Scan image export: header x_um,y_um,flux_mPhi0, row-major over the grid.
inline std::string scan_image_csv(const ScanImage& img) {
    std::string out = "x_um,y_um,flux_mPhi0\n";
    for (int i1 = 0; i1 < img.n1; ++i1)
        for (int i2 = 0; i2 < img.n2; ++i2) {
            const Vec3 p = img.position(i1, i2);
            out += format_double(p.x / micrometer) + "," + format_double(p.y / micrometer) +
                   "," + format_double(img.at(i1, i2) * 1000.0) + "\n";
        }
    return out;
}

// Rebuilds a scan image from its CSV export. Row-major order is inferred
// from the first repeat of the inner step; the z coordinate is not stored in
// the file and must be supplied (the scan height).
inline ScanImage load_scan_image_csv(const std::string& path, double z_m) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "x_um,y_um,flux_mPhi0")
        throw SchemaError(path + ": expected header x_um,y_um,flux_mPhi0");
    std::vector<Vec3> pts;
    std::vector<double> flux;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3)
            throw SchemaError(path + ": line " + std::to_string(row) + " needs 3 fields");
        const std::string where = path + ":" + std::to_string(row);
        pts.push_back({parse_double(f[0], where) * micrometer,
                       parse_double(f[1], where) * micrometer, z_m});
        flux.push_back(parse_double(f[2], where) / 1000.0);
    }
    if (pts.size() < 4) throw SchemaError(path + ": too few pixels for a grid");

    const Vec3 step2 = pts[1] - pts[0];
    std::size_t n2 = pts.size();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const Vec3 d = pts[i + 1] - pts[i];
        if ((d - step2).norm() > 1e-9 * (step2.norm() + d.norm()) + 1e-15) {
            n2 = i + 1;
            break;
        }
    }
    if (pts.size() % n2 != 0)
        throw SchemaError(path + ": rows do not form a complete grid");
    const std::size_t n1 = pts.size() / n2;
    if (n1 < 2 || n2 < 2) throw SchemaError(path + ": grid needs at least 2x2 pixels");

    ScanImage img;
    img.n1 = static_cast<int>(n1);
    img.n2 = static_cast<int>(n2);
    img.origin = pts[0];
    img.e2 = (pts[n2 - 1] - pts[0]);
    img.e1 = (pts[(n1 - 1) * n2] - pts[0]);
    img.flux = std::move(flux);
    return img;
}

// FNV-1a, used to fingerprint input files in run reports.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace straymag
