// straymag: batch front-end for the stray-field, SQUID-imaging and
// interface-matching library. Subcommands:
//   field line|map   field profiles along a segment or raster, CSV output
//   squid scan|fit|estimate   pickup-loop imaging, dipole fits, moment scale
//   epimatch report|match     interface domain matching tables
//   validate         the built-in oracle / invariant / regression suites
//
// Exit codes: 0 success, 1 validation failure, 2 usage or input-schema error,
// 3 runtime evaluation error. A RunReport JSON is printed to stdout on every
// invocation; coordinates on the command line are micrometers.

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "straymag/csv.hpp"
#include "straymag/cuboid_field.hpp"
#include "straymag/dipole_fit.hpp"
#include "straymag/epitaxy.hpp"
#include "straymag/errors.hpp"
#include "straymag/report.hpp"
#include "straymag/sampling.hpp"
#include "straymag/scan.hpp"
#include "straymag/scene_io.hpp"
#include "straymag/validate.hpp"

namespace {

using namespace straymag;

Vec3 to_vec(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }
Vec3 um_to_m(const std::vector<double>& v) {
    return {v[0] * micrometer, v[1] * micrometer, v[2] * micrometer};
}

// "1-10", "[11-20]", "000-1" or comma form "[3,3,2]".
Direction parse_direction(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '[') s.erase(0, 1);
    if (!s.empty() && s.back() == ']') s.pop_back();
    std::vector<std::int64_t> idx;
    if (s.find(',') != std::string::npos) {
        for (const auto& f : split_csv_line(s))
            idx.push_back(static_cast<std::int64_t>(parse_double(f, "direction " + text)));
    } else {
        bool neg = false;
        for (char ch : s) {
            if (ch == '-') {
                neg = true;
            } else if (ch >= '0' && ch <= '9') {
                idx.push_back((neg ? -1 : 1) * (ch - '0'));
                neg = false;
            } else if (ch != ' ') {
                throw ParseError("cannot parse direction '" + text + "'");
            }
        }
    }
    if (idx.size() == 3) return Direction::three(idx[0], idx[1], idx[2]);
    if (idx.size() == 4) return Direction::four(idx[0], idx[1], idx[2], idx[3]);
    throw ParseError("direction '" + text + "' needs 3 or 4 indices");
}

// "shortest" or "conv/K".
Convention parse_convention(const std::string& text) {
    if (text == "shortest") return Convention::shortest();
    if (text.rfind("conv/", 0) == 0)
        return Convention::conventional_over(
            static_cast<int>(parse_double(text.substr(5), "convention " + text)));
    throw ParseError("unknown convention '" + text + "' (use shortest or conv/K)");
}

std::string field_csv(const std::vector<FieldSample>& samples,
                      const std::vector<double>& s_values) {
    std::string out = "s_um,x_um,y_um,z_um,Bx_T,By_T,Bz_T,Bmag_T,Bpar_T\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const FieldSample& f = samples[i];
        out += format_double(s_values[i]) + "," + format_double(f.position.x / micrometer) +
               "," + format_double(f.position.y / micrometer) + "," +
               format_double(f.position.z / micrometer) + "," + format_double(f.B.x) + "," +
               format_double(f.B.y) + "," + format_double(f.B.z) + "," +
               format_double(f.B_mag) + "," + format_double(f.B_parallel) + "\n";
    }
    return out;
}

nlohmann::json match_json(const DomainMatch& m) {
    nlohmann::json j;
    j["n"] = m.n;
    j["m"] = m.m;
    j["dir_film"] = m.dir_film.str();
    j["dir_sub"] = m.dir_sub.str();
    j["conv_film"] = m.conv_film.str();
    j["conv_sub"] = m.conv_sub.str();
    j["L_film_A"] = m.L_film;
    j["L_sub_A"] = m.L_sub;
    j["rotation_deg"] = m.rotation_deg;
    j["mismatch"] = m.mismatch;
    j["mismatch_percent"] = 100.0 * m.mismatch;
    return j;
}

void print_match_table(const std::vector<MatchEntry>& entries) {
    std::printf("%-22s %-6s %-12s %-6s %-12s %9s %9s %6s %9s\n", "label", "n", "dir_film", "m",
                "dir_sub", "L_film_A", "L_sub_A", "rot", "mismatch");
    for (const auto& e : entries)
        std::printf("%-22s %-6d %-12s %-6d %-12s %9.4f %9.4f %6.1f %8.2f%%\n",
                    e.label.c_str(), e.match.n, e.match.dir_film.str().c_str(), e.match.m,
                    e.match.dir_sub.str().c_str(), e.match.L_film, e.match.L_sub,
                    e.match.rotation_deg, 100.0 * e.match.mismatch);
}

bool usage_error_code(const std::string& code) {
    static const std::set<std::string> codes = {
        "ParseError",      "SchemaError",     "ValidationError", "UnknownPair",
        "UnknownMaterial", "InvalidParameter", "ZeroDirection",  "FourIndexInvalid",
        "AngleOutOfRange", "NonPositiveDimension", "NonFiniteInput"};
    return codes.count(code) > 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace straymag;
    RunReport report;
    for (int i = 0; i < argc; ++i) report.command.push_back(argv[i]);

    CLI::App app{"stray-field, SQUID-imaging and interface-matching toolbox"};
    app.require_subcommand(1);

    // --- field ---
    auto* field = app.add_subcommand("field", "field profiles of a magnet scene");
    field->require_subcommand(1);
    std::string scene_path, out_path, sensor_path, summary_path, psf_path, image_path;
    std::vector<double> from_um, to_um, axis_vec, origin_um, e1_um, e2_um, init_vals;
    int samples = 0, n1 = 0, n2 = 0;

    auto* fline = field->add_subcommand("line", "samples along a segment");
    fline->add_option("--scene", scene_path, "scene JSON")->required();
    fline->add_option("--from", from_um, "start point, um")->expected(3)->required();
    fline->add_option("--to", to_um, "end point, um")->expected(3)->required();
    fline->add_option("--samples", samples, "number of samples (>= 2)")->required();
    fline->add_option("--axis", axis_vec, "axis for the parallel component")->expected(3);
    fline->add_option("--out", out_path, "output CSV")->required();

    auto* fmap = field->add_subcommand("map", "samples on a parallelogram raster");
    fmap->add_option("--scene", scene_path, "scene JSON")->required();
    fmap->add_option("--origin", origin_um, "grid origin, um")->expected(3)->required();
    fmap->add_option("--e1", e1_um, "first grid extent, um")->expected(3)->required();
    fmap->add_option("--e2", e2_um, "second grid extent, um")->expected(3)->required();
    fmap->add_option("--n1", n1, "samples along e1")->required();
    fmap->add_option("--n2", n2, "samples along e2")->required();
    fmap->add_option("--out", out_path, "output CSV")->required();

    // --- squid ---
    auto* squid = app.add_subcommand("squid", "pickup-loop imaging");
    squid->require_subcommand(1);
    double p2p_target = 0.0;

    auto* sscan = squid->add_subcommand("scan", "raster the pickup-loop flux");
    sscan->add_option("--scene", scene_path, "scene JSON")->required();
    sscan->add_option("--sensor", sensor_path, "sensor JSON")->required();
    sscan->add_option("--psf", psf_path, "PSF kernel CSV (overrides the sensor file)");
    sscan->add_option("--origin", origin_um, "grid origin, um")->expected(3)->required();
    sscan->add_option("--e1", e1_um, "first grid extent, um")->expected(3)->required();
    sscan->add_option("--e2", e2_um, "second grid extent, um")->expected(3)->required();
    sscan->add_option("--n1", n1, "pixels along e1")->required();
    sscan->add_option("--n2", n2, "pixels along e2")->required();
    sscan->add_option("--out", out_path, "image CSV")->required();
    sscan->add_option("--summary", summary_path, "summary JSON path");

    auto* sfit = squid->add_subcommand("fit", "least-squares dipole fit to an image");
    sfit->add_option("--image", image_path, "image CSV (as written by scan)")->required();
    sfit->add_option("--sensor", sensor_path, "sensor JSON")->required();
    sfit->add_option("--init", init_vals,
                     "x_um y_um z_um mx my mz initial guess (moment in A*m^2)")
        ->expected(6);
    sfit->add_option("--out", out_path, "fit JSON path");

    auto* sest = squid->add_subcommand("estimate", "invert a peak-to-peak signal");
    sest->add_option("--scene", scene_path, "template scene JSON")->required();
    sest->add_option("--sensor", sensor_path, "sensor JSON")->required();
    sest->add_option("--origin", origin_um, "grid origin, um")->expected(3)->required();
    sest->add_option("--e1", e1_um, "first grid extent, um")->expected(3)->required();
    sest->add_option("--e2", e2_um, "second grid extent, um")->expected(3)->required();
    sest->add_option("--n1", n1, "pixels along e1")->required();
    sest->add_option("--n2", n2, "pixels along e2")->required();
    sest->add_option("--p2p", p2p_target, "target peak-to-peak signal, mPhi0")->required();
    sest->add_option("--out", out_path, "estimate JSON path");

    // --- epimatch ---
    auto* epi = app.add_subcommand("epimatch", "interface domain matching");
    epi->require_subcommand(1);
    std::string pair_name, film_name, film_dir, sub_name, sub_dir, lattice_path;
    std::string film_conv = "shortest", sub_conv = "shortest";
    int nmax = 4;

    auto* erep = epi->add_subcommand("report", "the named interface tables");
    erep->add_option("pair", pair_name, "interface pair name")->required();
    erep->add_option("--lattice", lattice_path, "lattice-constant override JSON");
    erep->add_option("--out", out_path, "report JSON path");

    auto* ematch = epi->add_subcommand("match", "exhaustive integer-ratio search");
    ematch->add_option("film", film_name, "film material")->required();
    ematch->add_option("film_dir", film_dir, "film direction, e.g. [1-10]")->required();
    ematch->add_option("sub", sub_name, "substrate material")->required();
    ematch->add_option("sub_dir", sub_dir, "substrate direction")->required();
    ematch->add_option("--nmax", nmax, "largest domain multiplicity");
    ematch->add_option("--film-conv", film_conv, "shortest or conv/K");
    ematch->add_option("--sub-conv", sub_conv, "shortest or conv/K");
    ematch->add_option("--lattice", lattice_path, "lattice-constant override JSON");
    ematch->add_option("--out", out_path, "matches JSON path");

    // --- validate ---
    auto* val = app.add_subcommand("validate", "run the validation suites");
    std::string filter;
    val->add_option("--filter", filter, "only suites whose name contains this");
    val->add_option("--lattice", lattice_path, "lattice-constant override JSON");
    val->add_option("--out", out_path, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cout << report.json();
        return 2;
    }

    int exit_code = 0;
    try {
        if (fline->parsed() || fmap->parsed()) {
            report.note_input(scene_path);
            const Scene scene = parse_scene(scene_path);
            std::vector<FieldSample> field_samples;
            std::vector<double> s_values;
            if (fline->parsed()) {
                if (samples < 2) throw InvalidParameter("--samples must be >= 2");
                const Vec3 from = um_to_m(from_um), to = um_to_m(to_um);
                const Vec3 axis = axis_vec.empty() ? (to - from) : to_vec(axis_vec);
                field_samples = sample_line(scene, from, to, samples, axis);
                for (int i = 0; i < samples; ++i)
                    s_values.push_back((to - from).norm() / micrometer * i / (samples - 1));
            } else {
                const FieldGrid grid = sample_grid(scene, um_to_m(origin_um), um_to_m(e1_um),
                                                   um_to_m(e2_um), n1, n2);
                field_samples = grid.samples;
                for (std::size_t i = 0; i < field_samples.size(); ++i)
                    s_values.push_back(static_cast<double>(i));
            }
            write_text_file(out_path, field_csv(field_samples, s_values));
            report.note_output(out_path);
        } else if (sscan->parsed()) {
            report.note_input(scene_path);
            report.note_input(sensor_path);
            const Scene scene = parse_scene(scene_path);
            SensorSpec sensor = parse_sensor(sensor_path);
            if (!psf_path.empty()) {
                report.note_input(psf_path);
                sensor.psf = load_psf_csv(psf_path);
            }
            const ScanImage img = scan_image(scene, sensor, um_to_m(origin_um), um_to_m(e1_um),
                                             um_to_m(e2_um), n1, n2);
            write_text_file(out_path, scan_image_csv(img));
            report.note_output(out_path);
            const auto [lo, hi] = std::minmax_element(img.flux.begin(), img.flux.end());
            nlohmann::json summary;
            summary["p2p_mPhi0"] = peak_to_peak(img);
            summary["min_mPhi0"] = *lo * 1000.0;
            summary["max_mPhi0"] = *hi * 1000.0;
            summary["n1"] = img.n1;
            summary["n2"] = img.n2;
            if (!summary_path.empty()) {
                write_text_file(summary_path, summary.dump(2) + "\n");
                report.note_output(summary_path);
            }
            report.checks.push_back({{"name", "squid.scan_p2p_mPhi0"},
                                     {"measured", peak_to_peak(img)}});
        } else if (sfit->parsed()) {
            report.note_input(image_path);
            report.note_input(sensor_path);
            const SensorSpec sensor = parse_sensor(sensor_path);
            const ScanImage img = load_scan_image_csv(image_path, sensor.scan_height);
            DipoleFit init;
            if (!init_vals.empty()) {
                init.position = {init_vals[0] * micrometer, init_vals[1] * micrometer,
                                 init_vals[2] * micrometer};
                init.moment = {init_vals[3], init_vals[4], init_vals[5]};
            } else {
                init.position = img.origin + (img.e1 + img.e2) * 0.5;
                init.position.z = 0.0;
            }
            const DipoleFit fit = fit_dipole(img, sensor, init);
            nlohmann::json j;
            j["position_um"] = {fit.position.x / micrometer, fit.position.y / micrometer,
                                fit.position.z / micrometer};
            j["moment_Am2"] = {fit.moment.x, fit.moment.y, fit.moment.z};
            j["residual_norm_Phi0"] = fit.residual_norm;
            j["converged"] = fit.converged;
            j["iterations"] = fit.iterations;
            std::cout << j.dump(2) << "\n";
            if (!out_path.empty()) {
                write_text_file(out_path, j.dump(2) + "\n");
                report.note_output(out_path);
            }
        } else if (sest->parsed()) {
            report.note_input(scene_path);
            report.note_input(sensor_path);
            const Scene scene = parse_scene(scene_path);
            const SensorSpec sensor = parse_sensor(sensor_path);
            const GridSpec grid{um_to_m(origin_um), um_to_m(e1_um), um_to_m(e2_um), n1, n2};
            const double p2p_sim = peak_to_peak(scan_image(scene, sensor, grid));
            const double m_s = estimate_moment(p2p_target, scene, sensor, grid);
            nlohmann::json j;
            j["m_s_muB_per_um"] = m_s;
            j["p2p_target_mPhi0"] = p2p_target;
            j["p2p_template_mPhi0"] = p2p_sim;
            std::cout << j.dump(2) << "\n";
            if (!out_path.empty()) {
                write_text_file(out_path, j.dump(2) + "\n");
                report.note_output(out_path);
            }
        } else if (erep->parsed() || ematch->parsed()) {
            MaterialTable mats = MaterialTable::defaults();
            if (!lattice_path.empty()) {
                report.note_input(lattice_path);
                mats = parse_material_overrides(lattice_path);
            }
            nlohmann::json j;
            if (erep->parsed()) {
                const MatchReport rep = interface_report(pair_name, mats);
                print_match_table(rep.entries);
                j["pair"] = rep.pair;
                auto entries = nlohmann::json::array();
                for (const auto& e : rep.entries) {
                    auto je = match_json(e.match);
                    je["label"] = e.label;
                    je["film"] = e.film;
                    je["sub"] = e.sub;
                    entries.push_back(je);
                }
                j["entries"] = entries;
            } else {
                const auto matches = search_matches(
                    mats.at(film_name), parse_direction(film_dir), mats.at(sub_name),
                    parse_direction(sub_dir), nmax,
                    {{parse_convention(film_conv), parse_convention(sub_conv)}});
                std::vector<MatchEntry> entries;
                for (std::size_t i = 0; i < matches.size() && i < 10; ++i)
                    entries.push_back({"rank" + std::to_string(i + 1), film_name, sub_name,
                                       matches[i]});
                print_match_table(entries);
                j["film"] = film_name;
                j["sub"] = sub_name;
                auto arr = nlohmann::json::array();
                for (const auto& e : entries) arr.push_back(match_json(e.match));
                j["matches"] = arr;
            }
            if (!out_path.empty()) {
                write_text_file(out_path, j.dump(2) + "\n");
                report.note_output(out_path);
            }
        } else if (val->parsed()) {
            MaterialTable mats = MaterialTable::defaults();
            if (!lattice_path.empty()) {
                report.note_input(lattice_path);
                mats = parse_material_overrides(lattice_path);
            }
            const auto results = run_validation(filter, mats);
            if (results.empty()) throw InvalidParameter("filter matches no suites");
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("%s %s: measured %.3e tolerance %.3e (%s)\n",
                            r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tolerance,
                            r.detail.c_str());
                report.checks.push_back({{"name", r.name},
                                         {"measured", r.measured},
                                         {"tolerance", r.tolerance},
                                         {"pass", r.pass}});
                all_pass = all_pass && r.pass;
            }
            if (!out_path.empty()) {
                write_text_file(out_path, report.checks.dump(2) + "\n");
                report.note_output(out_path);
            }
            if (!all_pass) exit_code = 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << report.json();
        return usage_error_code(e.code()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << report.json();
        return 3;
    }

    std::cout << report.json();
    return exit_code;
}
