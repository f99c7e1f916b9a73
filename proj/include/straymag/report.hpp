#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "straymag/csv.hpp"

namespace straymag {

// Machine-readable record of one CLI invocation: the command, fingerprints of
// the inputs it read, the files it wrote, and any validation outcomes.
// Printed to stdout as JSON; wall_time_s is the only field that varies
// between identical runs.
struct RunReport {
    std::vector<std::string> command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, fnv1a64 hex
    std::vector<std::string> outputs;
    nlohmann::json checks = nlohmann::json::array();
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void note_input(const std::string& path) {
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(read_text_file(path))));
        inputs.emplace_back(path, hex);
    }

    void note_output(const std::string& path) { outputs.push_back(path); }

    std::string json() const {
        nlohmann::json j;
        j["command"] = command;
        auto in = nlohmann::json::array();
        for (const auto& [path, digest] : inputs)
            in.push_back({{"path", path}, {"fnv1a64", digest}});
        j["inputs"] = in;
        j["outputs"] = outputs;
        if (!checks.empty()) j["checks"] = checks;
        const auto elapsed = std::chrono::steady_clock::now() - started;
        j["wall_time_s"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        return j.dump(2) + "\n";
    }
};

}  // namespace straymag
