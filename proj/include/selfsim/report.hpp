#pragma once

#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfsim/version.hpp"

namespace selfsim {

struct ReplicateRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;  // quarantine reason when !ok
    std::map<std::string, double> values;
};

struct ExperimentReport {
    std::map<std::string, std::string> config;
    std::map<std::string, std::uint64_t> seeds;
    std::vector<ReplicateRecord> replicates;
    std::map<std::string, double> aggregates;
    std::map<std::string, bool> verdicts;
    std::size_t succeeded = 0;
    std::size_t failed = 0;
    double wall_seconds = 0.0;

    bool all_passed() const {
        for (const auto& [name, ok] : verdicts)
            if (!ok) return false;
        return true;
    }
};

inline nlohmann::json replicate_to_json(const ReplicateRecord& r) {
    nlohmann::json j;
    j["index"] = r.index;
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    if (!r.ok) j["error"] = r.error;
    j["values"] = r.values;
    return j;
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = report.config;
    j["seeds"] = report.seeds;
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : report.replicates) reps.push_back(replicate_to_json(r));
    j["replicates"] = std::move(reps);
    j["aggregates"] = report.aggregates;
    j["verdicts"] = report.verdicts;
    j["counts"] = {{"succeeded", report.succeeded}, {"failed", report.failed}};
    j["wall_seconds"] = report.wall_seconds;
    return j;
}

inline void write_report_json(std::ostream& os, const ExperimentReport& report) {
    os << report_to_json(report).dump(2) << "\n";
}

inline void write_aggregates_csv(std::ostream& os, const ExperimentReport& report) {
    os << "key,value\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& [key, value] : report.aggregates) os << key << "," << value << "\n";
    for (const auto& [key, ok] : report.verdicts)
        os << "verdict_" << key << "," << (ok ? 1 : 0) << "\n";
}

}  // namespace selfsim
