#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

namespace reflexa {

/// One verified statement: the check name, the mathematical law it anchors
/// to, the outcome, and an optional serialized counterexample.
struct CheckRecord {
    std::string name;
    std::string anchor;
    std::string status;  // "pass" | "fail" | "unknown"
    std::string witness;
    std::string reproduce;  // command line that reruns a failing check
    double seconds = 0.0;   // informational; excluded from stable output
};

struct Report {
    std::vector<CheckRecord> records;
    std::uint64_t seed = 0;

    bool all_passed() const {
        for (const auto& r : records)
            if (r.status != "pass") return false;
        return true;
    }

    int exit_code() const { return all_passed() ? 0 : 1; }
};

/// Timing is included only when REFLEXA_TIMINGS=1 so that default output is
/// byte-stable across runs.
inline bool report_timings_enabled() {
    const char* e = std::getenv("REFLEXA_TIMINGS");
    return e && std::string(e) == "1";
}

inline std::string emit_report(const Report& rep, const std::string& format) {
    const bool timings = report_timings_enabled();
    if (format == "json") {
        nlohmann::ordered_json j;
        j["seed"] = rep.seed;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& r : rep.records) {
            nlohmann::ordered_json c;
            c["name"] = r.name;
            c["anchor"] = r.anchor;
            c["status"] = r.status;
            if (!r.witness.empty()) c["witness"] = r.witness;
            if (!r.reproduce.empty()) c["reproduce"] = r.reproduce;
            if (timings) c["seconds"] = r.seconds;
            j["checks"].push_back(std::move(c));
        }
        j["all_passed"] = rep.all_passed();
        return j.dump(2) + "\n";
    }
    if (format != "text") throw std::invalid_argument("emit_report: unknown format " + format);
    std::string out = "seed: " + std::to_string(rep.seed) + "\n";
    if (rep.records.empty()) return out + "0 checks\n";
    for (const auto& r : rep.records) {
        out += "[" + r.status + "] " + r.name + "  (" + r.anchor + ")";
        if (timings) out += "  " + std::to_string(r.seconds) + "s";
        out += "\n";
        if (!r.witness.empty()) out += "    witness: " + r.witness + "\n";
        if (!r.reproduce.empty()) out += "    reproduce: " + r.reproduce + "\n";
    }
    out += std::to_string(rep.records.size()) + " checks, " +
           (rep.all_passed() ? std::string("all passed") : std::string("FAILURES PRESENT")) +
           "\n";
    return out;
}

}  // namespace reflexa
