#include "corrbench/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace corrbench {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string canonical_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";  // nlohmann objects keep keys sorted
}

std::string plotdata_text(const std::vector<std::array<double, 3>>& rows) {
    std::string out = "# x y yerr\n";
    char line[96];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", r[0], r[1], r[2]);
        out += line;
    }
    return out;
}

int RunManifest::exit_code() const {
    if (failed > 0) return 1;
    if (inconclusive > 0) return 2;
    return 0;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = std::string(kToolVersion);
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["counts"] = {{"passed", passed}, {"failed", failed}, {"inconclusive", inconclusive}};
    j["payload"] = payload;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& [path, digest] : outputs)
        outs.push_back({{"path", path}, {"digest", digest}});
    j["outputs"] = outs;
    if (with_timing) {
        j["timing"] = {{"started_at", started_at},
                       {"finished_at", finished_at},
                       {"wall_seconds", wall_seconds}};
    }
    return j;
}

std::string now_rfc3339() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_output(RunManifest& manifest, const std::string& path, std::string_view text) {
    write_text_file(path, text);
    manifest.outputs.emplace_back(path, hex64(fnv1a64(text)));
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    write_text_file(path, canonical_json(manifest.to_json()));
}

std::vector<std::string> validate_report(const nlohmann::json& j) {
    std::vector<std::string> problems;
    auto need = [&](const char* key, bool ok) {
        if (!ok) problems.push_back(std::string("field '") + key + "' missing or mistyped");
    };
    if (!j.is_object()) {
        problems.push_back("report root is not an object");
        return problems;
    }
    need("schema_version", j.contains("schema_version") && j["schema_version"].is_number_integer());
    if (problems.empty() && j["schema_version"].get<int>() != kReportSchemaVersion)
        problems.push_back("unsupported schema_version");
    need("tool_version", j.contains("tool_version") && j["tool_version"].is_string());
    need("subcommand", j.contains("subcommand") && j["subcommand"].is_string());
    need("parameters", j.contains("parameters") && j["parameters"].is_object());
    need("payload", j.contains("payload"));
    if (j.contains("counts") && j["counts"].is_object()) {
        for (const char* key : {"passed", "failed", "inconclusive"}) {
            const auto& c = j["counts"];
            if (!c.contains(key) || !c[key].is_number_integer() || c[key].get<int>() < 0)
                problems.push_back(std::string("counts.") + key + " missing or negative");
        }
    } else {
        problems.push_back("field 'counts' missing or mistyped");
    }
    if (j.contains("outputs") && j["outputs"].is_array()) {
        for (const auto& o : j["outputs"])
            if (!o.is_object() || !o.contains("path") || !o.contains("digest"))
                problems.push_back("outputs entry lacks path/digest");
    } else {
        problems.push_back("field 'outputs' missing or mistyped");
    }
    if (j.contains("timing")) {
        if (!j["timing"].is_object() || !j["timing"].contains("wall_seconds"))
            problems.push_back("timing block malformed");
    }
    return problems;
}

}  // namespace corrbench
