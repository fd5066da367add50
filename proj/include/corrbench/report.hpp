#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace corrbench {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Canonical text form: sorted keys, two-space indent, trailing newline.
// Equal JSON values always serialize to identical bytes.
std::string canonical_json(const nlohmann::json& j);

// Three whitespace-separated columns per row, for external plotting.
std::string plotdata_text(const std::vector<std::array<double, 3>>& rows);

// Everything a run leaves behind: parameters, outcome counts, the
// suite-specific payload, and digests of any side files written. The timing
// block is the only part that varies between identical runs and is dropped
// when `with_timing` is off.
struct RunManifest {
    std::string subcommand;
    nlohmann::json parameters;
    int passed = 0;
    int failed = 0;
    int inconclusive = 0;
    nlohmann::json payload;
    std::vector<std::pair<std::string, std::string>> outputs;
    bool with_timing = true;
    std::string started_at;
    std::string finished_at;
    double wall_seconds = 0.0;

    int exit_code() const;
    nlohmann::json to_json() const;
};

std::string now_rfc3339();

void write_text_file(const std::string& path, std::string_view text);

// Writes the side file and records its digest in the manifest.
void emit_output(RunManifest& manifest, const std::string& path, std::string_view text);

void write_manifest(const RunManifest& manifest, const std::string& path);

// Structural check of an emitted manifest; returns problems, empty when valid.
std::vector<std::string> validate_report(const nlohmann::json& j);

}  // namespace corrbench
