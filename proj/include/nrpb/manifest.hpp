// manifest.hpp — provenance record written next to every CSV

#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nrpb {

inline constexpr const char* kToolVersion = "nrpb 1.0.0";
inline constexpr double kTruncationBound = 1e-4;

struct TruncationCheck {
    std::optional<double> delta;  // relative change of the probed observable
    std::string status;           // converged | unconverged | not_applicable
    nlohmann::json detail = nlohmann::json::object();
};

struct RunManifest {
    std::string config_hash;
    std::string tool_version{kToolVersion};
    std::string timestamp;
    double wall_clock_seconds{0.0};
    TruncationCheck truncation;
    nlohmann::json failures = nlohmann::json::array();
    nlohmann::json extra = nlohmann::json::object();  // run-specific echo (params, grid, ...)

    nlohmann::json to_json() const;
};

// SHA-256 (hex) of the compact dump of `config`. nlohmann objects keep keys
// sorted, so equal configurations hash equally regardless of input order.
std::string config_hash(const nlohmann::json& config);

// Current UTC time, ISO 8601 with seconds.
std::string utc_timestamp();

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

// Throws IoError when the file cannot be written.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& csv_path);

} // namespace nrpb
