#include "nrpb/manifest.hpp"

#include "nrpb/sweep.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace nrpb {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["tool_version"] = tool_version;
    j["timestamp"] = timestamp;
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["truncation"] = {
        {"delta", truncation.delta ? nlohmann::json(*truncation.delta) : nlohmann::json(nullptr)},
        {"bound", kTruncationBound},
        {"status", truncation.status},
        {"detail", truncation.detail},
    };
    j["failures"] = failures;
    j["run"] = extra;
    return j;
}

std::string config_hash(const nlohmann::json& config) {
    const std::string text = config.dump();
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("config_hash: SHA-256 failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        std::array<char, 3> buf{};
        std::snprintf(buf.data(), buf.size(), "%02x", digest[i]);
        hex += buf.data();
    }
    return hex;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
    return std::filesystem::path(csv_path.string() + ".manifest.json");
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& csv_path) {
    const auto path = manifest_path_for(csv_path);
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write manifest '" + path.string() + "'");
    }
    out << manifest.to_json().dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing manifest '" + path.string() + "'");
    }
}

} // namespace nrpb
