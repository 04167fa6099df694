#pragma once

// File formats and experiment manifests.
//
// Rank-distribution files are JSON objects
//   { "schema": "mmc.rankdist/1", "q": int, "max_rank": int,
//     "probs": [floats], "meta": { ... } }
// whose probs must sum to 1 within 1e-6 (renormalized on load).
//
// Every command that writes an output file also writes <out>.manifest.json
// recording the command, its full parameter set, the seed, the tool version,
// a timestamp, and an FNV-1a 64 digest of each output, which is enough to
// re-run the command and verify byte-identical outputs.

#include "mmc/rank_distribution.hpp"
#include "mmc/version.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmc {

inline constexpr const char* kRankDistSchema = "mmc.rankdist/1";
inline constexpr const char* kManifestSchema = "mmc.manifest/1";
inline constexpr const char* kSweepCsvSchema = "mmc.sweep-csv/1";
inline constexpr const char* kCapacityReportSchema = "mmc.capacity-report/1";
inline constexpr const char* kOracleReportSchema = "mmc.oracle-report/1";

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << bytes;
    if (!out) throw std::runtime_error("short write to " + path);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// Shortest round-trip decimal form of a double (CSV cells, stable bytes).
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

struct RankDistFile {
    std::int64_t q = 0;
    RankDistribution dist{std::vector<double>{1.0}};
    nlohmann::json meta;
};

inline std::string rank_distribution_bytes(std::int64_t q, const RankDistribution& dist,
                                           const nlohmann::json& meta = nlohmann::json::object()) {
    nlohmann::json j;
    j["schema"] = kRankDistSchema;
    j["q"] = q;
    j["max_rank"] = dist.max_rank();
    j["probs"] = dist.probs();
    j["meta"] = meta;
    return j.dump(2) + "\n";
}

inline void save_rank_distribution(const std::string& path, std::int64_t q,
                                   const RankDistribution& dist,
                                   const nlohmann::json& meta = nlohmann::json::object()) {
    write_file(path, rank_distribution_bytes(q, dist, meta));
}

inline RankDistFile load_rank_distribution(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    if (j.value("schema", std::string()) != kRankDistSchema)
        throw std::runtime_error(path + ": unknown rank-distribution schema");
    RankDistFile file;
    file.q = j.at("q").get<std::int64_t>();
    auto probs = j.at("probs").get<std::vector<double>>();
    if (static_cast<std::int64_t>(probs.size()) != j.at("max_rank").get<std::int64_t>() + 1)
        throw std::runtime_error(path + ": probs length disagrees with max_rank");
    file.dist = RankDistribution(std::move(probs));
    file.meta = j.value("meta", nlohmann::json::object());
    return file;
}

struct OutputRecord {
    std::string path;
    std::uint64_t bytes;
    std::string fnv1a64;
};

inline nlohmann::json make_manifest(const std::string& command, const nlohmann::json& params,
                                    const std::vector<OutputRecord>& outputs) {
    nlohmann::json j;
    j["schema"] = kManifestSchema;
    j["tool"] = "mmc";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["params"] = params;
    const auto now = std::chrono::system_clock::now();
    j["created_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    j["outputs"] = nlohmann::json::array();
    for (const auto& rec : outputs)
        j["outputs"].push_back({{"path", rec.path}, {"bytes", rec.bytes}, {"fnv1a64", rec.fnv1a64}});
    return j;
}

inline OutputRecord record_output(const std::string& path, const std::string& bytes) {
    return {path, bytes.size(), fnv1a64_hex(bytes)};
}

inline std::string manifest_path_for(const std::string& out_path) {
    return out_path + ".manifest.json";
}

inline void write_manifest(const std::string& out_path, const std::string& command,
                           const nlohmann::json& params,
                           const std::vector<OutputRecord>& outputs) {
    write_file(manifest_path_for(out_path), make_manifest(command, params, outputs).dump(2) + "\n");
}

} // namespace mmc
