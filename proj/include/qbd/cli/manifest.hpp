#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbd::cli {

/// FNV-1a 64-bit digest of a file's bytes (content indexing, not crypto).
std::uint64_t fnv1a64_file(const std::string& path);

/// Per-run record: config snapshot, version, seeds, timing, diagnostics and
/// an index of every output file with its content digest. A run is
/// reproducible byte-for-byte from config + seed + version.
class Manifest {
public:
    Manifest(std::string command, nlohmann::ordered_json config_snapshot, std::uint64_t seed);

    void add_output(const std::string& path);
    void add_check(const std::string& name, bool passed, double value, double threshold);
    void set_diagnostic(const std::string& key, const nlohmann::ordered_json& value);
    void set_elapsed(double seconds);

    bool all_passed() const;
    void write(const std::string& path) const;

private:
    nlohmann::ordered_json doc_;
};

} // namespace qbd::cli
