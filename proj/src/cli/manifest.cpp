#include "qbd/cli/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qbd::cli {

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

Manifest::Manifest(std::string command, nlohmann::ordered_json config_snapshot,
                   std::uint64_t seed) {
    doc_["tool"] = "qbd";
    doc_["version"] = "0.1.0";
    doc_["command"] = std::move(command);
    doc_["seed"] = seed;
    doc_["config"] = std::move(config_snapshot);
    doc_["elapsed_seconds"] = 0.0;
    doc_["checks"] = nlohmann::ordered_json::array();
    doc_["diagnostics"] = nlohmann::ordered_json::object();
    doc_["outputs"] = nlohmann::ordered_json::array();
}

void Manifest::add_output(const std::string& path) {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    if (!probe) throw std::runtime_error("manifest: missing output " + path);
    const auto bytes = static_cast<std::uint64_t>(probe.tellg());
    probe.close();
    std::ostringstream digest;
    digest << "fnv1a64:" << std::hex << fnv1a64_file(path);
    doc_["outputs"].push_back(
        {{"path", path}, {"digest", digest.str()}, {"bytes", bytes}});
}

void Manifest::add_check(const std::string& name, bool passed, double value,
                         double threshold) {
    doc_["checks"].push_back({{"name", name},
                              {"passed", passed},
                              {"value", value},
                              {"threshold", threshold}});
}

void Manifest::set_diagnostic(const std::string& key, const nlohmann::ordered_json& value) {
    doc_["diagnostics"][key] = value;
}

void Manifest::set_elapsed(double seconds) { doc_["elapsed_seconds"] = seconds; }

bool Manifest::all_passed() const {
    for (const auto& c : doc_["checks"])
        if (!c.at("passed").get<bool>()) return false;
    return true;
}

void Manifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("manifest: cannot write " + path);
    out << doc_.dump(2) << "\n";
}

} // namespace qbd::cli
