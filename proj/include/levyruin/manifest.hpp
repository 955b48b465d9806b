#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace levyruin {

#ifndef LEVYRUIN_VERSION
#define LEVYRUIN_VERSION "0.0.0"
#endif

inline constexpr const char* version = LEVYRUIN_VERSION;

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a64_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

/// Everything needed to rerun a command: subcommand, resolved parameters,
/// seed, tool version and the digest of the model text.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string model_source;
    std::string model_text;
    nlohmann::ordered_json outputs = nlohmann::ordered_json::array();

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["tool"] = "levyruin";
        j["version"] = version;
        j["subcommand"] = subcommand;
        j["parameters"] = parameters;
        if (has_seed) j["seed"] = seed;
        j["model_source"] = model_source;
        j["model_digest"] = "fnv1a64:" + fnv1a64_hex(model_text);
        j["model"] = model_text;
        j["outputs"] = outputs;
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
        out << to_json().dump(2) << '\n';
    }
};

}  // namespace levyruin
