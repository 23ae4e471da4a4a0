#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tslab/profiles.hpp"

namespace tslab {

// Runtime configuration: the active profile, registry location, resource
// caps and the seed that fixes every randomized run.  Round-trips through a
// line-oriented "key = value" text format with [profile NAME] sections for
// user-defined mini profiles.
struct Config {
    std::string profile = "mini";
    std::string registry_path;
    std::string output_dir = ".";
    long enum_cap = 200000;
    int depth_cap = 3;
    long time_budget_s = 120;
    std::uint64_t seed = 1234;
    bool allow_alloc = false;

    struct MiniSpec {
        std::vector<BigInt> m, n;
        std::vector<int> s;
        std::vector<std::string> waived;
    };
    std::map<std::string, MiniSpec> custom_profiles;

    std::string str() const;
    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    void save(const std::string& path) const;

    // Resolves a profile by name: custom profiles first, then the builtin
    // catalog.  The WORKBENCH_PROFILE environment variable overrides the
    // configured active profile.
    ParameterProfile resolve_profile() const;
    ParameterProfile resolve_profile(const std::string& name) const;

    void validate() const;
};

// Builtin catalog: "paper", "mini", "micro", "attr16", "game".
ParameterProfile builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();

}  // namespace tslab
