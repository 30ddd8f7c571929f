#pragma once

// Run driver behind the command-line tool. A RunConfig names one of five
// commands and its parameters; run(cfg) executes it, writes every artifact
// into cfg.out_dir, and finishes with a manifest.json hashing each file.
// Outputs are deterministic functions of (config, seed).

#include "resist/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace resist {

struct RunConfig {
    std::string command;              // solve-radial | solve-2d | stretch | verify | probe
    std::string law = "classical";    // classical | area | path to a tabulated-law JSON
    double M = 1.0;                   // height bound
    double L = 1.0;                   // radial domain radius
    int N = 2000;                     // radial cell count
    std::string omega = "disc:1:48";  // "disc:R:nSides" or "poly:x1,y1;x2,y2;..."
    double h = 0.06;                  // target 2-D mesh spacing
    int starts = 0;                   // multistart count, 0 keeps the solver default
    std::string body = "cube";        // "cube", a mesh path, or for probe "cap" / a field base path
    std::string apex = "0.5,0.5,1.75";
    std::string s_grid = "0:0.1:1";   // "a:step:b", endpoints included
    std::string suite = "appendix";   // appendix | measures | solver
    std::string x0 = "0.3,0";         // probe location
    std::vector<double> taus = {1.0, 0.1, 0.03, 0.01};
    double support_radius = 0.12;
    double delta = 0.05;              // forbidden-band parameter for slope reports
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
};

// Seed fallback: RESIST_SEED from the environment when set, else 12345.
std::uint64_t default_seed();

// Strict JSON loader: keys mirror the RunConfig field names; any unknown key
// is a ConfigError. Values given on the command line override these.
RunConfig config_from_json_text(const std::string& json_text);

std::vector<double> parse_grid(const std::string& spec);  // "a:step:b" inclusive
std::vector<Vec2> parse_omega(const std::string& spec);
Vec2 parse_vec2(const std::string& spec);
Vec3 parse_vec3(const std::string& spec);

// Throws ConfigError on out-of-range or malformed fields.
void validate_config(const RunConfig& cfg);

// Returns the process exit status: 0 on success, 1 when a requested
// verification misses its threshold. Malformed configs throw ConfigError.
int run(const RunConfig& cfg);

}  // namespace resist
