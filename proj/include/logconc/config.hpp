#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logconc/grid_measure.hpp"

namespace logconc {

// Batch-run description. Parsed from a JSON document; measures are defined
// once and referenced by name.
struct RunConfig {
    GridRequest grid;
    std::vector<std::pair<std::string, MeasureSpec>> measures;  // insertion order
    std::vector<std::string> suites;
    std::vector<std::pair<std::string, std::string>> references;  // (nu, mu) names
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv"};
    std::uint64_t seed = 1;
    double slack = 0.02;
};

const std::vector<std::string>& known_suites();

// Compact one-line measure grammar used by CLI verbs:
//   gaussian(mean,sd) | exponential(scale) | uniform(a,b)
//   | mixture(w1,m1,s1,w2,m2,s2,...) | radial(n,scale)
MeasureSpec parse_measure_spec(const std::string& text, const GridRequest& grid);

// Parses and cross-checks a config document, collecting every error into one
// ConfigError message rather than stopping at the first.
RunConfig parse_config_text(const std::string& text);
RunConfig validate_config(const std::string& path);

}  // namespace logconc
