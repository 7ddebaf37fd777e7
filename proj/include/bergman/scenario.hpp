#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "bergman/operators.hpp"

namespace bergman {

using ordered_json = nlohmann::ordered_json;

// Spec-string constructors.
// Weights:  "std:alpha=1", "logpow:alpha=-1,beta=-2", "exp:alpha=0.5,beta=1",
//           "osc", "file:<path>" (CSV rows r,w)
// Maps:     "blaschke:m=1;zeros=0.5,0.3+0.2i", "poly:0.5,0.5",
//           "affine:c0,c1", "recip:w=0.9;alpha=2"
// Measures: "warea:<weight-spec>", "area", "atoms:<file.csv>" (rows re,im,mass),
//           "density:<flat|ring|parabolic>"
Weight parse_weight(const std::string& spec);
AnalyticMap parse_map(const std::string& spec);
Measure parse_measure(const std::string& spec);
cplx parse_complex(std::string text);

// Profiles are memoized per weight spec within the process.
std::shared_ptr<const WeightProfile> profile_for(const Weight& w);
std::shared_ptr<const WeightProfile> profile_for(const std::string& weight_spec);

struct GridConfig {
    int J = 10;       // quadrature levels / a-grid depth
    int j0 = 7;       // first tail level for limsup estimates
    int oracle_N = 64;
    double r = 0.5;   // pseudo-hyperbolic radius
};

struct Scenario {
    std::string name;
    std::string weight_spec = "std:alpha=1";
    std::string u_spec = "poly:1";
    std::string phi_spec = "poly:0,1";
    std::string mu_spec;  // empty -> warea of the scenario weight
    double p = 2.0, q = 2.0;
    double gamma = -1.0;
    GridConfig grids;

    static Scenario from_json(const ordered_json& j);
    static Scenario load(const std::string& path);
    ordered_json to_json() const;

    OperatorSpec build() const;
};

// Canonical run configuration echoed into every report.
struct RunConfig {
    std::string command;
    std::string kind;
    std::string target;  // weight spec / scenario path / suite name
    GridConfig grids;
    double gamma = -1.0;
    std::optional<std::pair<double, double>> bracket;
    std::string out_dir;

    ordered_json canonical() const;
};

ordered_json report_to_json(const FunctionalReport& rep, const RunConfig& cfg);

// Atomic file output (temp + rename).
void write_text_atomic(const std::string& path, const std::string& content);
void write_json_atomic(const std::string& path, const ordered_json& j);

// Plot-ready CSV: one row per level, "index,value".
std::string levels_csv(const FunctionalReport& rep);

}  // namespace bergman
