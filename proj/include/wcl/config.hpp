#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcl/correlation.hpp"
#include "wcl/dyson.hpp"
#include "wcl/system_model.hpp"

namespace wcl {

inline constexpr const char* kVersion = "wcl 1.0.0";

/// A parsed experiment configuration. Complex numbers are [re, im] pairs and
/// matrices row-major arrays of pairs; see README for the schema.
struct ExperimentConfig {
    SystemModel system;
    CorrelationModel correlation;
    std::vector<SmearedAmplitude> amplitudes;
    std::string experiment;  // moments | dyson-sweep | bounds | coefficients |
                             // simulate | ito-audit
    // experiment parameters (defaulted per experiment)
    double t = 1.0;
    double dt = 0.01;
    int n_max = 0;
    std::vector<double> lambdas{1.0, 0.5, 0.25, 0.125};
    unsigned seed = 1;
    std::string observable = "sigma_z";
    std::string noise = "vacuum";
    bool polar_repair = false;
    CVector phi1, phi2;
    std::string output_directory = "out";
    std::vector<std::string> formats{"csv", "json"};

    std::string canonical_text;  // normalized config serialization, hashed
};

struct CliOverrides {
    std::optional<double> t;
    std::optional<double> dt;
    std::optional<int> n_max;
    std::vector<double> lambdas;
    std::optional<std::string> out;
    std::optional<std::string> experiment;
};

/// Parses and validates a config file; throws ValidationError naming the
/// offending field.
ExperimentConfig load_config(const std::string& path, const CliOverrides& overrides = {});

/// Built-in qubit-damping demo configuration (used when no config is given).
ExperimentConfig default_config(const CliOverrides& overrides = {});

/// Runs the configured experiment, writing CSV/JSON artifacts plus a manifest
/// into the output directory. Returns 0 iff all internal checks passed.
int run_experiment(const ExperimentConfig& config);

/// FNV-1a 64-bit hash, used for the config provenance stamp.
std::uint64_t fnv1a_hash(const std::string& text);

/// 17-significant-digit formatting used by every artifact writer.
std::string format_number(double value);

}  // namespace wcl
