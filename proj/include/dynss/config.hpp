#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynss/encoded.hpp"
#include "dynss/group.hpp"
#include "dynss/noise.hpp"
#include "dynss/numeric_policy.hpp"

namespace dynss {

// Schema-validated experiment description. Unknown keys are rejected; the
// canonical content digest is embedded in every output file.
struct ExperimentConfig {
    int schema_version = 1;
    std::string command;  // decompose | check-noiseless | simulate | gates

    // group selection: a preset with qubit count, or an external group file
    std::string group_preset;
    int group_n = 0;
    std::string group_file;

    // noise model
    int model_n = 0;
    int model_m = 0;
    std::string noise_kind = "independent";  // independent | collective
    double lambda = 0.1;
    std::uint64_t seed = 0;
    bool bath_exchange = false;

    // simulate
    std::string mode = "decoupling_sweep";  // decoupling_sweep | pulse_error
    std::string schedule = "flip";          // flip | uniform
    std::string initial_state = "codeword"; // codeword | zero | plus
    double t_total = 0.0;
    std::vector<double> t_cycles;
    double t_cycle_single = 0.0;  // pulse_error / gates
    int cycles = 0;               // pulse_error
    std::string error_generator = "group_xz";  // group_xz | x_on_first
    std::vector<double> epsilons;

    // gates
    std::string circuit_file;

    // runtime
    int jobs = 1;
    std::string out_dir = "results";
    std::string format = "csv";  // csv | json

    // optional numeric-policy overrides ("tolerances" object)
    NumericPolicy policy;
    bool tolerances_set = false;

    std::string config_hash;  // filled by the parser
};

// Parse + validate a JSON config document. Throws ConfigError on schema
// violations (unknown keys, wrong types, missing required fields).
ExperimentConfig parse_config_json(const std::string& json_text);

// FNV-1a digest of the canonicalized (sorted-key) JSON document.
std::string canonical_config_hash(const std::string& json_text);

// Re-serialize the effective config (after flag overrides) canonically and
// hash it.
std::string serialize_config(const ExperimentConfig& config);

// Materialize the configured group / model / initial state.
DecouplingGroup group_from_config(const ExperimentConfig& config);
NoiseModel model_from_config(const ExperimentConfig& config);
Vector initial_state_from_config(const ExperimentConfig& config);
Matrix error_generator_from_config(const ExperimentConfig& config);

// Circuit text format: one gate per line, "x_rot j angle [duration]",
// "z_rot j angle [duration]", "exchange i j angle [duration]"; '#' comments.
std::vector<GateStep> parse_circuit(const std::string& text);
std::string format_circuit(const std::vector<GateStep>& circuit);

}  // namespace dynss
