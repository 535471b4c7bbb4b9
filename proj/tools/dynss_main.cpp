// dynss command-line driver: decompose | check-noiseless | simulate | gates.
// Data goes to files under --out; logs go to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dynss/config.hpp"
#include "dynss/decompose.hpp"
#include "dynss/encoded.hpp"
#include "dynss/errors.hpp"
#include "dynss/experiment.hpp"
#include "dynss/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dynss::ConfigError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dynss::Error("cannot write file: " + path.string());
    out << content;
}

std::string provenance_comment(const dynss::ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "# schema_version=1\n";
    out << "# tool_version=" << dynss::kToolVersion << "\n";
    out << "# config_hash=" << cfg.config_hash << "\n";
    out << "# seed=" << cfg.seed << "\n";
    return out.str();
}

json provenance_json(const dynss::ExperimentConfig& cfg) {
    json doc;
    doc["schema_version"] = 1;
    doc["tool_version"] = dynss::kToolVersion;
    doc["config_hash"] = cfg.config_hash;
    doc["seed"] = cfg.seed;
    return doc;
}

int run_decompose(const dynss::ExperimentConfig& cfg) {
    const dynss::DecouplingGroup group = dynss::group_from_config(cfg);
    const dynss::SubsystemDecomposition dec = dynss::decompose(group, 0xD5C0DE01ULL, cfg.policy);
    const dynss::DecompositionResiduals res = dynss::verify_decomposition(group, dec, cfg.policy);

    std::ostringstream out;
    out << provenance_comment(cfg);
    out << dynss::format_decomposition(dec);
    write_file(fs::path(cfg.out_dir) / "decomposition.txt", out.str());

    std::cerr << "decompose: |G|=" << group.order() << " blocks=" << dec.block_count()
              << " residuals=(" << res.group_structure << ", " << res.commutant_structure
              << ")\n";
    return 0;
}

int run_check_noiseless(const dynss::ExperimentConfig& cfg) {
    const dynss::DecouplingGroup group = dynss::group_from_config(cfg);
    const dynss::NoiseModel model = dynss::model_from_config(cfg);
    const dynss::SubsystemDecomposition dec = dynss::decompose(group, 0xD5C0DE01ULL, cfg.policy);
    const dynss::NoiselessnessReport report =
        dynss::classify_noiselessness(group, dec, model.error_ops, cfg.policy);

    json doc = provenance_json(cfg);
    doc["group"] = group.name;
    doc["noise_kind"] = cfg.noise_kind;
    doc["raw_errors_in_commutant"] = report.raw_errors_in_commutant;
    doc["raw_commutant_residual"] = report.raw_commutant_residual;
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        json row;
        row["block"] = v.block_id;
        row["factor"] = std::string(1, v.factor);
        row["noiseless"] = v.noiseless;
        row["reason"] = dynss::to_string(v.reason);
        row["residual"] = v.residual;
        verdicts.push_back(row);
    }
    doc["verdicts"] = verdicts;
    write_file(fs::path(cfg.out_dir) / "noiselessness.json", doc.dump(2) + "\n");

    std::cerr << "check-noiseless: " << report.verdicts.size() << " verdicts written\n";
    return 0;
}

void write_result(const dynss::ExperimentConfig& cfg, const dynss::ExperimentResult& result,
                  const std::string& stem) {
    const fs::path dir(cfg.out_dir);
    if (cfg.format == "csv")
        write_file(dir / (stem + ".csv"), dynss::format_result_csv(result));
    else
        write_file(dir / (stem + ".json"), dynss::format_result_json(result));

    json summary = provenance_json(cfg);
    summary["rows"] = result.rows.size();
    summary["coordinate"] = result.coordinate_name;
    if (!result.rows.empty()) {
        double fmin = result.rows.front().fidelity, fmax = fmin;
        for (const auto& r : result.rows) {
            fmin = std::min(fmin, r.fidelity);
            fmax = std::max(fmax, r.fidelity);
        }
        summary["fidelity_min"] = fmin;
        summary["fidelity_max"] = fmax;
    }
    summary["output"] = stem + "." + cfg.format;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
}

int run_simulate(const dynss::ExperimentConfig& cfg) {
    const dynss::DecouplingGroup group = dynss::group_from_config(cfg);
    const dynss::NoiseModel model = dynss::model_from_config(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.mode == "decoupling_sweep") {
        if (cfg.t_total <= 0) throw dynss::ConfigError("config: T_total required");
        if (cfg.t_cycles.empty()) throw dynss::ConfigError("config: T_c list required");
        const dynss::ScheduleFamily family = cfg.schedule == "uniform"
                                                 ? dynss::ScheduleFamily::uniform
                                                 : dynss::ScheduleFamily::flip;
        dynss::ExperimentResult result = dynss::decoupling_sweep(
            model, group, family, dynss::initial_state_from_config(cfg), cfg.t_total,
            cfg.t_cycles, /*strict_cycles=*/false, cfg.jobs, cfg.policy);
        result.config_hash = cfg.config_hash;
        write_result(cfg, result, "sweep");
    } else if (cfg.mode == "pulse_error") {
        if (cfg.t_cycle_single <= 0) throw dynss::ConfigError("config: scalar T_c required");
        if (cfg.epsilons.empty()) throw dynss::ConfigError("config: epsilon list required");
        dynss::CycleSchedule schedule =
            cfg.schedule == "uniform"
                ? dynss::uniform_group_schedule(group, cfg.t_cycle_single)
                : dynss::flip_cycle_schedule(cfg.model_n > 0 ? cfg.model_n : cfg.group_n,
                                             cfg.t_cycle_single);
        schedule.cycles = cfg.cycles > 0 ? cfg.cycles : 4;
        dynss::ExperimentResult result = dynss::pulse_error_experiment(
            model, group, schedule, dynss::error_generator_from_config(cfg), cfg.epsilons,
            cfg.policy);
        result.config_hash = cfg.config_hash;
        write_result(cfg, result, "pulse_error");
    } else {
        throw dynss::ConfigError("config: mode must be decoupling_sweep or pulse_error");
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "simulate: done in "
              << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    return 0;
}

int run_gates(const dynss::ExperimentConfig& cfg) {
    if (cfg.circuit_file.empty()) throw dynss::ConfigError("config: circuit_file required");
    const std::vector<dynss::GateStep> circuit = dynss::parse_circuit(read_file(cfg.circuit_file));
    const int n = cfg.model_n > 0 ? cfg.model_n : cfg.group_n;
    const dynss::LogicalFrame frame = dynss::build_logical_frame(n, 0);
    const dynss::NoiseModel model = dynss::model_from_config(cfg);

    std::vector<double> t_cycles = cfg.t_cycles;
    if (t_cycles.empty() && cfg.t_cycle_single > 0) t_cycles.push_back(cfg.t_cycle_single);
    if (t_cycles.empty()) throw dynss::ConfigError("config: T_c required");

    dynss::ExperimentResult result;
    result.seed = cfg.seed;
    result.config_hash = cfg.config_hash;
    for (double tc : t_cycles) {
        const dynss::EncodedCircuitResult r =
            dynss::run_encoded_circuit_under_decoupling(frame, circuit, model, tc, cfg.policy);
        dynss::ExperimentResult::Row row;
        row.coordinate = tc;
        row.fidelity = r.process_fidelity;
        row.baseline_fidelity = r.baseline_process_fidelity;
        row.cycles = r.total_cycles;
        result.rows.push_back(row);
    }
    write_result(cfg, result, "gates");
    std::cerr << "gates: " << result.rows.size() << " sweep points written\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynss: decoupling-group noiseless-subsystem toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, format, preset, group_file, noise;
    std::uint64_t seed = 0;
    int jobs = 0, n = 0, m = -1;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--jobs", jobs, "parallel sweep jobs");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--format", format, "csv or json");
        cmd->add_option("--preset", preset, "group preset name");
        cmd->add_option("--group-file", group_file, "group document path");
        cmd->add_option("--n", n, "qubit count for presets");
        cmd->add_option("--m", m, "bath qubit count");
        cmd->add_option("--noise", noise, "independent or collective");
    };

    CLI::App* cmd_decompose = app.add_subcommand("decompose", "isotypic block decomposition");
    CLI::App* cmd_check = app.add_subcommand("check-noiseless", "classify coding factors");
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "decoupling / pulse-error sweeps");
    CLI::App* cmd_gates = app.add_subcommand("gates", "encoded circuits under decoupling");
    for (CLI::App* c : {cmd_decompose, cmd_check, cmd_simulate, cmd_gates}) add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        dynss::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = dynss::parse_config_json(read_file(config_path));
        } else {
            cfg.command = app.get_subcommands().front()->get_name();
        }
        // Flags win over config file values.
        if (!preset.empty()) cfg.group_preset = preset;
        if (!group_file.empty()) cfg.group_file = read_file(group_file);
        if (n > 0) {
            cfg.group_n = n;
            cfg.model_n = n;
        }
        if (m >= 0) cfg.model_m = m;
        if (!noise.empty()) cfg.noise_kind = noise;
        if (seed_set) cfg.seed = seed;
        if (jobs > 0) cfg.jobs = jobs;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!format.empty()) cfg.format = format;
        const std::string subcommand = app.get_subcommands().front()->get_name();
        if (cfg.command != subcommand)
            throw dynss::ConfigError("config command '" + cfg.command +
                                     "' does not match subcommand '" + subcommand + "'");
        // Rehash after overrides so outputs identify the effective config.
        cfg.config_hash = dynss::canonical_config_hash(dynss::serialize_config(cfg));
        // Relative circuit paths resolve against the config file's directory
        // (after hashing, so the hash does not depend on where the tree sits).
        if (!cfg.circuit_file.empty() && !config_path.empty()) {
            const fs::path as_written(cfg.circuit_file);
            const fs::path beside_config = fs::path(config_path).parent_path() / as_written;
            if (as_written.is_relative() && fs::exists(beside_config))
                cfg.circuit_file = beside_config.string();
        }

        if (cfg.command == "decompose") return run_decompose(cfg);
        if (cfg.command == "check-noiseless") return run_check_noiseless(cfg);
        if (cfg.command == "simulate") return run_simulate(cfg);
        return run_gates(cfg);
    } catch (const dynss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dynss::DegeneracyError& e) {
        std::cerr << "degeneracy error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 4;
    }
}
