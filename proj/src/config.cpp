#include "dynss/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>
#include <sstream>

#include "dynss/errors.hpp"
#include "dynss/pauli.hpp"

namespace dynss {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

}  // namespace

std::string canonical_config_hash(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    // nlohmann objects iterate in sorted key order, so dump() is canonical.
    return hex64(fnv1a(doc.dump()));
}

ExperimentConfig parse_config_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");

    reject_unknown_keys(doc,
                        {"schema_version", "command", "group", "model", "mode", "schedule",
                         "initial_state", "T_total", "T_c", "cycles", "error_generator",
                         "epsilon", "circuit_file", "jobs", "out", "format", "seed",
                         "tolerances"},
                        "top level");

    ExperimentConfig cfg;
    try {
        cfg.schema_version = doc.at("schema_version").get<int>();
        if (cfg.schema_version != 1)
            throw ConfigError("config: unsupported schema_version");
        cfg.command = doc.at("command").get<std::string>();

        if (doc.contains("group")) {
            const json& g = doc["group"];
            reject_unknown_keys(g, {"preset", "n", "file"}, "group");
            if (g.contains("preset")) cfg.group_preset = g["preset"].get<std::string>();
            if (g.contains("n")) cfg.group_n = g["n"].get<int>();
            if (g.contains("file")) cfg.group_file = g["file"].get<std::string>();
        }
        if (doc.contains("model")) {
            const json& m = doc["model"];
            reject_unknown_keys(m, {"n", "m", "kind", "lambda", "seed", "bath_exchange"},
                                "model");
            if (m.contains("n")) cfg.model_n = m["n"].get<int>();
            if (m.contains("m")) cfg.model_m = m["m"].get<int>();
            if (m.contains("kind")) cfg.noise_kind = m["kind"].get<std::string>();
            if (m.contains("lambda")) cfg.lambda = m["lambda"].get<double>();
            if (m.contains("seed")) cfg.seed = m["seed"].get<std::uint64_t>();
            if (m.contains("bath_exchange")) cfg.bath_exchange = m["bath_exchange"].get<bool>();
        }
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mode")) cfg.mode = doc["mode"].get<std::string>();
        if (doc.contains("schedule")) cfg.schedule = doc["schedule"].get<std::string>();
        if (doc.contains("initial_state"))
            cfg.initial_state = doc["initial_state"].get<std::string>();
        if (doc.contains("T_total")) cfg.t_total = doc["T_total"].get<double>();
        if (doc.contains("T_c")) {
            const json& tc = doc["T_c"];
            if (tc.is_array())
                for (const auto& v : tc) cfg.t_cycles.push_back(v.get<double>());
            else
                cfg.t_cycle_single = tc.get<double>();
        }
        if (doc.contains("cycles")) cfg.cycles = doc["cycles"].get<int>();
        if (doc.contains("error_generator"))
            cfg.error_generator = doc["error_generator"].get<std::string>();
        if (doc.contains("epsilon")) {
            const json& eps = doc["epsilon"];
            if (eps.is_array())
                for (const auto& v : eps) cfg.epsilons.push_back(v.get<double>());
            else
                cfg.epsilons.push_back(eps.get<double>());
        }
        if (doc.contains("circuit_file")) cfg.circuit_file = doc["circuit_file"].get<std::string>();
        if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
        if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
        if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
        if (doc.contains("tolerances")) {
            const json& tol = doc["tolerances"];
            reject_unknown_keys(tol,
                                {"svd_rel_cutoff", "hermiticity_tol", "unitarity_tol",
                                 "element_match_tol", "eigenvalue_gap_tol", "center_overlap_tol",
                                 "block_residual_tol", "degeneracy_retries"},
                                "tolerances");
            cfg.tolerances_set = true;
            if (tol.contains("svd_rel_cutoff"))
                cfg.policy.svd_rel_cutoff = tol["svd_rel_cutoff"].get<double>();
            if (tol.contains("hermiticity_tol"))
                cfg.policy.hermiticity_tol = tol["hermiticity_tol"].get<double>();
            if (tol.contains("unitarity_tol"))
                cfg.policy.unitarity_tol = tol["unitarity_tol"].get<double>();
            if (tol.contains("element_match_tol"))
                cfg.policy.element_match_tol = tol["element_match_tol"].get<double>();
            if (tol.contains("eigenvalue_gap_tol"))
                cfg.policy.eigenvalue_gap_tol = tol["eigenvalue_gap_tol"].get<double>();
            if (tol.contains("center_overlap_tol"))
                cfg.policy.center_overlap_tol = tol["center_overlap_tol"].get<double>();
            if (tol.contains("block_residual_tol"))
                cfg.policy.block_residual_tol = tol["block_residual_tol"].get<double>();
            if (tol.contains("degeneracy_retries"))
                cfg.policy.degeneracy_retries = tol["degeneracy_retries"].get<int>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    static const std::set<std::string> commands = {"decompose", "check-noiseless", "simulate",
                                                   "gates"};
    if (!commands.count(cfg.command)) throw ConfigError("config: unknown command " + cfg.command);
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("config: format must be csv or json");
    if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");

    cfg.config_hash = canonical_config_hash(json_text);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json doc;
    doc["schema_version"] = cfg.schema_version;
    doc["command"] = cfg.command;
    if (!cfg.group_preset.empty() || !cfg.group_file.empty()) {
        json g;
        if (!cfg.group_preset.empty()) {
            g["preset"] = cfg.group_preset;
            g["n"] = cfg.group_n;
        }
        if (!cfg.group_file.empty()) g["file"] = cfg.group_file;
        doc["group"] = g;
    }
    if (cfg.model_n > 0) {
        doc["model"] = {{"n", cfg.model_n},       {"m", cfg.model_m},
                        {"kind", cfg.noise_kind}, {"lambda", cfg.lambda},
                        {"seed", cfg.seed},       {"bath_exchange", cfg.bath_exchange}};
    }
    if (cfg.command == "simulate") {
        doc["mode"] = cfg.mode;
        doc["schedule"] = cfg.schedule;
        doc["initial_state"] = cfg.initial_state;
        if (cfg.t_total > 0) doc["T_total"] = cfg.t_total;
        if (!cfg.t_cycles.empty()) doc["T_c"] = cfg.t_cycles;
        if (cfg.t_cycle_single > 0) doc["T_c"] = cfg.t_cycle_single;
        if (cfg.cycles > 0) doc["cycles"] = cfg.cycles;
        if (!cfg.epsilons.empty()) {
            doc["error_generator"] = cfg.error_generator;
            doc["epsilon"] = cfg.epsilons;
        }
    }
    if (cfg.command == "gates") {
        doc["circuit_file"] = cfg.circuit_file;
        if (!cfg.t_cycles.empty()) doc["T_c"] = cfg.t_cycles;
        if (cfg.t_cycle_single > 0) doc["T_c"] = cfg.t_cycle_single;
    }
    if (cfg.tolerances_set) {
        doc["tolerances"] = {{"svd_rel_cutoff", cfg.policy.svd_rel_cutoff},
                             {"hermiticity_tol", cfg.policy.hermiticity_tol},
                             {"unitarity_tol", cfg.policy.unitarity_tol},
                             {"element_match_tol", cfg.policy.element_match_tol},
                             {"eigenvalue_gap_tol", cfg.policy.eigenvalue_gap_tol},
                             {"center_overlap_tol", cfg.policy.center_overlap_tol},
                             {"block_residual_tol", cfg.policy.block_residual_tol},
                             {"degeneracy_retries", cfg.policy.degeneracy_retries}};
    }
    // Runtime details (out dir, jobs, format) identify no experiment content
    // and stay out of the canonical form, so the hash survives relocation.
    return doc.dump(2) + "\n";
}

DecouplingGroup group_from_config(const ExperimentConfig& cfg) {
    if (!cfg.group_file.empty()) {
        // The file field carries the document text by the time we get here.
        return parse_group_spec(cfg.group_file);
    }
    if (cfg.group_preset.empty()) throw ConfigError("config: no group specified");
    if (cfg.group_n < 1) throw ConfigError("config: group n must be >= 1");
    return make_preset_group(cfg.group_preset, cfg.group_n);
}

NoiseModel model_from_config(const ExperimentConfig& cfg) {
    CouplingKind kind;
    if (cfg.noise_kind == "independent")
        kind = CouplingKind::independent;
    else if (cfg.noise_kind == "collective")
        kind = CouplingKind::collective;
    else
        throw ConfigError("config: noise kind must be independent or collective");
    const int n = cfg.model_n > 0 ? cfg.model_n : cfg.group_n;
    return make_noise_model(n, cfg.model_m, kind, cfg.lambda, cfg.seed, cfg.bath_exchange);
}

Vector initial_state_from_config(const ExperimentConfig& cfg) {
    const int n = cfg.model_n > 0 ? cfg.model_n : cfg.group_n;
    const int d = 1 << n;
    if (cfg.initial_state == "codeword") return flip_codeword_state(n, 0);
    if (cfg.initial_state == "zero") return basis_state(d, 0);
    if (cfg.initial_state == "plus") {
        Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
        return v;
    }
    throw ConfigError("config: initial_state must be codeword, zero or plus");
}

Matrix error_generator_from_config(const ExperimentConfig& cfg) {
    const int n = cfg.model_n > 0 ? cfg.model_n : cfg.group_n;
    const std::uint64_t all = (1ULL << n) - 1;
    if (cfg.error_generator == "group_xz")
        return PauliString(n, all, 0, 0).materialize() + PauliString(n, 0, all, 0).materialize();
    if (cfg.error_generator == "x_on_first") return pauli_on_site(n, 0, 0);
    throw ConfigError("config: error_generator must be group_xz or x_on_first");
}

std::vector<GateStep> parse_circuit(const std::string& text) {
    std::vector<GateStep> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        GateStep step;
        auto fail = [&](const char* what) {
            throw ConfigError("circuit line " + std::to_string(lineno) + ": " + what);
        };
        if (kind == "x_rot" || kind == "z_rot") {
            step.kind = kind == "x_rot" ? GateKind::x_rot : GateKind::z_rot;
            if (!(ls >> step.a >> step.angle)) fail("expected '<j> <angle>'");
        } else if (kind == "exchange") {
            step.kind = GateKind::exchange;
            if (!(ls >> step.a >> step.b >> step.angle)) fail("expected '<i> <j> <angle>'");
        } else {
            fail("unknown gate kind");
        }
        double duration;
        if (ls >> duration) step.duration = duration;
        std::string extra;
        if (ls >> extra) fail("trailing tokens");
        out.push_back(step);
    }
    return out;
}

std::string format_circuit(const std::vector<GateStep>& circuit) {
    std::ostringstream out;
    char buf[80];
    for (const auto& s : circuit) {
        switch (s.kind) {
            case GateKind::x_rot:
                std::snprintf(buf, sizeof buf, "x_rot %d %.17g", s.a, s.angle);
                break;
            case GateKind::z_rot:
                std::snprintf(buf, sizeof buf, "z_rot %d %.17g", s.a, s.angle);
                break;
            case GateKind::exchange:
                std::snprintf(buf, sizeof buf, "exchange %d %d %.17g", s.a, s.b, s.angle);
                break;
        }
        out << buf;
        if (s.duration > 0) {
            std::snprintf(buf, sizeof buf, " %.17g", s.duration);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace dynss
