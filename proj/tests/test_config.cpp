#include <doctest.h>

#include "dynss/config.hpp"
#include "dynss/errors.hpp"

using namespace dynss;

namespace {

const char* kSweepConfig = R"({
  "schema_version": 1,
  "command": "simulate",
  "mode": "decoupling_sweep",
  "group": {"preset": "collective_flips", "n": 2},
  "model": {"n": 2, "m": 1, "kind": "independent", "lambda": 0.1, "seed": 42},
  "schedule": "flip",
  "initial_state": "codeword",
  "T_total": 32.0,
  "T_c": [1.0, 0.5, 0.25, 0.125]
})";

}  // namespace

TEST_CASE("config: a valid sweep document parses") {
    const auto cfg = parse_config_json(kSweepConfig);
    CHECK(cfg.command == "simulate");
    CHECK(cfg.mode == "decoupling_sweep");
    CHECK(cfg.group_preset == "collective_flips");
    CHECK(cfg.model_n == 2);
    CHECK(cfg.seed == 42);
    CHECK(cfg.t_cycles.size() == 4);
    CHECK_FALSE(cfg.config_hash.empty());
}

TEST_CASE("config: unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config_json(R"({"schema_version":1,"command":"decompose","bogus":3})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(
                        R"({"schema_version":1,"command":"decompose","group":{"presett":"x"}})"),
                    ConfigError);
}

TEST_CASE("config: schema_version and command are validated") {
    CHECK_THROWS_AS(parse_config_json(R"({"schema_version":2,"command":"decompose"})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"schema_version":1,"command":"explode"})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
}

TEST_CASE("config: hash is stable under key reordering and sensitive to values") {
    const std::string a = R"({"schema_version":1,"command":"decompose"})";
    const std::string b = R"({"command":"decompose","schema_version":1})";
    CHECK(canonical_config_hash(a) == canonical_config_hash(b));
    const std::string c = R"({"command":"decompose","schema_version":1,"seed":7})";
    CHECK(canonical_config_hash(a) != canonical_config_hash(c));
}

TEST_CASE("config: group and model materialization") {
    const auto cfg = parse_config_json(kSweepConfig);
    const auto group = group_from_config(cfg);
    CHECK(group.order() == 4);
    const auto model = model_from_config(cfg);
    CHECK(model.n_system == 2);
    CHECK(model.error_ops.size() == 6);
    const auto psi0 = initial_state_from_config(cfg);
    CHECK(psi0.size() == 4);
    CHECK(std::abs(psi0.norm() - 1.0) < 1e-12);
}

TEST_CASE("config: circuit text round trip and validation") {
    const std::string text =
        "# demo circuit\n"
        "x_rot 1 1.5707963267948966 8\n"
        "exchange 1 2 0.78539816339744828\n";
    const auto circuit = parse_circuit(text);
    REQUIRE(circuit.size() == 2);
    CHECK(circuit[0].kind == GateKind::x_rot);
    CHECK(circuit[0].duration == 8.0);
    CHECK(circuit[1].kind == GateKind::exchange);
    CHECK(circuit[1].b == 2);
    CHECK(circuit[1].duration == 0.0);

    const auto reparsed = parse_circuit(format_circuit(circuit));
    REQUIRE(reparsed.size() == 2);
    CHECK(reparsed[1].angle == circuit[1].angle);

    CHECK_THROWS_AS(parse_circuit("teleport 1 2 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_circuit("x_rot 1\n"), ConfigError);
}
