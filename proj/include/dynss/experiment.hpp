#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynss/decompose.hpp"
#include "dynss/group.hpp"
#include "dynss/noise.hpp"

namespace dynss {

// Fidelity sweep with full provenance. Rows are emitted in sweep-coordinate
// input order regardless of job count.
struct ExperimentResult {
    struct Row {
        double coordinate = 0.0;
        double fidelity = 0.0;
        double baseline_fidelity = 0.0;
        long cycles = 0;
    };
    std::string coordinate_name = "T_c";
    std::vector<Row> rows;
    std::uint64_t seed = 0;
    std::string config_hash;
    double wall_seconds = 0.0;  // not serialized; logging only
};

enum class ScheduleFamily { flip, uniform };

// How many cycles fit in t_total. strict=true demands an integer fit within
// 1e-9 relative (PreconditionError otherwise); strict=false rounds to the
// nearest positive integer.
long resolve_cycle_count(double t_total, double t_cycle, bool strict);

// For each T_c: evolve psi0 (x) seeded bath state under the cycled schedule
// for T_total, trace out the bath, and record fidelity to psi0. The
// baseline_fidelity column holds the pulse-free evolution for the same time.
ExperimentResult decoupling_sweep(const NoiseModel& model, const DecouplingGroup& group,
                                  ScheduleFamily family, const Vector& psi0_system,
                                  double t_total, const std::vector<double>& t_cycles,
                                  bool strict_cycles = true, int jobs = 1,
                                  const NumericPolicy& policy = default_policy());

// Replaces every pulse g by g * exp(-i eps * error_generator) and reports,
// per epsilon, the fidelity of a commutant-encoded logical state (reduced to
// its C_J factor) against the fidelity of an unencoded reference state.
ExperimentResult pulse_error_experiment(const NoiseModel& model, const DecouplingGroup& group,
                                        const CycleSchedule& schedule,
                                        const Matrix& error_generator,
                                        const std::vector<double>& epsilons,
                                        const NumericPolicy& policy = default_policy());

// CSV serialization: provenance comment lines, a header row, then one row per
// sweep point with pinned formatting (byte-identical across reruns).
std::string format_result_csv(const ExperimentResult& result);
// Same rows as a JSON document.
std::string format_result_json(const ExperimentResult& result);

}  // namespace dynss
