#include "dynss/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "dynss/errors.hpp"
#include "dynss/version.hpp"

namespace dynss {

long resolve_cycle_count(double t_total, double t_cycle, bool strict) {
    if (t_cycle <= 0 || t_total <= 0)
        throw PreconditionError("resolve_cycle_count: times must be positive");
    const double exact = t_total / t_cycle;
    const long rounded = std::max(1L, std::lround(exact));
    if (strict && std::abs(exact - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, exact))
        throw PreconditionError("resolve_cycle_count: T_total is not an integer number of cycles");
    return rounded;
}

namespace {

CycleSchedule make_schedule(const DecouplingGroup& group, ScheduleFamily family, int n_system,
                            double t_cycle) {
    if (family == ScheduleFamily::flip) return flip_cycle_schedule(n_system, t_cycle);
    return uniform_group_schedule(group, t_cycle);
}

}  // namespace

ExperimentResult decoupling_sweep(const NoiseModel& model, const DecouplingGroup& group,
                                  ScheduleFamily family, const Vector& psi0_system,
                                  double t_total, const std::vector<double>& t_cycles,
                                  bool strict_cycles, int jobs, const NumericPolicy& policy) {
    if (psi0_system.size() != model.system_dim())
        throw ShapeError("decoupling_sweep: initial state dimension mismatch");
    if (group.dim != model.system_dim())
        throw ShapeError("decoupling_sweep: group dimension mismatch");

    const Matrix h_total = build_total_hamiltonian(model);

    // Seeded pure bath state; deterministic per model seed.
    Rng bath_rng = Rng(model.seed).split(0xBA7Bu);
    const Vector bath0 = random_state(model.bath_dim(), bath_rng);
    const Vector psi_full0 = kron(psi0_system, bath0);

    const std::vector<int> dims = {model.system_dim(), model.bath_dim()};
    const std::vector<int> keep = {0};

    // No-decoupling baseline over the same total time.
    const Matrix u_free = matexp(h_total, t_total, policy);
    const Vector psi_free = u_free * psi_full0;
    const Matrix rho_free = psi_free * psi_free.adjoint();
    const double baseline = fidelity(psi0_system, partial_trace(rho_free, keep, dims), policy);

    auto run_point = [&](double t_cycle) {
        ExperimentResult::Row row;
        row.coordinate = t_cycle;
        row.cycles = resolve_cycle_count(t_total, t_cycle, strict_cycles);
        CycleSchedule schedule = make_schedule(group, family, model.n_system, t_cycle);
        schedule.cycles = static_cast<int>(row.cycles);
        const Vector psi = evolve(schedule, h_total, psi_full0, {}, policy);
        const Matrix rho_sys = partial_trace(psi * psi.adjoint(), keep, dims);
        row.fidelity = fidelity(psi0_system, rho_sys, policy);
        row.baseline_fidelity = baseline;
        return row;
    };

    ExperimentResult result;
    result.seed = model.seed;
    result.rows.resize(t_cycles.size());

    const int worker_count = std::max(1, jobs);
    if (worker_count == 1 || t_cycles.size() <= 1) {
        for (std::size_t i = 0; i < t_cycles.size(); ++i) result.rows[i] = run_point(t_cycles[i]);
    } else {
        // Independent points; merged back in coordinate order.
        std::vector<std::future<ExperimentResult::Row>> futures(t_cycles.size());
        std::size_t next = 0;
        while (next < t_cycles.size()) {
            const std::size_t batch =
                std::min<std::size_t>(worker_count, t_cycles.size() - next);
            for (std::size_t b = 0; b < batch; ++b)
                futures[next + b] = std::async(std::launch::async, run_point, t_cycles[next + b]);
            for (std::size_t b = 0; b < batch; ++b)
                result.rows[next + b] = futures[next + b].get();
            next += batch;
        }
    }
    return result;
}

ExperimentResult pulse_error_experiment(const NoiseModel& model, const DecouplingGroup& group,
                                        const CycleSchedule& schedule,
                                        const Matrix& error_generator,
                                        const std::vector<double>& epsilons,
                                        const NumericPolicy& policy) {
    if (!is_hermitian(error_generator, policy.hermiticity_tol))
        throw HermiticityError("pulse_error_experiment: error generator not Hermitian");
    if (error_generator.rows() != group.dim)
        throw ShapeError("pulse_error_experiment: error generator dimension mismatch");

    const Matrix h_total = build_total_hamiltonian(model);

    // Commutant-encoded probe: first block with multiplicity > 1, logical
    // |0>_C with |0>_D cofactor.
    const SubsystemDecomposition dec = decompose(group, 0xD5C0DE01ULL, policy);
    int block = -1;
    for (int k = 0; k < dec.block_count(); ++k)
        if (dec.blocks[k].multiplicity > 1) {
            block = k;
            break;
        }
    if (block < 0)
        throw PreconditionError("pulse_error_experiment: no block with commutant degrees of freedom");
    const Vector logical0 = basis_state(dec.blocks[block].multiplicity, 0);
    const Vector cofactor0 = basis_state(dec.blocks[block].irrep_dim, 0);
    const Vector psi_encoded = encode_into_factor(dec, block, Factor::commutant_C, logical0, cofactor0);

    // Unencoded reference: computational all-zeros state.
    const Vector psi_ref = basis_state(model.system_dim(), 0);

    Rng bath_rng = Rng(model.seed).split(0xBA7Bu);
    const Vector bath0 = random_state(model.bath_dim(), bath_rng);
    const std::vector<int> dims = {model.system_dim(), model.bath_dim()};
    const std::vector<int> keep = {0};

    ExperimentResult result;
    result.coordinate_name = "epsilon";
    result.seed = model.seed;

    for (double eps : epsilons) {
        CycleSchedule faulty = schedule;
        const Matrix kick = matexp(error_generator, eps, policy);
        for (auto& p : faulty.pulses) p = p * kick;

        ExperimentResult::Row row;
        row.coordinate = eps;
        row.cycles = schedule.cycles;

        const Vector out_enc = evolve(faulty, h_total, kron(psi_encoded, bath0), {}, policy);
        const Matrix rho_sys = partial_trace(out_enc * out_enc.adjoint(), keep, dims);
        const Matrix rho_c = reduced_factor_state(dec, block, Factor::commutant_C, rho_sys);
        // Block population below one (leakage) shows up as lost fidelity.
        row.fidelity = std::clamp((logical0.adjoint() * rho_c * logical0).value().real(), 0.0, 1.0);

        const Vector out_ref = evolve(faulty, h_total, kron(psi_ref, bath0), {}, policy);
        const Matrix rho_ref = partial_trace(out_ref * out_ref.adjoint(), keep, dims);
        row.baseline_fidelity = fidelity(psi_ref, rho_ref, policy);

        result.rows.push_back(row);
    }
    return result;
}

// --------------------------- Serialization -----------------------------------

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string format_result_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "# schema_version=1\n";
    out << "# tool_version=" << kToolVersion << "\n";
    out << "# config_hash=" << (result.config_hash.empty() ? "none" : result.config_hash) << "\n";
    out << "# seed=" << result.seed << "\n";
    out << result.coordinate_name << ",fidelity,baseline_fidelity,cycles,seed\n";
    for (const auto& row : result.rows)
        out << format_double(row.coordinate) << ',' << format_double(row.fidelity) << ','
            << format_double(row.baseline_fidelity) << ',' << row.cycles << ',' << result.seed
            << "\n";
    return out.str();
}

std::string format_result_json(const ExperimentResult& result) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"schema_version\": 1,\n";
    out << "  \"tool_version\": \"" << kToolVersion << "\",\n";
    out << "  \"config_hash\": \"" << (result.config_hash.empty() ? "none" : result.config_hash)
        << "\",\n";
    out << "  \"seed\": " << result.seed << ",\n";
    out << "  \"coordinate\": \"" << result.coordinate_name << "\",\n";
    out << "  \"rows\": [\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        out << "    {\"" << result.coordinate_name << "\": " << format_double(row.coordinate)
            << ", \"fidelity\": " << format_double(row.fidelity)
            << ", \"baseline_fidelity\": " << format_double(row.baseline_fidelity)
            << ", \"cycles\": " << row.cycles << "}" << (i + 1 < result.rows.size() ? "," : "")
            << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

}  // namespace dynss
