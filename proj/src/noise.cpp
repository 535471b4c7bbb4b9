#include "dynss/noise.hpp"

#include <cmath>
#include <map>

#include "dynss/errors.hpp"
#include "dynss/pauli.hpp"

namespace dynss {

NoiseModel make_noise_model(int n_system, int n_bath, CouplingKind kind, double lambda,
                            std::uint64_t seed, bool bath_exchange) {
    if (n_system < 1) throw PreconditionError("make_noise_model: need at least one system qubit");
    if (n_bath < 0) throw PreconditionError("make_noise_model: negative bath size");
    if (n_system + n_bath > 12) throw SizeError("make_noise_model: n + m exceeds 12 qubits");

    NoiseModel model;
    model.n_system = n_system;
    model.n_bath = n_bath;
    model.kind = kind;
    model.lambda = lambda;
    model.seed = seed;
    model.system_hamiltonian = Matrix::Zero(model.system_dim(), model.system_dim());

    Rng rng(seed);

    const int bd = model.bath_dim();
    model.bath_hamiltonian = Matrix::Zero(bd, bd);
    for (int k = 0; k < n_bath; ++k) {
        const double omega = rng.uniform(0.5, 1.5);
        model.bath_hamiltonian += 0.5 * omega * pauli_on_site(n_bath, k, 2);
    }
    if (bath_exchange && n_bath >= 2) {
        for (int k = 0; k + 1 < n_bath; ++k) {
            const double j = rng.uniform(0.05, 0.15);
            for (int axis = 0; axis < 3; ++axis)
                model.bath_hamiltonian +=
                    j * pauli_on_site(n_bath, k, axis) * pauli_on_site(n_bath, k + 1, axis);
        }
    }

    auto bath_op = [&](int axis) {
        Matrix b = Matrix::Zero(bd, bd);
        for (int k = 0; k < n_bath; ++k) b += lambda * rng.normal() * pauli_on_site(n_bath, k, axis);
        return b;
    };

    if (kind == CouplingKind::independent) {
        for (int i = 0; i < n_system; ++i)
            for (int axis = 0; axis < 3; ++axis) {
                model.error_ops.push_back(pauli_on_site(n_system, i, axis));
                model.bath_ops.push_back(bath_op(axis));
            }
    } else if (kind == CouplingKind::collective) {
        for (int axis = 0; axis < 3; ++axis) {
            model.error_ops.push_back(collective_pauli(n_system, axis));
            model.bath_ops.push_back(bath_op(axis));
        }
    }
    // custom: caller fills error_ops/bath_ops.
    return model;
}

Matrix build_total_hamiltonian(const NoiseModel& model) {
    if (model.n_system + model.n_bath > 12)
        throw SizeError("build_total_hamiltonian: n + m exceeds 12 qubits");
    if (model.error_ops.size() != model.bath_ops.size())
        throw ShapeError("build_total_hamiltonian: error/bath operator count mismatch");
    const int sd = model.system_dim();
    const int bd = model.bath_dim();
    Matrix h = kron(model.system_hamiltonian, identity(bd)) +
               kron(identity(sd), model.bath_hamiltonian);
    for (std::size_t a = 0; a < model.error_ops.size(); ++a) {
        if (model.error_ops[a].rows() != sd || model.bath_ops[a].rows() != bd)
            throw ShapeError("build_total_hamiltonian: coupling operator dimension mismatch");
        h += kron(model.error_ops[a], model.bath_ops[a]);
    }
    return h;
}

// --------------------------- Cycle schedules ---------------------------------

CycleSchedule flip_cycle_schedule(int n, double t_cycle) {
    if (t_cycle <= 0) throw PreconditionError("flip_cycle_schedule: cycle time must be positive");
    const std::uint64_t all = (1ULL << n) - 1;
    CycleSchedule s;
    s.cycle_time = t_cycle;
    s.pulses = {PauliString(n, all, 0, 0).materialize(),   // collective X pi-pulse
                PauliString(n, 0, all, 0).materialize()};  // collective Z pi-pulse
    const double delta = t_cycle / 4.0;
    s.segments = {{delta, 0}, {delta, 1}, {delta, 0}, {delta, 1}};
    return s;
}

CycleSchedule uniform_group_schedule(const DecouplingGroup& g, double t_cycle) {
    if (t_cycle <= 0)
        throw PreconditionError("uniform_group_schedule: cycle time must be positive");
    CycleSchedule s;
    s.cycle_time = t_cycle;
    const int order = g.order();
    const double delta = t_cycle / order;
    // Pulse after segment k carries frame g_k to g_{k+1}; the last pulse
    // returns the frame to the identity.
    for (int k = 0; k < order; ++k) {
        const Matrix& here = g.elements[k];
        const Matrix& next = g.elements[(k + 1) % order];
        s.pulses.push_back(canonical_phase(next * here.adjoint()));
        s.segments.push_back({delta, k});
    }
    return s;
}

std::vector<Matrix> toggling_frame(const CycleSchedule& schedule) {
    // Pulse-free schedules have no intrinsic dimension; report empty frames
    // (consumers treat an empty frame as the identity).
    if (schedule.pulses.empty())
        return std::vector<Matrix>(schedule.segments.size(), Matrix());
    std::vector<Matrix> frames;
    Matrix frame = Matrix::Identity(schedule.pulses.front().rows(),
                                    schedule.pulses.front().rows());
    for (const auto& seg : schedule.segments) {
        frames.push_back(frame);
        if (seg.pulse_after >= 0) frame = schedule.pulses[seg.pulse_after] * frame;
    }
    return frames;
}

// --------------------------- Evolution ---------------------------------------

namespace {

int lifted_bath_dim(const CycleSchedule& schedule, Eigen::Index total_dim) {
    if (schedule.pulses.empty()) return 1;
    const Eigen::Index sys = schedule.pulses.front().rows();
    if (sys == 0 || total_dim % sys != 0)
        throw ShapeError("schedule: pulse dimension does not divide the evolved dimension");
    return static_cast<int>(total_dim / sys);
}

}  // namespace

Vector evolve(const CycleSchedule& schedule, const Matrix& hamiltonian, const Vector& psi0,
              const std::vector<Matrix>& segment_hamiltonians, const NumericPolicy& policy) {
    if (hamiltonian.rows() != psi0.size())
        throw ShapeError("evolve: state and Hamiltonian dimensions differ");
    if (!segment_hamiltonians.empty() &&
        segment_hamiltonians.size() != schedule.segments.size())
        throw ShapeError("evolve: segment Hamiltonian count does not match schedule");

    const int bath = lifted_bath_dim(schedule, hamiltonian.rows());
    std::vector<Matrix> lifted;
    for (const auto& p : schedule.pulses) lifted.push_back(kron(p, identity(bath)));

    // One propagator per (segment index or duration); reused across cycles.
    std::vector<Matrix> seg_props(schedule.segments.size());
    std::map<double, Matrix> by_duration;
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const double delta = schedule.segments[k].duration;
        if (!segment_hamiltonians.empty()) {
            seg_props[k] = matexp(segment_hamiltonians[k], delta, policy);
        } else {
            auto it = by_duration.find(delta);
            if (it == by_duration.end())
                it = by_duration.emplace(delta, matexp(hamiltonian, delta, policy)).first;
            seg_props[k] = it->second;
        }
    }

    Vector psi = psi0;
    for (int c = 0; c < schedule.cycles; ++c)
        for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
            psi = seg_props[k] * psi;
            const int p = schedule.segments[k].pulse_after;
            if (p >= 0) psi = lifted[p] * psi;
        }
    return psi;
}

Matrix average_hamiltonian(const Matrix& hamiltonian, const CycleSchedule& schedule) {
    const int bath = lifted_bath_dim(schedule, hamiltonian.rows());
    const std::vector<Matrix> frames = toggling_frame(schedule);
    Matrix acc = Matrix::Zero(hamiltonian.rows(), hamiltonian.cols());
    double total = 0.0;
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const double delta = schedule.segments[k].duration;
        total += delta;
        if (frames[k].size() == 0) {
            acc += delta * hamiltonian;
        } else {
            const Matrix g = kron(frames[k], identity(bath));
            acc += delta * (g.adjoint() * hamiltonian * g);
        }
    }
    if (total <= 0) throw PreconditionError("average_hamiltonian: empty schedule");
    return acc / total;
}

std::vector<Matrix> fast_modulated_gate_schedule(const Matrix& h_gate,
                                                 const CycleSchedule& schedule,
                                                 const AlgebraBasis& algebra,
                                                 const NumericPolicy& policy) {
    if (h_gate.rows() != algebra.dim || h_gate.cols() != algebra.dim)
        throw ShapeError("fast_modulated_gate_schedule: dimension mismatch");
    const double residual = span_residual(h_gate, algebra);
    if (residual > policy.block_residual_tol * std::max(1.0, hs_norm(h_gate)))
        throw SymmetryError("fast_modulated_gate_schedule: generator outside the group algebra");

    const std::vector<Matrix> frames = toggling_frame(schedule);
    std::vector<Matrix> out;
    for (const auto& frame : frames) {
        if (frame.size() == 0)
            out.push_back(h_gate);
        else
            out.push_back(frame * h_gate * frame.adjoint());
    }
    return out;
}

}  // namespace dynss
