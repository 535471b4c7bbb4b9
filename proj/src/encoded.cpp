#include "dynss/encoded.hpp"

#include <algorithm>
#include <cmath>

#include "dynss/errors.hpp"
#include "dynss/experiment.hpp"

namespace dynss {

namespace {

// Codeword for logical index l: sites 1..n-2 carry the logical bits, site
// n-1 is the fixed representative bit (0), site 0 absorbs the Z^n parity.
// Site 0 is the most significant bit of the basis index.
Vector flip_codeword(int n, int block_id, int l) {
    const int sx = (block_id & 2) ? -1 : 1;  // X^n eigenvalue
    const int sz = (block_id & 1) ? -1 : 1;  // Z^n eigenvalue
    const int parity_bit = sz == 1 ? 0 : 1;
    const int d = 1 << n;
    int ones = 0;
    int b = 0;
    for (int j = 1; j <= n - 2; ++j) {
        const int bit = (l >> (n - 2 - j)) & 1;  // logical qubit 1 most significant
        ones += bit;
        b |= bit << (n - 1 - j);
    }
    b |= ((parity_bit + ones) % 2) << (n - 1);  // site 0
    Vector psi = Vector::Zero(d);
    psi(b) = 1.0 / std::sqrt(2.0);
    psi((~b) & (d - 1)) = sx / std::sqrt(2.0);
    return psi;
}

}  // namespace

LogicalFrame build_logical_frame(int n, int block_id) {
    if (n < 4 || n % 2 != 0)
        throw PreconditionError("build_logical_frame: n must be even and >= 4");
    if (block_id < 0 || block_id > 3)
        throw PreconditionError("build_logical_frame: block_id must be in 0..3");

    LogicalFrame frame;
    frame.n = n;
    frame.block_id = block_id;
    const auto logicals = logical_generators_flip_code(n);
    frame.logical_x = logicals.x;
    frame.logical_z = logicals.z;

    const int k = 1 << (n - 2);
    frame.codespace_isometry = Matrix::Zero(1 << n, k);
    for (int l = 0; l < k; ++l) frame.codespace_isometry.col(l) = flip_codeword(n, block_id, l);
    return frame;
}

Vector flip_codeword_state(int n, int block_id) {
    if (n < 2 || n % 2 != 0)
        throw PreconditionError("flip_codeword_state: n must be even and >= 2");
    if (block_id < 0 || block_id > 3)
        throw PreconditionError("flip_codeword_state: block_id must be in 0..3");
    return flip_codeword(n, block_id, 0);
}

// --------------------------- Gate generators ---------------------------------

Matrix encoded_gate_generator(int n, GateKind kind, int a, int b) {
    if (n < 4 || n % 2 != 0)
        throw PreconditionError("encoded_gate_generator: n must be even and >= 4");
    switch (kind) {
        case GateKind::x_rot: {
            if (a < 1 || a > n - 2) throw PreconditionError("encoded_gate_generator: bad index");
            return PauliString(n, (1ULL << 0) | (1ULL << a), 0, 0).materialize();
        }
        case GateKind::z_rot: {
            if (a < 1 || a > n - 2) throw PreconditionError("encoded_gate_generator: bad index");
            return PauliString(n, 0, (1ULL << a) | (1ULL << (n - 1)), 0).materialize();
        }
        case GateKind::exchange: {
            if (a < 1 || b < 1 || a > n - 2 || b > n - 2 || a == b)
                throw PreconditionError("encoded_gate_generator: bad exchange pair");
            // Encoded qubits i, j couple through physical sites i+1, j+1
            // (1-based), i.e. 0-based sites a and b.
            const int d = 1 << n;
            Matrix h = Matrix::Zero(d, d);
            for (int axis = 0; axis < 3; ++axis)
                h += pauli_on_site(n, a, axis) * pauli_on_site(n, b, axis);
            return h;
        }
    }
    throw PreconditionError("encoded_gate_generator: unknown kind");
}

Matrix logical_action(const LogicalFrame& frame, const Matrix& physical_op) {
    if (physical_op.rows() != frame.codespace_isometry.rows())
        throw ShapeError("logical_action: dimension mismatch");
    return frame.codespace_isometry.adjoint() * physical_op * frame.codespace_isometry;
}

// --------------------------- Verifications -----------------------------------

SwapCheck encoded_swap_check(int n, int i, int j, const NumericPolicy& policy) {
    if (i < 1 || j < 1 || i > n - 2 || j > n - 2 || i >= j)
        throw PreconditionError("encoded_swap_check: need 1 <= i < j <= n-2");
    const LogicalFrame frame = build_logical_frame(n, 0);
    const int d = 1 << n;
    const int k = frame.codespace_dim();

    const Matrix h = encoded_gate_generator(n, GateKind::exchange, i, j) - identity(d);
    const Matrix u = matexp(h, 3.14159265358979323846 / 4.0, policy);

    // Logical SWAP permutation on the codespace basis.
    Matrix target = Matrix::Zero(k, k);
    const int nl = n - 2;
    for (int l = 0; l < k; ++l) {
        const int bi = (l >> (nl - i)) & 1;
        const int bj = (l >> (nl - j)) & 1;
        int swapped = l & ~(1 << (nl - i)) & ~(1 << (nl - j));
        swapped |= bi << (nl - j);
        swapped |= bj << (nl - i);
        target(swapped, l) = 1.0;
    }

    SwapCheck out;
    const Matrix& v = frame.codespace_isometry;
    out.leakage = ((Matrix::Identity(d, d) - v * v.adjoint()) * u * v).norm();
    const Matrix l_act = logical_action(frame, u);
    const Complex overlap = (target.adjoint() * l_act).trace();
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1, 0);
    out.residual = (l_act - phase * target).cwiseAbs().maxCoeff() + out.leakage;
    out.ok = out.residual < 1e-10;
    return out;
}

int lie_closure_rank(const std::vector<Matrix>& hermitian_generators, double tol) {
    if (hermitian_generators.empty()) return 0;
    const Eigen::Index k = hermitian_generators.front().rows();

    // Work with anti-Hermitian elements -iH vectorized over R^(2k^2).
    auto realvec = [k](const Matrix& a) {
        Eigen::VectorXd v(2 * k * k);
        Eigen::Index idx = 0;
        for (Eigen::Index c = 0; c < k; ++c)
            for (Eigen::Index r = 0; r < k; ++r) {
                v(idx++) = a(r, c).real();
                v(idx++) = a(r, c).imag();
            }
        return v;
    };

    std::vector<Matrix> accepted;
    std::vector<Eigen::VectorXd> basis;
    auto try_add = [&](const Matrix& cand) {
        Eigen::VectorXd v = realvec(cand);
        const double scale = v.norm();
        if (scale <= tol) return false;
        for (const auto& u : basis) v -= u.dot(v) * u;
        for (const auto& u : basis) v -= u.dot(v) * u;
        if (v.norm() <= tol * scale) return false;
        basis.push_back(v / v.norm());
        accepted.push_back(cand);
        return true;
    };

    for (const auto& h : hermitian_generators) try_add(Complex(0, -1) * h);

    std::size_t frontier_start = 0;
    while (frontier_start < accepted.size()) {
        const std::size_t frontier_end = accepted.size();
        for (std::size_t inew = frontier_start; inew < frontier_end; ++inew)
            for (std::size_t iold = 0; iold < frontier_end; ++iold) {
                const Matrix c = commutator(accepted[inew], accepted[iold]);
                try_add(c);
            }
        frontier_start = frontier_end;
    }
    return static_cast<int>(basis.size());
}

// --------------------------- Encoded circuits under decoupling ---------------

namespace {

double auto_duration(double angle, double t_cycle) {
    // Weak-control policy: strength = angle/duration capped at 0.2, and at
    // least 10 cycles per gate.
    const double min_cycles = 10.0;
    const double by_strength = std::abs(angle) / 0.2;
    const double cycles = std::max(min_cycles, std::ceil(by_strength / t_cycle));
    return cycles * t_cycle;
}

}  // namespace

EncodedCircuitResult run_encoded_circuit_under_decoupling(const LogicalFrame& frame,
                                                          const std::vector<GateStep>& circuit,
                                                          const NoiseModel& model,
                                                          double t_cycle,
                                                          const NumericPolicy& policy) {
    if (model.n_system != frame.n)
        throw ShapeError("run_encoded_circuit_under_decoupling: model size mismatch");
    const int sd = model.system_dim();
    const int bd = model.bath_dim();
    const int k = frame.codespace_dim();
    const Matrix& v = frame.codespace_isometry;

    const DecouplingGroup group = collective_flip_group(frame.n);
    const AlgebraBasis commutant = commutant_basis(group, policy);
    const Matrix h_total = build_total_hamiltonian(model);

    Rng bath_rng = Rng(model.seed).split(0xBA7Bu);
    const Vector bath0 = random_state(bd, bath_rng);

    // Maximally entangled probe between the codespace and a reference factor;
    // factor order is system (x) bath (x) reference.
    Vector phi0 = Vector::Zero(static_cast<Eigen::Index>(sd) * bd * k);
    for (int l = 0; l < k; ++l)
        phi0 += kron(kron(Vector(v.col(l)), bath0), basis_state(k, l)) / std::sqrt(double(k));

    Matrix ideal_logical = Matrix::Identity(k, k);
    Vector psi = phi0;       // decoupler on
    Vector psi_free = phi0;  // decoupler off
    long total_cycles = 0;
    double total_time = 0.0;

    for (const auto& step : circuit) {
        const Matrix gen = encoded_gate_generator(frame.n, step.kind, step.a, step.b);
        if (span_residual(gen, commutant) > policy.block_residual_tol * std::max(1.0, hs_norm(gen)))
            throw SymmetryError(
                "run_encoded_circuit_under_decoupling: gate generator outside the commutant");

        const double duration = step.duration > 0 ? step.duration : auto_duration(step.angle, t_cycle);
        if (duration < 10.0 * t_cycle - 1e-12)
            throw PreconditionError(
                "run_encoded_circuit_under_decoupling: gate duration below 10 cycles");
        const long cycles = resolve_cycle_count(duration, t_cycle, false);
        const double actual = static_cast<double>(cycles) * t_cycle;
        const double strength = step.angle / actual;

        const Matrix h_step =
            kron(h_total, identity(k)) + strength * kron(kron(gen, identity(bd)), identity(k));

        CycleSchedule schedule = flip_cycle_schedule(frame.n, t_cycle);
        schedule.cycles = static_cast<int>(cycles);
        psi = evolve(schedule, h_step, psi, {}, policy);

        CycleSchedule free_schedule;
        free_schedule.segments = {{t_cycle, -1}};
        free_schedule.cycle_time = t_cycle;
        free_schedule.cycles = static_cast<int>(cycles);
        psi_free = evolve(free_schedule, h_step, psi_free, {}, policy);

        ideal_logical = matexp(logical_action(frame, gen), step.angle / 1.0, policy) *
                        ideal_logical;
        total_cycles += cycles;
        total_time += actual;
    }

    // Compare against the ideal logical unitary applied to the probe.
    Vector phi_ideal = Vector::Zero(static_cast<Eigen::Index>(sd) * k);
    for (int l = 0; l < k; ++l) {
        const Vector logical_out = ideal_logical * basis_state(k, l);
        phi_ideal += kron(Vector(v * logical_out), basis_state(k, l)) / std::sqrt(double(k));
    }

    const std::vector<int> dims = {sd, bd, k};
    const std::vector<int> keep = {0, 2};
    auto process_fidelity = [&](const Vector& state) {
        const Matrix rho = partial_trace(state * state.adjoint(), keep, dims);
        return std::clamp((phi_ideal.adjoint() * rho * phi_ideal).value().real(), 0.0, 1.0);
    };

    EncodedCircuitResult out;
    out.process_fidelity = process_fidelity(psi);
    out.baseline_process_fidelity = process_fidelity(psi_free);
    out.total_cycles = total_cycles;
    out.total_time = total_time;
    return out;
}

// --------------------------- J = 0 noiseless subsystem -----------------------

J0Verification j0_noiseless_qubit(int trials, std::uint64_t seed, const NumericPolicy& policy) {
    const DecouplingGroup s4 = symmetric_group(4);
    const SubsystemDecomposition dec = decompose(s4, 0xD5C0DE01ULL, policy);

    int block = -1;
    for (int b = 0; b < dec.block_count(); ++b)
        if (dec.blocks[b].multiplicity == 1 && dec.blocks[b].irrep_dim == 2) block = b;
    if (block < 0) throw Error("j0_noiseless_qubit: J=0 block not found");

    J0Verification out;
    out.isometry = dec.blocks[block].isometry;
    out.trials = trials;

    std::vector<Matrix> collectives = {collective_pauli(4, 0), collective_pauli(4, 1),
                                       collective_pauli(4, 2)};
    const Matrix& v = out.isometry;
    const Matrix proj_out = Matrix::Identity(16, 16) - v * v.adjoint();

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        Matrix gen = Matrix::Zero(16, 16);
        for (const auto& c : collectives) gen += rng.uniform(-3.14159265358979, 3.14159265358979) * c;
        const Matrix u = matexp(gen, 1.0, policy);

        const Vector logical = random_state(2, rng);
        const Vector full = v * logical;
        const Vector moved = u * full;

        out.max_leakage = std::max(out.max_leakage, (proj_out * moved).norm());
        const Vector back = v.adjoint() * moved;
        const double f = std::norm((logical.adjoint() * back).value());
        out.max_infidelity = std::max(out.max_infidelity, 1.0 - f);
    }
    return out;
}

}  // namespace dynss
