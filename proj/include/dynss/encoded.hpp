#pragma once

#include <cstdint>
#include <vector>

#include "dynss/decompose.hpp"
#include "dynss/noise.hpp"
#include "dynss/pauli.hpp"

namespace dynss {

// n-2 logical qubits living in one joint eigenspace of the collective flip
// group {X^n, Z^n}. Columns of the codespace isometry are ordered by logical
// basis index; the encoded observables act on them as exact logical Paulis.
struct LogicalFrame {
    int n = 0;
    int block_id = 0;  // 0..3 <-> (X^n, Z^n) eigenvalues (+,+),(+,-),(-,+),(-,-)
    std::vector<PauliString> logical_x;
    std::vector<PauliString> logical_z;
    Matrix codespace_isometry;  // 2^n x 2^{n-2}

    int logical_qubits() const { return n - 2; }
    int codespace_dim() const { return 1 << (n - 2); }
};

LogicalFrame build_logical_frame(int n, int block_id = 0);

// The all-zeros codeword of the given joint eigenspace; valid for even
// n >= 2 (at n = 2 the codespace is one-dimensional and carries no logical
// qubits).
Vector flip_codeword_state(int n, int block_id = 0);

// --------------------------- Gate generators ---------------------------------

enum class GateKind { x_rot, z_rot, exchange };

struct GateStep {
    GateKind kind = GateKind::x_rot;
    int a = 1;  // logical index (1-based)
    int b = 2;  // second logical index for exchange
    double angle = 0.0;
    double duration = 0.0;  // 0 = pick automatically from the weak-strength policy
};

// Physical two-body generator of the requested encoded operation: Xbar_j,
// Zbar_j, or the Heisenberg coupling sigma_(i+1).sigma_(j+1) implementing the
// encoded exchange. All outputs commute with both flip-group generators.
Matrix encoded_gate_generator(int n, GateKind kind, int a, int b = -1);

// Compression of a physical operator to the codespace: V^dag op V.
Matrix logical_action(const LogicalFrame& frame, const Matrix& physical_op);

// --------------------------- Verifications -----------------------------------

struct SwapCheck {
    bool ok = false;
    double residual = 0.0;  // operator distance to logical SWAP after phase alignment
    double leakage = 0.0;   // norm of the gate's coupling out of the codespace
};

// Does exp(-i pi/4 (sigma_(i+1).sigma_(j+1) - 1)) act on the codespace as the
// logical SWAP of encoded qubits i and j (up to global phase)?
SwapCheck encoded_swap_check(int n, int i, int j,
                             const NumericPolicy& policy = default_policy());

// Dimension of the real Lie algebra generated by {-i H_k} under commutators,
// computed by iterated closure with a rank cutoff.
int lie_closure_rank(const std::vector<Matrix>& hermitian_generators, double tol = 1e-8);

// --------------------------- Encoded circuits under decoupling ---------------

struct EncodedCircuitResult {
    double process_fidelity = 0.0;           // decoupler on
    double baseline_process_fidelity = 0.0;  // decoupler off
    long total_cycles = 0;
    double total_time = 0.0;
};

// Simulates the circuit applied through weak/slow gate Hamiltonians while the
// flip-group decoupler cycles at t_cycle, against an exact bath. Gate
// generators must lie in the commutant (SymmetryError otherwise) and each
// step must span at least 10 cycles (PreconditionError). Reports the
// entanglement fidelity of the induced logical channel versus the ideal
// circuit unitary.
EncodedCircuitResult run_encoded_circuit_under_decoupling(
    const LogicalFrame& frame, const std::vector<GateStep>& circuit, const NoiseModel& model,
    double t_cycle, const NumericPolicy& policy = default_policy());

// --------------------------- J = 0 noiseless subsystem -----------------------

struct J0Verification {
    Matrix isometry;  // 16 x 2 columns spanning the n=4, J=0 subsystem
    int trials = 0;
    double max_infidelity = 0.0;
    double max_leakage = 0.0;
};

// Builds the two-dimensional J=0 subsystem of S_4 on four qubits and verifies
// that seeded random collective rotations exp(-i sum_a theta_a sum_i
// sigma_a^(i)) leave subsystem-encoded states invariant.
J0Verification j0_noiseless_qubit(int trials = 100, std::uint64_t seed = 0x1057ULL,
                                  const NumericPolicy& policy = default_policy());

}  // namespace dynss
