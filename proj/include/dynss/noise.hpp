#pragma once

#include <cstdint>
#include <vector>

#include "dynss/group.hpp"
#include "dynss/linalg.hpp"

namespace dynss {

enum class CouplingKind { independent, collective, custom };

// System+bath model with linear coupling H_SB = sum_alpha E_alpha (x) B_alpha.
// Error operators are traceless by construction; bath operators are Hermitian
// combinations of bath Paulis with seeded coefficients scaled by `lambda`.
struct NoiseModel {
    int n_system = 0;
    int n_bath = 0;
    CouplingKind kind = CouplingKind::independent;
    double lambda = 0.1;
    std::uint64_t seed = 0;

    Matrix system_hamiltonian;  // 2^n x 2^n
    Matrix bath_hamiltonian;    // 2^m x 2^m
    std::vector<Matrix> error_ops;  // E_alpha on the system
    std::vector<Matrix> bath_ops;   // B_alpha on the bath (same length)

    int system_dim() const { return 1 << n_system; }
    int bath_dim() const { return 1 << n_bath; }
};

// Builds the default model: bath splittings omega_k in [0.5, 1.5],
// H_B = sum_k omega_k sigma_z^{(k)}/2 (+ optional nearest-neighbour exchange),
// couplings ~ lambda * N(0,1). kind=independent uses {sigma_a^{(i)}} (3n error
// generators), kind=collective uses {sum_i sigma_a^{(i)}} (3 generators).
NoiseModel make_noise_model(int n_system, int n_bath, CouplingKind kind, double lambda,
                            std::uint64_t seed, bool bath_exchange = false);

// H = H_S (x) 1 + 1 (x) H_B + H_SB on 2^{n+m}; requires n+m <= 12.
Matrix build_total_hamiltonian(const NoiseModel& model);

// --------------------------- Cycle schedules ---------------------------------

// Bang-bang cycle: free segments separated by instantaneous pulses. Pulses
// act on the system factor only and are stored once; segments reference them
// by index (-1 = no pulse after that segment).
struct CycleSchedule {
    struct Segment {
        double duration = 0.0;
        int pulse_after = -1;
    };
    std::vector<Segment> segments;
    std::vector<Matrix> pulses;
    double cycle_time = 0.0;
    int cycles = 1;
};

// [delta - P_x - delta - P_z]^2 with delta = T_c/4 for the collective flip
// group on n qubits. The toggling frame visits {1, X^n, Y^n, Z^n} mod phase.
CycleSchedule flip_cycle_schedule(int n, double t_cycle);

// Generic uniform schedule: |G| equal segments whose toggling frame visits
// every element of G exactly once per cycle; net pulse product is identity
// mod phase.
CycleSchedule uniform_group_schedule(const DecouplingGroup& g, double t_cycle);

// Cumulative pulse products g_k (frame during segment k); g_1 = identity.
std::vector<Matrix> toggling_frame(const CycleSchedule& schedule);

// --------------------------- Evolution ---------------------------------------

// Piecewise-constant evolution: alternates exp(-i H delta_k) with the
// instantaneous pulses, repeated schedule.cycles times. H lives on
// system (x) bath; pulses are lifted to act on the system factor.
// `segment_hamiltonians`, when nonempty, replaces H during segment k of every
// cycle (fast-modulated control); entries must match H's dimension.
Vector evolve(const CycleSchedule& schedule, const Matrix& hamiltonian, const Vector& psi0,
              const std::vector<Matrix>& segment_hamiltonians = {},
              const NumericPolicy& policy = default_policy());

// First-order average Hamiltonian (1/T_c) sum_k delta_k g_k^dag H g_k over
// one cycle; equals Pi_G(H) (x)-lifted for uniform group schedules.
Matrix average_hamiltonian(const Matrix& hamiltonian, const CycleSchedule& schedule);

// Lab-frame segment Hamiltonians g_k H g_k^dag realizing a constant gate
// generator in the toggling frame. H must lie in the span of `algebra`
// (else SymmetryError).
std::vector<Matrix> fast_modulated_gate_schedule(const Matrix& h_gate,
                                                 const CycleSchedule& schedule,
                                                 const AlgebraBasis& algebra,
                                                 const NumericPolicy& policy = default_policy());

}  // namespace dynss
