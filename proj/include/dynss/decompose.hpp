#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynss/group.hpp"
#include "dynss/linalg.hpp"
#include "dynss/numeric_policy.hpp"

namespace dynss {

// One isotypic block of H = (+)_J C_J (x) D_J. The isometry maps
// C^{n_j} (x) C^{d_j} (C factor = leftmost/major index) into the full space.
struct SubsystemBlock {
    int block_id = 0;
    int multiplicity = 0;  // n_J = dim(C_J)
    int irrep_dim = 0;     // d_J = dim(D_J)
    Matrix isometry;       // dim x (n_J * d_J), orthonormal columns
};

struct SubsystemDecomposition {
    int dim = 0;
    std::vector<SubsystemBlock> blocks;
    Matrix basis_change;  // all isometries side by side; unitary

    int block_count() const { return static_cast<int>(blocks.size()); }
};

// Numerically computes the isotypic decomposition of the group action:
// group elements become 1_{n_J} (x) u_J per block, commutant elements become
// m_J (x) 1_{d_J}. Deterministic for a fixed seed. Throws DegeneracyError if
// random generic-element draws keep failing to separate spectra.
SubsystemDecomposition decompose(const DecouplingGroup& g,
                                 std::uint64_t seed = 0xD5C0DE01ULL,
                                 const NumericPolicy& policy = default_policy());

// Residual of the block structure: max coupling between different blocks plus
// deviation of each conjugated group element from 1 (x) u_J form (and of each
// commutant basis op from m (x) 1 form).
struct DecompositionResiduals {
    double group_structure = 0.0;      // worst over all group elements
    double commutant_structure = 0.0;  // worst over commutant basis ops
};
DecompositionResiduals verify_decomposition(const DecouplingGroup& g,
                                            const SubsystemDecomposition& dec,
                                            const NumericPolicy& policy = default_policy());

// --------------------------- Noiselessness classification -------------------

enum class NoiselessReason {
    projected_errors_vanish,
    projected_errors_central,
    errors_in_commutant_act_trivially_on_DJ,
    not_noiseless,
};

const char* to_string(NoiselessReason r);

struct FactorVerdict {
    int block_id = 0;
    char factor = 'C';  // 'C' = commutant factor, 'D' = group factor
    bool noiseless = false;
    NoiselessReason reason = NoiselessReason::not_noiseless;
    double residual = 0.0;
};

struct NoiselessnessReport {
    std::vector<FactorVerdict> verdicts;
    // Static-symmetry diagnostic: do the raw errors already lie in the
    // commutant (no decoupling needed)?
    bool raw_errors_in_commutant = false;
    double raw_commutant_residual = 0.0;
};

// Classifies each tensor factor of each block against the projected error
// operators Pi_G(E_alpha): a C_J factor is noiseless iff every projected
// error acts as a scalar on it; D_J factors see only 1 (x) ... action and are
// immune by construction. Errors must be traceless.
NoiselessnessReport classify_noiselessness(const DecouplingGroup& g,
                                           const SubsystemDecomposition& dec,
                                           const std::vector<Matrix>& errors,
                                           const NumericPolicy& policy = default_policy());

// --------------------------- Symmetric-group dimensions ---------------------

// dim(D_J) = (2J+1) n! / [(n/2+J+1)! (n/2-J)!] for the S_n action on n
// qubits; twice_j = 2J must have the parity of n and lie in [0, n].
long long symmetric_subsystem_dim(int n, int twice_j);

// --------------------------- Encoding ---------------------------------------

enum class Factor { commutant_C, group_D };

// Embed logical (x) cofactor through the block isometry. For the C factor the
// logical state has dim n_J and the cofactor dim d_J; for the D factor the
// roles swap.
Vector encode_into_factor(const SubsystemDecomposition& dec, int block_index, Factor which,
                          const Vector& logical_state, const Vector& cofactor_state);

// Reduced state on one factor of one block: compresses rho through the block
// isometry and traces out the other factor. Trace equals the block population
// (less than 1 if rho leaked out of the block).
Matrix reduced_factor_state(const SubsystemDecomposition& dec, int block_index, Factor which,
                            const Matrix& rho);

// Structured text export: per block (id, n_J, d_J) and the isometry entries.
std::string format_decomposition(const SubsystemDecomposition& dec);

}  // namespace dynss
