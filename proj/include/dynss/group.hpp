#pragma once

#include <string>
#include <vector>

#include "dynss/linalg.hpp"
#include "dynss/numeric_policy.hpp"

namespace dynss {

// Finite unitary group represented by canonical-phase matrices (one
// representative per global-phase coset). Element 0 is always the identity.
struct DecouplingGroup {
    int dim = 0;
    std::vector<Matrix> elements;
    std::vector<int> generator_indices;
    std::string name;

    int order() const { return static_cast<int>(elements.size()); }
};

// Orthonormal operator basis under <A,B> = tr(A^dag B)/dim.
enum class AlgebraTag { group_algebra, commutant, center };

struct AlgebraBasis {
    int dim = 0;
    std::vector<Matrix> basis_ops;
    AlgebraTag tag = AlgebraTag::group_algebra;

    int size() const { return static_cast<int>(basis_ops.size()); }
};

inline constexpr int kDefaultMaxGroupOrder = 10080;  // accommodates S_7

// Multiply a matrix by the phase that makes its first significant entry
// (row-major scan) real and positive.
Matrix canonical_phase(const Matrix& u);

// Breadth-first closure of the generators under products, identifying
// elements equal up to global phase. Throws GroupTooLargeError if the closure
// exceeds max_order (likely a continuous group).
DecouplingGroup close_group(const std::vector<Matrix>& generators,
                            int max_order = kDefaultMaxGroupOrder,
                            const NumericPolicy& policy = default_policy());

// Pi_G(X) = (1/|G|) sum_g g^dag X g; the projector onto the commutant of G.
Matrix project_onto_commutant(const Matrix& x, const DecouplingGroup& g);

// Orthonormalized span of the group elements.
AlgebraBasis group_algebra_basis(const DecouplingGroup& g,
                                 const NumericPolicy& policy = default_policy());

// Orthonormal basis of {O : [O, g] = 0 for all g}, from the joint nullspace
// of the generator commutator maps.
AlgebraBasis commutant_basis(const DecouplingGroup& g,
                             const NumericPolicy& policy = default_policy());

// Basis of span(group algebra) intersect span(commutant), via principal
// angles between the two vectorized subspaces.
AlgebraBasis center_basis(const DecouplingGroup& g,
                          const NumericPolicy& policy = default_policy());
AlgebraBasis center_basis(const AlgebraBasis& algebra, const AlgebraBasis& commutant,
                          const NumericPolicy& policy = default_policy());

// Squared-norm decomposition of X against an orthonormal basis: returns the
// residual HS norm of X minus its projection onto span(basis).
double span_residual(const Matrix& x, const AlgebraBasis& basis);

// Project X onto span(basis).
Matrix span_project(const Matrix& x, const AlgebraBasis& basis);

// --------------------------- Presets and group files ------------------------

// {X^(x)n, Z^(x)n} closure: {I, X^n, Y^n, Z^n} mod phase (order 4).
DecouplingGroup collective_flip_group(int n);

// Natural representation of S_n on (C^2)^(x)n from adjacent transpositions.
DecouplingGroup symmetric_group(int n);

// Trivial group {I} on n qubits.
DecouplingGroup trivial_group(int n);

// Full n-qubit Pauli group mod phase (4^n elements).
DecouplingGroup pauli_group(int n);

// Dispatch by preset name: collective_flips | symmetric_group | trivial | pauli.
DecouplingGroup make_preset_group(const std::string& preset, int n);

// Structured text document: either "preset <name> n <N>" or explicit
// generator matrices. See README for the exact format.
DecouplingGroup parse_group_spec(const std::string& text,
                                 const NumericPolicy& policy = default_policy());
std::string format_group_spec(const DecouplingGroup& g);

}  // namespace dynss
