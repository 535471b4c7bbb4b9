#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "dynss/numeric_policy.hpp"
#include "dynss/rng.hpp"

namespace dynss {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// --------------------------- Elementary operators ---------------------------

Matrix identity(int dim);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

// Single-site Pauli embedded in n qubits (site 0 = leftmost tensor factor).
// axis: 0 = x, 1 = y, 2 = z.
Matrix pauli_on_site(int n, int site, int axis);

// Collective generator sum_i sigma_axis^{(i)} on n qubits.
Matrix collective_pauli(int n, int axis);

// SWAP of qubits i and j on n qubits.
Matrix swap_gate(int n, int i, int j);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// Computational basis state |index> in `dim` dimensions.
Vector basis_state(int dim, int index);

// --------------------------- Checks and inner products ----------------------

bool is_hermitian(const Matrix& a, double tol);
bool is_unitary(const Matrix& a, double tol);

// Hilbert-Schmidt inner product with the 1/d normalization, <A,B> = tr(A^dag B)/d,
// under which the identity has unit norm.
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

Matrix commutator(const Matrix& a, const Matrix& b);

// --------------------------- Core operations --------------------------------

// exp(-i H t) for Hermitian H, via eigendecomposition.
// Throws HermiticityError if max |H - H^dag| entry exceeds policy tolerance.
Matrix matexp(const Matrix& h, double t, const NumericPolicy& policy = default_policy());

// Partial trace keeping the factors listed in `keep` (0-based positions into
// `dims`, which lists the tensor factors left to right, leftmost = most
// significant). Kept factors stay in their original order.
Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep,
                     const std::vector<int>& dims);

// <psi|rho|psi>, clamped to [0,1]. rho must be PSD with unit trace within
// tolerance; psi must be normalized.
double fidelity(const Vector& psi, const Matrix& rho,
                const NumericPolicy& policy = default_policy());

// --------------------------- Random objects ---------------------------------

Matrix random_hermitian(int dim, Rng& rng);
Vector random_state(int dim, Rng& rng);

}  // namespace dynss
