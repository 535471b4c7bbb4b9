#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynss/linalg.hpp"

namespace dynss {

// Phase-tracked n-qubit Pauli operator in binary symplectic coordinates.
//
// Materialization convention: matrix = i^phase_pow * prod_j X_j^{x_j} Z_j^{z_j},
// with site 0 the leftmost tensor factor and bit j of x_bits/z_bits holding
// site j. Under this convention the letter Y (= sigma_y) carries x=z=1 and a
// +i phase contribution, so that Z*X = i sigma_y with the tracked phase.
class PauliString {
  public:
    PauliString() = default;
    PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits, int phase_pow = 0);

    // Identity string on n qubits.
    static PauliString identity(int n);
    // Single-letter string: letter in {'I','X','Y','Z'} at `site`, rest identity.
    static PauliString single(int n, int site, char letter);
    // Parse from text like "+XIZY", "-ZZ", "+iY", "-iXX". A missing prefix
    // means +1.
    static PauliString parse(const std::string& text);

    int n() const { return n_; }
    std::uint64_t x_bits() const { return x_; }
    std::uint64_t z_bits() const { return z_; }
    // Phase exponent p in i^p, p in {0,1,2,3}.
    int phase_pow() const { return phase_; }
    Complex phase() const;

    PauliString with_phase(int phase_pow) const;

    char letter(int site) const;
    // Text form "+XIZY" (phase prefix in {+,-,+i,-i}); round-trips exactly.
    std::string str() const;

    Matrix materialize() const;

    bool operator==(const PauliString& other) const;
    bool operator!=(const PauliString& other) const { return !(*this == other); }

    // Deterministic order ignoring phase: (z_bits, x_bits) as integers with
    // bit 0 = site 0. Used for canonical output ordering.
    static bool phase_free_less(const PauliString& a, const PauliString& b);

  private:
    int n_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int phase_ = 0;
};

// Exact product with tracked phase; materializations multiply exactly.
PauliString pauli_mul(const PauliString& p, const PauliString& q);

// True iff the materializations commute (symplectic inner product parity).
bool commutes(const PauliString& p, const PauliString& q);

// All 4^n phase-free strings commuting with every generator, in canonical
// (z_bits, x_bits) order. Computed as the GF(2) nullspace of the symplectic
// constraint system. Requires n <= 12. `n_hint` is only needed when the
// generator list is empty (result is then all 4^n strings).
std::vector<PauliString> centralizer_strings(const std::vector<PauliString>& generators,
                                             int n_hint = -1);

// Encoded Pauli observables for the collective spin-flip group on n qubits
// (n even, n >= 4): pairs Xbar_j = X_1 X_{j+1}, Zbar_j = Z_{j+1} Z_n for
// j = 1..n-2 (1-indexed sites).
struct FlipCodeLogicals {
    std::vector<PauliString> x;
    std::vector<PauliString> z;
};
FlipCodeLogicals logical_generators_flip_code(int n);

}  // namespace dynss
