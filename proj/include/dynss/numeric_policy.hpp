#pragma once

namespace dynss {

// Central tolerance record. Every rank decision, equality test and residual
// check in the library reads from one of these knobs so that reruns are
// reproducible from a single place.
struct NumericPolicy {
    // SVD rank/nullspace cutoff, relative to the largest singular value.
    double svd_rel_cutoff = 1e-10;
    // max |H - H^dagger| entry allowed for "Hermitian" inputs.
    double hermiticity_tol = 1e-10;
    // max |U U^dagger - I| entry allowed for "unitary" inputs.
    double unitarity_tol = 1e-10;
    // Frobenius distance below which two phase-canonicalized group elements
    // are considered equal.
    double element_match_tol = 1e-8;
    // Minimum eigenvalue gap (after unit-scale normalization) accepted when
    // clustering spectra of random generic algebra elements.
    double eigenvalue_gap_tol = 1e-6;
    // 1 - cos(theta) threshold on principal angles for subspace intersection.
    double center_overlap_tol = 1e-8;
    // Residual bound on block-diagonal structure checks and span membership.
    double block_residual_tol = 1e-8;
    // Resampling budget for generic-element draws before DegeneracyError.
    int degeneracy_retries = 8;
};

inline const NumericPolicy& default_policy() {
    static const NumericPolicy p{};
    return p;
}

}  // namespace dynss
