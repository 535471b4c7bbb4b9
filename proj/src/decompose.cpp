#include "dynss/decompose.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dynss/errors.hpp"

namespace dynss {

namespace {

// Random Hermitian combination of (not necessarily Hermitian) basis ops.
Matrix random_hermitian_combo(const std::vector<Matrix>& ops, Rng& rng) {
    const int d = static_cast<int>(ops.front().rows());
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& op : ops) acc += Complex(rng.normal(), rng.normal()) * op;
    Matrix herm = 0.5 * (acc + acc.adjoint());  // new object; adjoint aliases
    const double scale = herm.cwiseAbs().maxCoeff();
    if (scale > 0) herm /= scale;
    return herm;
}

// Group sorted eigenvalues into clusters separated by more than gap_tol.
// Returns cluster extents as (start, size) pairs; empty when any gap inside
// the spectrum is ambiguous (handled by resampling).
std::vector<std::pair<int, int>> cluster_eigenvalues(const Eigen::VectorXd& vals,
                                                     double gap_tol) {
    std::vector<std::pair<int, int>> clusters;
    int start = 0;
    for (int k = 1; k <= vals.size(); ++k) {
        if (k == vals.size() || vals(k) - vals(k - 1) > gap_tol) {
            clusters.emplace_back(start, k - start);
            start = k;
        }
    }
    return clusters;
}

double min_intercluster_gap(const Eigen::VectorXd& vals,
                            const std::vector<std::pair<int, int>>& clusters) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < clusters.size(); ++c) {
        const int prev_end = clusters[c - 1].first + clusters[c - 1].second - 1;
        gap = std::min(gap, vals(clusters[c].first) - vals(prev_end));
    }
    return gap;
}

// Modified Gram-Schmidt keeping input order; drops columns below tol.
Matrix mgs_orthonormalize(const std::vector<Vector>& candidates, double tol) {
    std::vector<Vector> kept;
    for (const Vector& cand : candidates) {
        Vector v = cand;
        for (const Vector& u : kept) v -= (u.adjoint() * v).value() * u;
        // Second pass for numerical orthogonality.
        for (const Vector& u : kept) v -= (u.adjoint() * v).value() * u;
        const double norm = v.norm();
        if (norm > tol) kept.push_back(v / norm);
    }
    Matrix out(candidates.empty() ? 0 : candidates.front().size(),
               static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = kept[k];
    return out;
}

// Least-squares coefficients alpha with sum_i alpha_i ops_i s_col = targets.
// Stacks the action of every basis op on the given source vectors.
Matrix solve_algebra_element(const std::vector<Matrix>& ops, const Matrix& sources,
                             const Matrix& targets) {
    const Eigen::Index d = sources.rows();
    const Eigen::Index nsrc = sources.cols();
    Matrix lhs(d * nsrc, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (Eigen::Index s = 0; s < nsrc; ++s)
            lhs.block(s * d, static_cast<Eigen::Index>(i), d, 1) = ops[i] * sources.col(s);
    }
    Vector rhs(d * nsrc);
    for (Eigen::Index s = 0; s < nsrc; ++s) rhs.segment(s * d, d) = targets.col(s);
    const Vector alpha = lhs.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    const int dim = static_cast<int>(ops.front().rows());
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < ops.size(); ++i) out += alpha(static_cast<Eigen::Index>(i)) * ops[i];
    return out;
}

// Deviation of a square block from 1_{mult} (x) (tile) structure, with the
// major index running over copies. Returns {residual, averaged tile}.
std::pair<double, Matrix> project_identity_kron_tile(const Matrix& block, int mult,
                                                     int tile_dim) {
    Matrix tile = Matrix::Zero(tile_dim, tile_dim);
    for (int l = 0; l < mult; ++l)
        tile += block.block(l * tile_dim, l * tile_dim, tile_dim, tile_dim);
    tile /= static_cast<double>(mult);
    Matrix model = Matrix::Zero(block.rows(), block.cols());
    for (int l = 0; l < mult; ++l) model.block(l * tile_dim, l * tile_dim, tile_dim, tile_dim) = tile;
    return {(block - model).cwiseAbs().maxCoeff(), tile};
}

// Deviation from (tile) (x) 1_{d} structure (major index over copies).
std::pair<double, Matrix> project_tile_kron_identity(const Matrix& block, int mult,
                                                     int tile_dim) {
    Matrix tile = Matrix::Zero(mult, mult);
    for (int l = 0; l < mult; ++l)
        for (int lp = 0; lp < mult; ++lp) {
            Complex acc = 0.0;
            for (int m = 0; m < tile_dim; ++m) acc += block(l * tile_dim + m, lp * tile_dim + m);
            tile(l, lp) = acc / static_cast<double>(tile_dim);
        }
    Matrix model = Matrix::Zero(block.rows(), block.cols());
    for (int l = 0; l < mult; ++l)
        for (int lp = 0; lp < mult; ++lp)
            for (int m = 0; m < tile_dim; ++m) model(l * tile_dim + m, lp * tile_dim + m) = tile(l, lp);
    return {(block - model).cwiseAbs().maxCoeff(), tile};
}

void sort_blocks(std::vector<SubsystemBlock>& blocks) {
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const SubsystemBlock& a, const SubsystemBlock& b) {
                         const int da = a.multiplicity * a.irrep_dim;
                         const int db = b.multiplicity * b.irrep_dim;
                         if (da != db) return da > db;
                         return a.irrep_dim < b.irrep_dim;
                     });
    for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k].block_id = static_cast<int>(k);
}

SubsystemDecomposition assemble(int dim, std::vector<SubsystemBlock> blocks) {
    sort_blocks(blocks);
    SubsystemDecomposition dec;
    dec.dim = dim;
    dec.basis_change = Matrix(dim, dim);
    int col = 0;
    for (auto& b : blocks) {
        dec.basis_change.middleCols(col, b.isometry.cols()) = b.isometry;
        col += static_cast<int>(b.isometry.cols());
    }
    dec.blocks = std::move(blocks);
    return dec;
}

}  // namespace

SubsystemDecomposition decompose(const DecouplingGroup& g, std::uint64_t seed,
                                 const NumericPolicy& policy) {
    const int d = g.dim;
    if (d > 256) throw PreconditionError("decompose: dimension exceeds 256");

    const AlgebraBasis algebra = group_algebra_basis(g, policy);
    const AlgebraBasis commutant = commutant_basis(g, policy);
    const AlgebraBasis center = center_basis(algebra, commutant, policy);
    const int n_blocks = center.size();

    // Degenerate one-block limits admit a canonical identity basis: the
    // trivial algebra (everything is multiplicity) and the irreducible action
    // (everything is irrep).
    if (n_blocks == 1 && (algebra.size() == 1 || commutant.size() == 1)) {
        SubsystemBlock b;
        b.block_id = 0;
        b.multiplicity = algebra.size() == 1 ? d : 1;
        b.irrep_dim = algebra.size() == 1 ? 1 : d;
        b.isometry = Matrix::Identity(d, d);
        return assemble(d, {b});
    }

    Rng root(seed);
    std::string failure = "no attempts made";
    for (int attempt = 0; attempt < policy.degeneracy_retries; ++attempt) {
        Rng rng = root.split(static_cast<std::uint64_t>(attempt) + 1);

        // 1. Isotypic subspaces from a random Hermitian center element.
        const Matrix central = random_hermitian_combo(center.basis_ops, rng);
        Eigen::SelfAdjointEigenSolver<Matrix> ces(central);
        const auto clusters = cluster_eigenvalues(ces.eigenvalues(), policy.eigenvalue_gap_tol);
        if (static_cast<int>(clusters.size()) != n_blocks ||
            min_intercluster_gap(ces.eigenvalues(), clusters) < policy.eigenvalue_gap_tol) {
            failure = "central element spectrum did not separate isotypic blocks";
            continue;
        }

        std::vector<SubsystemBlock> blocks;
        bool ok = true;
        for (int j = 0; j < n_blocks && ok; ++j) {
            const Matrix q = ces.eigenvectors().middleCols(clusters[j].first, clusters[j].second);
            const int block_dim = static_cast<int>(q.cols());

            // 2. Split H_J by a random Hermitian commutant element: its
            // eigenspaces are the D_J copies, each of dimension d_J.
            int mult = 0, irrep = 0;
            Matrix ref_copy;  // block_dim x d_J, coordinates of Q
            bool split_ok = false;
            for (int inner = 0; inner < policy.degeneracy_retries && !split_ok; ++inner) {
                const Matrix k = random_hermitian_combo(commutant.basis_ops, rng);
                const Matrix a = q.adjoint() * k * q;
                Eigen::SelfAdjointEigenSolver<Matrix> aes(0.5 * (a + a.adjoint()));
                const auto sub = cluster_eigenvalues(aes.eigenvalues(), policy.eigenvalue_gap_tol);
                if (min_intercluster_gap(aes.eigenvalues(), sub) < policy.eigenvalue_gap_tol)
                    continue;
                const int size0 = sub.front().second;
                bool uniform = true;
                for (const auto& c : sub) uniform = uniform && (c.second == size0);
                if (!uniform || size0 * static_cast<int>(sub.size()) != block_dim) continue;
                mult = static_cast<int>(sub.size());
                irrep = size0;
                ref_copy = aes.eigenvectors().middleCols(sub.front().first, irrep);
                split_ok = true;
            }
            if (!split_ok) {
                failure = "commutant element spectrum did not split a block uniformly";
                ok = false;
                break;
            }

            // Reference copy of D_J in the full space.
            const Matrix s = q * ref_copy;  // d x d_J, orthonormal

            // 3a. C_J copies: commutant orbit of the first reference vector.
            std::vector<Vector> candidates;
            candidates.push_back(s.col(0));
            for (const auto& op : commutant.basis_ops) candidates.push_back(op * s.col(0));
            const Matrix c_basis = mgs_orthonormalize(candidates, 1e-6);
            if (c_basis.cols() != mult) {
                failure = "commutant orbit dimension disagrees with multiplicity";
                ok = false;
                break;
            }

            // 3b. Transport the D_J basis with group-algebra elements
            // A_m: s_1 -> s_m, s_{m'} -> 0 (m' != 1), so columns (l, m) are
            // A_m c_l. A_1 is the identity transport (kept implicit).
            SubsystemBlock b;
            b.multiplicity = mult;
            b.irrep_dim = irrep;
            b.isometry = Matrix(d, static_cast<Eigen::Index>(mult) * irrep);
            for (int l = 0; l < mult; ++l) b.isometry.col(static_cast<Eigen::Index>(l) * irrep) = c_basis.col(l);
            for (int m = 1; m < irrep; ++m) {
                Matrix targets = Matrix::Zero(d, irrep);
                targets.col(0) = s.col(m);
                const Matrix transport = solve_algebra_element(algebra.basis_ops, s, targets);
                for (int l = 0; l < mult; ++l)
                    b.isometry.col(static_cast<Eigen::Index>(l) * irrep + m) = transport * c_basis.col(l);
            }

            const double orth = (b.isometry.adjoint() * b.isometry -
                                 Matrix::Identity(b.isometry.cols(), b.isometry.cols()))
                                    .cwiseAbs()
                                    .maxCoeff();
            if (orth > policy.block_residual_tol) {
                failure = "transported block basis lost orthonormality";
                ok = false;
                break;
            }
            blocks.push_back(std::move(b));
        }
        if (!ok) continue;

        SubsystemDecomposition dec = assemble(d, std::move(blocks));
        const DecompositionResiduals res = verify_decomposition(g, dec, policy);
        if (res.group_structure > policy.block_residual_tol ||
            res.commutant_structure > policy.block_residual_tol) {
            failure = "block structure residual exceeded tolerance";
            continue;
        }
        return dec;
    }
    throw DegeneracyError("decompose: generic-element separation failed after " +
                          std::to_string(policy.degeneracy_retries) +
                          " attempts (last failure: " + failure + ")");
}

DecompositionResiduals verify_decomposition(const DecouplingGroup& g,
                                            const SubsystemDecomposition& dec,
                                            const NumericPolicy& policy) {
    DecompositionResiduals out;

    auto block_offsets = [&]() {
        std::vector<int> off(dec.blocks.size() + 1, 0);
        for (std::size_t k = 0; k < dec.blocks.size(); ++k)
            off[k + 1] = off[k] + dec.blocks[k].multiplicity * dec.blocks[k].irrep_dim;
        return off;
    }();

    auto structure_residual = [&](const Matrix& op, bool identity_kron_tile) {
        const Matrix conj = dec.basis_change.adjoint() * op * dec.basis_change;
        double worst = 0.0;
        for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
            const auto& b = dec.blocks[j];
            const int off = block_offsets[j];
            const int sz = b.multiplicity * b.irrep_dim;
            // Off-block coupling.
            for (std::size_t k = 0; k < dec.blocks.size(); ++k) {
                if (k == j) continue;
                worst = std::max(worst, conj.block(off, block_offsets[k], sz,
                                                   block_offsets[k + 1] - block_offsets[k])
                                            .cwiseAbs()
                                            .maxCoeff());
            }
            const Matrix diag = conj.block(off, off, sz, sz);
            const double dev = identity_kron_tile
                                   ? project_identity_kron_tile(diag, b.multiplicity, b.irrep_dim).first
                                   : project_tile_kron_identity(diag, b.multiplicity, b.irrep_dim).first;
            worst = std::max(worst, dev);
        }
        return worst;
    };

    for (const auto& u : g.elements)
        out.group_structure = std::max(out.group_structure, structure_residual(u, true));

    const AlgebraBasis commutant = commutant_basis(g, policy);
    for (const auto& op : commutant.basis_ops)
        out.commutant_structure = std::max(out.commutant_structure, structure_residual(op, false));

    return out;
}

// --------------------------- Noiselessness classification -------------------

const char* to_string(NoiselessReason r) {
    switch (r) {
        case NoiselessReason::projected_errors_vanish: return "projected_errors_vanish";
        case NoiselessReason::projected_errors_central: return "projected_errors_central";
        case NoiselessReason::errors_in_commutant_act_trivially_on_DJ:
            return "errors_in_commutant_act_trivially_on_DJ";
        case NoiselessReason::not_noiseless: return "not_noiseless";
    }
    return "unknown";
}

NoiselessnessReport classify_noiselessness(const DecouplingGroup& g,
                                           const SubsystemDecomposition& dec,
                                           const std::vector<Matrix>& errors,
                                           const NumericPolicy& policy) {
    for (const auto& e : errors) {
        if (e.rows() != g.dim || e.cols() != g.dim)
            throw ShapeError("classify_noiselessness: error dimension mismatch");
        const double scale = std::max(1.0, e.norm());
        if (std::abs(e.trace()) > 1e-10 * scale)
            throw PreconditionError("classify_noiselessness: error operator not traceless");
    }

    std::vector<Matrix> projected;
    for (const auto& e : errors) projected.push_back(project_onto_commutant(e, g));

    NoiselessnessReport report;

    // Static-symmetry diagnostic on the raw errors.
    const AlgebraBasis commutant = commutant_basis(g, policy);
    double raw = 0.0;
    for (const auto& e : errors) raw = std::max(raw, span_residual(e, commutant));
    report.raw_commutant_residual = raw;
    report.raw_errors_in_commutant = raw <= policy.block_residual_tol;

    std::vector<int> offsets(dec.blocks.size() + 1, 0);
    for (std::size_t k = 0; k < dec.blocks.size(); ++k)
        offsets[k + 1] = offsets[k] + dec.blocks[k].multiplicity * dec.blocks[k].irrep_dim;

    for (const auto& b : dec.blocks) {
        double c_central_dev = 0.0;   // deviation of the C-factor action from a scalar
        double c_total = 0.0;         // size of the C-factor action altogether
        double d_structure_dev = 0.0; // deviation of the block action from m (x) 1

        for (const auto& p : projected) {
            const Matrix compressed = b.isometry.adjoint() * p * b.isometry;
            auto [dev, tile] = project_tile_kron_identity(compressed, b.multiplicity, b.irrep_dim);
            d_structure_dev = std::max(d_structure_dev, dev);
            const Complex scalar = tile.trace() / static_cast<double>(b.multiplicity);
            const Matrix centered = tile - scalar * Matrix::Identity(b.multiplicity, b.multiplicity);
            c_central_dev = std::max({c_central_dev, centered.cwiseAbs().maxCoeff(), dev});
            c_total = std::max({c_total, compressed.cwiseAbs().maxCoeff()});
        }

        FactorVerdict c;
        c.block_id = b.block_id;
        c.factor = 'C';
        c.residual = c_central_dev;
        if (c_total <= policy.block_residual_tol) {
            c.noiseless = true;
            c.reason = NoiselessReason::projected_errors_vanish;
        } else if (c_central_dev <= policy.block_residual_tol) {
            c.noiseless = true;
            c.reason = NoiselessReason::projected_errors_central;
        } else {
            c.noiseless = false;
            c.reason = NoiselessReason::not_noiseless;
        }
        report.verdicts.push_back(c);

        FactorVerdict dv;
        dv.block_id = b.block_id;
        dv.factor = 'D';
        dv.residual = d_structure_dev;
        dv.noiseless = d_structure_dev <= policy.block_residual_tol;
        dv.reason = !dv.noiseless ? NoiselessReason::not_noiseless
                    : (c_total <= policy.block_residual_tol
                           ? NoiselessReason::projected_errors_vanish
                           : NoiselessReason::errors_in_commutant_act_trivially_on_DJ);
        report.verdicts.push_back(dv);
    }
    return report;
}

// --------------------------- Symmetric-group dimensions ---------------------

long long symmetric_subsystem_dim(int n, int twice_j) {
    if (n < 1) throw PreconditionError("symmetric_subsystem_dim: n must be >= 1");
    if (twice_j < 0 || twice_j > n || (twice_j % 2) != (n % 2))
        throw PreconditionError("symmetric_subsystem_dim: J out of range for n");
    // (2J+1) n! / [(n/2+J+1)! (n/2-J)!] = (2J+1) C(n, b) / a with
    // a = (n + 2J)/2 + 1, b = (n - 2J)/2.
    const long long a = (n + twice_j) / 2 + 1;
    const long long b = (n - twice_j) / 2;
    long long binom = 1;
    for (long long i = 1; i <= b; ++i) binom = binom * (n - b + i) / i;
    const long long num = (twice_j + 1) * binom;
    if (num % a != 0) throw Error("symmetric_subsystem_dim: internal arithmetic error");
    return num / a;
}

// --------------------------- Encoding ---------------------------------------

Vector encode_into_factor(const SubsystemDecomposition& dec, int block_index, Factor which,
                          const Vector& logical_state, const Vector& cofactor_state) {
    if (block_index < 0 || block_index >= dec.block_count())
        throw ShapeError("encode_into_factor: block index out of range");
    const auto& b = dec.blocks[block_index];
    const Vector& c_part = which == Factor::commutant_C ? logical_state : cofactor_state;
    const Vector& d_part = which == Factor::commutant_C ? cofactor_state : logical_state;
    if (c_part.size() != b.multiplicity || d_part.size() != b.irrep_dim)
        throw ShapeError("encode_into_factor: state dimensions do not match block");
    return b.isometry * kron(c_part, d_part);
}

Matrix reduced_factor_state(const SubsystemDecomposition& dec, int block_index, Factor which,
                            const Matrix& rho) {
    if (block_index < 0 || block_index >= dec.block_count())
        throw ShapeError("reduced_factor_state: block index out of range");
    const auto& b = dec.blocks[block_index];
    if (rho.rows() != dec.dim || rho.cols() != dec.dim)
        throw ShapeError("reduced_factor_state: rho dimension mismatch");
    const Matrix compressed = b.isometry.adjoint() * rho * b.isometry;
    const std::vector<int> dims = {b.multiplicity, b.irrep_dim};
    const std::vector<int> keep = {which == Factor::commutant_C ? 0 : 1};
    return partial_trace(compressed, keep, dims);
}

std::string format_decomposition(const SubsystemDecomposition& dec) {
    std::ostringstream out;
    out << "dynss-decomposition v1\n";
    out << "dim " << dec.dim << "\n";
    out << "blocks " << dec.block_count() << "\n";
    for (const auto& b : dec.blocks)
        out << "block " << b.block_id << " n_J " << b.multiplicity << " d_J " << b.irrep_dim
            << "\n";
    char buf[64];
    for (const auto& b : dec.blocks) {
        out << "isometry block " << b.block_id << " rows " << b.isometry.rows() << " cols "
            << b.isometry.cols() << "\n";
        for (Eigen::Index i = 0; i < b.isometry.rows(); ++i) {
            for (Eigen::Index j = 0; j < b.isometry.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", b.isometry(i, j).real(),
                              b.isometry(i, j).imag());
                out << buf << (j + 1 < b.isometry.cols() ? " " : "");
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace dynss
