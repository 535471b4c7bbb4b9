#include "dynss/group.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dynss/errors.hpp"
#include "dynss/pauli.hpp"

namespace dynss {

Matrix canonical_phase(const Matrix& u) {
    const double scale = u.cwiseAbs().maxCoeff();
    if (scale == 0.0) return u;
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            const Complex a = u(i, j);
            if (std::abs(a) > 1e-6 * scale) return (std::abs(a) / a) * u;
        }
    return u;
}

namespace {

// Cheap per-element fingerprint: inner products against two fixed pseudo-
// random vectors. Full Frobenius comparison only on fingerprint collision.
struct ElementIndex {
    Vector probe_u, probe_v;
    std::vector<Complex> prints;

    explicit ElementIndex(int dim) {
        Rng rng(0x9E3779B97F4A7C15ULL);
        probe_u = random_state(dim, rng);
        probe_v = random_state(dim, rng);
    }

    Complex fingerprint(const Matrix& m) const {
        return (probe_u.adjoint() * m * probe_v).value();
    }

    int find(const std::vector<Matrix>& elements, const Matrix& candidate,
             Complex print, double tol) const {
        for (std::size_t k = 0; k < elements.size(); ++k) {
            if (std::abs(prints[k] - print) > 1e-6) continue;
            if ((elements[k] - candidate).norm() < tol) return static_cast<int>(k);
        }
        return -1;
    }
};

}  // namespace

DecouplingGroup close_group(const std::vector<Matrix>& generators, int max_order,
                            const NumericPolicy& policy) {
    int dim = generators.empty() ? 1 : static_cast<int>(generators.front().rows());
    for (const auto& g : generators) {
        if (g.rows() != g.cols() || g.rows() != dim)
            throw ShapeError("close_group: generators must be square with equal dims");
        if (!is_unitary(g, policy.unitarity_tol))
            throw PreconditionError("close_group: generator not unitary within tolerance");
    }

    DecouplingGroup group;
    group.dim = dim;
    ElementIndex index(dim);

    auto add = [&](const Matrix& m) -> int {
        const Matrix canon = canonical_phase(m);
        const Complex print = index.fingerprint(canon);
        const int found = index.find(group.elements, canon, print, policy.element_match_tol);
        if (found >= 0) return found;
        if (group.order() >= max_order)
            throw GroupTooLargeError(
                "close_group: closure exceeds max_order; group may be continuous");
        group.elements.push_back(canon);
        index.prints.push_back(print);
        return group.order() - 1;
    };

    add(Matrix::Identity(dim, dim));
    for (const auto& g : generators) group.generator_indices.push_back(add(g));

    for (std::size_t head = 0; head < group.elements.size(); ++head) {
        for (const auto& g : generators) {
            const Matrix product = group.elements[head] * g;
            add(product);
        }
    }
    return group;
}

Matrix project_onto_commutant(const Matrix& x, const DecouplingGroup& g) {
    if (x.rows() != g.dim || x.cols() != g.dim)
        throw ShapeError("project_onto_commutant: dimension mismatch");
    Matrix acc = Matrix::Zero(g.dim, g.dim);
    for (const auto& u : g.elements) acc += u.adjoint() * x * u;
    return acc / static_cast<double>(g.order());
}

namespace {

// vec(A) with column-major flattening (Eigen default): vec(AXB) = (B^T x A) vec(X).
Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, int dim) {
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

AlgebraBasis basis_from_vec_columns(const Matrix& columns, int dim, AlgebraTag tag) {
    AlgebraBasis out;
    out.dim = dim;
    out.tag = tag;
    const double root_d = std::sqrt(static_cast<double>(dim));
    for (Eigen::Index k = 0; k < columns.cols(); ++k)
        out.basis_ops.push_back(root_d * unvec(columns.col(k), dim));
    return out;
}

// Orthonormal columns (standard inner product) spanning the vectorized ops.
Matrix orthonormal_span(const std::vector<Matrix>& ops, int dim, double rel_cutoff) {
    Matrix stacked(static_cast<Eigen::Index>(dim) * dim, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t k = 0; k < ops.size(); ++k) stacked.col(static_cast<Eigen::Index>(k)) = vec(ops[k]);
    Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv(0) * rel_cutoff : 0.0;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace

AlgebraBasis group_algebra_basis(const DecouplingGroup& g, const NumericPolicy& policy) {
    const Matrix span = orthonormal_span(g.elements, g.dim, policy.svd_rel_cutoff);
    return basis_from_vec_columns(span, g.dim, AlgebraTag::group_algebra);
}

AlgebraBasis commutant_basis(const DecouplingGroup& g, const NumericPolicy& policy) {
    const int d = g.dim;
    const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;

    std::vector<const Matrix*> gens;
    for (int idx : g.generator_indices) gens.push_back(&g.elements[idx]);

    if (gens.empty()) {
        // Trivial group: everything commutes.
        return basis_from_vec_columns(Matrix::Identity(d2, d2), d, AlgebraTag::commutant);
    }

    // Stack superoperators of O -> Og - gO; commutant = joint nullspace.
    Matrix stacked(static_cast<Eigen::Index>(gens.size()) * d2, d2);
    const Matrix eye = Matrix::Identity(d, d);
    for (std::size_t k = 0; k < gens.size(); ++k) {
        const Matrix& u = *gens[k];
        stacked.middleRows(static_cast<Eigen::Index>(k) * d2, d2) =
            kron(u.transpose(), eye) - kron(eye, u);
    }
    Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv(0) * policy.svd_rel_cutoff : 0.0;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    const Matrix null_cols = svd.matrixV().rightCols(d2 - rank);
    return basis_from_vec_columns(null_cols, d, AlgebraTag::commutant);
}

AlgebraBasis center_basis(const AlgebraBasis& algebra, const AlgebraBasis& commutant,
                          const NumericPolicy& policy) {
    if (algebra.dim != commutant.dim) throw ShapeError("center_basis: dimension mismatch");
    const int d = algebra.dim;
    const double root_d = std::sqrt(static_cast<double>(d));

    auto vec_columns = [&](const AlgebraBasis& b) {
        Matrix cols(static_cast<Eigen::Index>(d) * d, b.size());
        for (int k = 0; k < b.size(); ++k) cols.col(k) = vec(b.basis_ops[k]) / root_d;
        return cols;
    };
    const Matrix va = vec_columns(algebra);
    const Matrix vc = vec_columns(commutant);

    // Principal angles: singular values of Va^dag Vc are cos(theta_k);
    // intersection directions have cos(theta) ~ 1.
    Eigen::BDCSVD<Matrix> svd(va.adjoint() * vc, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int count = 0;
    while (count < sv.size() && sv(count) > 1.0 - policy.center_overlap_tol) ++count;
    const Matrix isect = va * svd.matrixU().leftCols(count);
    return basis_from_vec_columns(isect, d, AlgebraTag::center);
}

AlgebraBasis center_basis(const DecouplingGroup& g, const NumericPolicy& policy) {
    return center_basis(group_algebra_basis(g, policy), commutant_basis(g, policy), policy);
}

Matrix span_project(const Matrix& x, const AlgebraBasis& basis) {
    if (x.rows() != basis.dim || x.cols() != basis.dim)
        throw ShapeError("span_project: dimension mismatch");
    Matrix acc = Matrix::Zero(basis.dim, basis.dim);
    for (const auto& b : basis.basis_ops) acc += hs_inner(b, x) * b;
    return acc;
}

double span_residual(const Matrix& x, const AlgebraBasis& basis) {
    return hs_norm(x - span_project(x, basis));
}

// --------------------------- Presets and group files ------------------------

DecouplingGroup collective_flip_group(int n) {
    if (n < 1) throw PreconditionError("collective_flip_group: n must be >= 1");
    const std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    std::vector<Matrix> gens = {PauliString(n, all, 0, 0).materialize(),
                                PauliString(n, 0, all, 0).materialize()};
    DecouplingGroup g = close_group(gens);
    g.name = "collective_flips";
    return g;
}

DecouplingGroup symmetric_group(int n) {
    if (n < 1) throw PreconditionError("symmetric_group: n must be >= 1");
    if (n > 7) throw GroupTooLargeError("symmetric_group: order exceeds the element budget");
    std::vector<Matrix> gens;
    for (int i = 0; i + 1 < n; ++i) gens.push_back(swap_gate(n, i, i + 1));
    DecouplingGroup g = close_group(gens);
    g.name = "symmetric_group";
    return g;
}

DecouplingGroup trivial_group(int n) {
    if (n < 1) throw PreconditionError("trivial_group: n must be >= 1");
    DecouplingGroup g;
    g.dim = 1 << n;
    g.elements = {Matrix::Identity(g.dim, g.dim)};
    g.name = "trivial";
    return g;
}

DecouplingGroup pauli_group(int n) {
    if (n < 1 || n > 6) throw PreconditionError("pauli_group: n must be in 1..6");
    std::vector<Matrix> gens;
    for (int i = 0; i < n; ++i) {
        gens.push_back(PauliString::single(n, i, 'X').materialize());
        gens.push_back(PauliString::single(n, i, 'Z').materialize());
    }
    DecouplingGroup g = close_group(gens);
    g.name = "pauli";
    return g;
}

DecouplingGroup make_preset_group(const std::string& preset, int n) {
    if (preset == "collective_flips") return collective_flip_group(n);
    if (preset == "symmetric_group") return symmetric_group(n);
    if (preset == "trivial") return trivial_group(n);
    if (preset == "pauli") return pauli_group(n);
    throw ConfigError("unknown group preset: " + preset);
}

DecouplingGroup parse_group_spec(const std::string& text, const NumericPolicy& policy) {
    std::istringstream in(text);
    std::string keyword;
    if (!(in >> keyword)) throw ConfigError("parse_group_spec: empty document");

    if (keyword == "preset") {
        std::string name, nkey;
        int n = 0;
        if (!(in >> name >> nkey >> n) || nkey != "n")
            throw ConfigError("parse_group_spec: expected 'preset <name> n <N>'");
        return make_preset_group(name, n);
    }
    if (keyword == "generators") {
        std::string dkey, ckey;
        int d = 0, count = 0;
        if (!(in >> dkey >> d >> ckey >> count) || dkey != "d" || ckey != "count")
            throw ConfigError("parse_group_spec: expected 'generators d <D> count <K>'");
        if (d < 1 || count < 0) throw ConfigError("parse_group_spec: bad dimensions");
        std::vector<Matrix> gens;
        for (int k = 0; k < count; ++k) {
            Matrix m(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double re = 0.0, im = 0.0;
                    if (!(in >> re >> im))
                        throw ConfigError("parse_group_spec: truncated matrix data");
                    m(i, j) = Complex(re, im);
                }
            gens.push_back(m);
        }
        DecouplingGroup g = close_group(gens, kDefaultMaxGroupOrder, policy);
        g.name = "custom";
        return g;
    }
    throw ConfigError("parse_group_spec: unknown keyword '" + keyword + "'");
}

std::string format_group_spec(const DecouplingGroup& g) {
    std::ostringstream out;
    out << "generators d " << g.dim << " count " << g.generator_indices.size() << "\n";
    char buf[64];
    for (int idx : g.generator_indices) {
        const Matrix& m = g.elements[idx];
        for (int i = 0; i < g.dim; ++i) {
            for (int j = 0; j < g.dim; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, j).real(), m(i, j).imag());
                out << buf << (j + 1 < g.dim ? " " : "");
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace dynss
