#include "dynss/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dynss/errors.hpp"

namespace dynss {

// --------------------------- Elementary operators ---------------------------

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

static const Matrix& pauli_by_axis(int axis) {
    static const Matrix px = sigma_x();
    static const Matrix py = sigma_y();
    static const Matrix pz = sigma_z();
    switch (axis) {
        case 0: return px;
        case 1: return py;
        default: return pz;
    }
}

Matrix pauli_on_site(int n, int site, int axis) {
    if (site < 0 || site >= n) throw ShapeError("pauli_on_site: site out of range");
    if (axis < 0 || axis > 2) throw ShapeError("pauli_on_site: axis must be 0, 1 or 2");
    Matrix out = identity(1 << site);
    out = kron(out, pauli_by_axis(axis));
    out = kron(out, identity(1 << (n - site - 1)));
    return out;
}

Matrix collective_pauli(int n, int axis) {
    const int d = 1 << n;
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i) out += pauli_on_site(n, i, axis);
    return out;
}

Matrix swap_gate(int n, int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
        throw ShapeError("swap_gate: invalid qubit pair");
    const int d = 1 << n;
    // Site 0 is the leftmost factor, i.e. the most significant bit.
    const int bi = n - 1 - i;
    const int bj = n - 1 - j;
    Matrix out = Matrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
        const int vi = (b >> bi) & 1;
        const int vj = (b >> bj) & 1;
        int target = b & ~(1 << bi) & ~(1 << bj);
        target |= vi << bj;
        target |= vj << bi;
        out(target, b) = 1.0;
    }
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Vector basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw ShapeError("basis_state: index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return v;
}

// --------------------------- Checks and inner products ----------------------

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const Matrix g = a * a.adjoint();
    return (g - Matrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() <= tol;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("hs_inner: dimension mismatch");
    return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

double hs_norm(const Matrix& a) { return std::sqrt(std::abs(hs_inner(a, a))); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// --------------------------- Core operations --------------------------------

Matrix matexp(const Matrix& h, double t, const NumericPolicy& policy) {
    if (h.rows() != h.cols()) throw ShapeError("matexp: matrix not square");
    if (!is_hermitian(h, policy.hermiticity_tol))
        throw HermiticityError("matexp: generator not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd& w = es.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -w(k) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep,
                     const std::vector<int>& dims) {
    if (rho.rows() != rho.cols()) throw ShapeError("partial_trace: rho not square");
    if (keep.empty()) throw ShapeError("partial_trace: keep set empty");
    long long total = 1;
    for (int d : dims) {
        if (d <= 0) throw ShapeError("partial_trace: nonpositive factor dimension");
        total *= d;
    }
    if (total != rho.rows()) throw ShapeError("partial_trace: dims inconsistent with rho");

    const int nf = static_cast<int>(dims.size());
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw ShapeError("partial_trace: keep index out of range");
        kept[k] = true;
    }

    int dim_keep = 1, dim_trace = 1;
    for (int f = 0; f < nf; ++f) (kept[f] ? dim_keep : dim_trace) *= dims[f];

    // Strides of each factor in the mixed-radix flat index (factor 0 most
    // significant).
    std::vector<long long> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    // Flat index = keep_part + trace_part, each enumerated in original factor
    // order.
    std::vector<int> keep_factors, trace_factors;
    for (int f = 0; f < nf; ++f) (kept[f] ? keep_factors : trace_factors).push_back(f);

    auto expand = [&](const std::vector<int>& factors, int composite) {
        long long flat = 0;
        for (int idx = static_cast<int>(factors.size()) - 1; idx >= 0; --idx) {
            const int f = factors[idx];
            flat += static_cast<long long>(composite % dims[f]) * stride[f];
            composite /= dims[f];
        }
        return flat;
    };

    std::vector<long long> keep_offset(dim_keep), trace_offset(dim_trace);
    for (int i = 0; i < dim_keep; ++i) keep_offset[i] = expand(keep_factors, i);
    for (int i = 0; i < dim_trace; ++i) trace_offset[i] = expand(trace_factors, i);

    Matrix out = Matrix::Zero(dim_keep, dim_keep);
    for (int r = 0; r < dim_keep; ++r)
        for (int c = 0; c < dim_keep; ++c) {
            Complex sum = 0.0;
            for (int tdx = 0; tdx < dim_trace; ++tdx)
                sum += rho(keep_offset[r] + trace_offset[tdx],
                           keep_offset[c] + trace_offset[tdx]);
            out(r, c) = sum;
        }
    return out;
}

double fidelity(const Vector& psi, const Matrix& rho, const NumericPolicy& policy) {
    if (psi.size() != rho.rows() || rho.rows() != rho.cols())
        throw ShapeError("fidelity: dimension mismatch");
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if (!is_hermitian(rho, 1e-10 * scale))
        throw PreconditionError("fidelity: rho not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw PreconditionError("fidelity: rho trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        throw PreconditionError("fidelity: rho not positive semidefinite");
    (void)policy;
    const double f = (psi.adjoint() * rho * psi).value().real();
    return std::clamp(f, 0.0, 1.0);
}

// --------------------------- Random objects ---------------------------------

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
    return 0.5 * (a + a.adjoint());
}

Vector random_state(int dim, Rng& rng) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal());
    v.normalize();
    return v;
}

}  // namespace dynss
