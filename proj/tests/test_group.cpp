#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "dynss/errors.hpp"
#include "dynss/group.hpp"
#include "dynss/pauli.hpp"
#include "test_helpers.hpp"

using namespace dynss;
using namespace dynss::testing;

namespace {

// Phase-free match: both canonicalized, Frobenius distance.
bool same_mod_phase(const Matrix& a, const Matrix& b) {
    return (canonical_phase(a) - canonical_phase(b)).norm() < 1e-10;
}

}  // namespace

TEST_CASE("close_group: collective flips close to order four") {
    for (int n : {2, 4}) {
        const auto g = collective_flip_group(n);
        CHECK(g.order() == 4);
        const std::uint64_t all = (1ULL << n) - 1;
        const std::vector<PauliString> expected = {
            PauliString::identity(n), PauliString(n, all, 0, 0), PauliString(n, all, all, 0),
            PauliString(n, 0, all, 0)};
        for (const auto& s : expected) {
            bool found = false;
            for (const auto& e : g.elements) found = found || same_mod_phase(e, s.materialize());
            CHECK(found);
        }
    }
}

TEST_CASE("close_group: empty generator list gives the trivial group") {
    const auto g = close_group({});
    CHECK(g.order() == 1);
    CHECK(max_abs_diff(g.elements[0], identity(1)) < 1e-15);
}

TEST_CASE("close_group: S_4 from adjacent transpositions has order 24") {
    const auto g = symmetric_group(4);
    CHECK(g.order() == 24);
    for (const auto& e : g.elements) CHECK(is_unitary(e, 1e-10));
}

TEST_CASE("close_group: an incommensurate rotation exceeds the budget") {
    const Matrix gen = matexp(sigma_z(), 0.1);
    CHECK_THROWS_AS(close_group({gen}, 50), GroupTooLargeError);
}

TEST_CASE("close_group: non-unitary generator rejected") {
    CHECK_THROWS_AS(close_group({Matrix(2.0 * identity(2))}), PreconditionError);
}

TEST_CASE("project_onto_commutant: annihilates single-qubit Paulis under flips") {
    for (int n : {2, 4}) {
        const auto g = collective_flip_group(n);
        for (int site = 0; site < n; ++site)
            for (int axis = 0; axis < 3; ++axis)
                CHECK(max_abs(project_onto_commutant(pauli_on_site(n, site, axis), g)) < 1e-13);
    }
}

TEST_CASE("project_onto_commutant: identity is fixed") {
    const auto g = collective_flip_group(2);
    CHECK(max_abs_diff(project_onto_commutant(identity(4), g), identity(4)) < 1e-13);
}

TEST_CASE("project_onto_commutant: X(x)X under n=2 flips, summed by hand") {
    const auto g = collective_flip_group(2);
    const Matrix xx = PauliString::parse("+XX").materialize();
    // Oracle: conjugate by the four collective Paulis explicitly.
    Matrix oracle = Matrix::Zero(4, 4);
    for (const char* s : {"+II", "+XX", "+YY", "+ZZ"}) {
        const Matrix u = PauliString::parse(s).materialize();
        oracle += u.adjoint() * xx * u;
    }
    oracle /= 4.0;
    CHECK(max_abs_diff(project_onto_commutant(xx, g), oracle) < 1e-13);
    CHECK(max_abs_diff(project_onto_commutant(xx, g), xx) < 1e-13);
}

TEST_CASE("project_onto_commutant: idempotent, trace- and hermiticity-preserving") {
    Rng rng(55);
    const auto g = symmetric_group(3);
    const Matrix x = random_hermitian(8, rng);
    const Matrix px = project_onto_commutant(x, g);
    CHECK(max_abs_diff(project_onto_commutant(px, g), px) < 1e-10);
    CHECK(std::abs(px.trace() - x.trace()) < 1e-10);
    CHECK(is_hermitian(px, 1e-12));
    for (const auto& u : g.elements) CHECK(max_abs(commutator(px, u)) < 1e-10);
}

TEST_CASE("project_onto_commutant: invariant under phase choices on elements") {
    Rng rng(66);
    auto g = collective_flip_group(4);
    const Matrix x = random_hermitian(16, rng);
    const Matrix before = project_onto_commutant(x, g);
    for (std::size_t k = 0; k < g.elements.size(); ++k)
        g.elements[k] *= std::exp(Complex(0, rng.uniform(0, 6.28)));
    CHECK(max_abs_diff(project_onto_commutant(x, g), before) < 1e-12);
}

TEST_CASE("group_algebra_basis: dimensions") {
    CHECK(group_algebra_basis(collective_flip_group(4)).size() == 4);
    CHECK(group_algebra_basis(trivial_group(2)).size() == 1);

    // S_3 on three qubits: rank of the 6x6 permutation Gram matrix is the
    // oracle. tr(P_sigma^T P_tau) = 2^{cycles(sigma^-1 tau)}.
    const auto s3 = symmetric_group(3);
    Matrix gram(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            gram(i, j) = (s3.elements[i].adjoint() * s3.elements[j]).trace();
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    int rank = 0;
    for (int k = 0; k < 6; ++k)
        if (es.eigenvalues()(k) > 1e-9 * es.eigenvalues().maxCoeff()) ++rank;
    CHECK(group_algebra_basis(s3).size() == rank);
    CHECK(rank == 5);
}

TEST_CASE("group_algebra_basis: orthonormal and closed under products") {
    const auto basis = group_algebra_basis(symmetric_group(3));
    for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) {
            const Complex v = hs_inner(basis.basis_ops[i], basis.basis_ops[j]);
            CHECK(std::abs(v - (i == j ? Complex(1, 0) : Complex(0, 0))) < 1e-10);
        }
    for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j)
            CHECK(span_residual(basis.basis_ops[i] * basis.basis_ops[j], basis) < 1e-8);
}

TEST_CASE("commutant_basis: n=2 flips span {II, XX, YY, ZZ}") {
    const auto g = collective_flip_group(2);
    const auto basis = commutant_basis(g);
    REQUIRE(basis.size() == 4);
    for (const char* s : {"+II", "+XX", "+YY", "+ZZ"})
        CHECK(span_residual(PauliString::parse(s).materialize(), basis) < 1e-10);
}

TEST_CASE("commutant_basis: trivial group commutant is everything") {
    CHECK(commutant_basis(trivial_group(2)).size() == 16);
}

TEST_CASE("commutant_basis: n=4 flips match the Pauli centralizer count") {
    const auto g = collective_flip_group(4);
    const auto basis = commutant_basis(g);
    const auto strings =
        centralizer_strings({PauliString(4, 0xF, 0, 0), PauliString(4, 0, 0xF, 0)});
    CHECK(basis.size() == static_cast<int>(strings.size()));  // 64 = 4^{n-1}
    for (const auto& s : strings) CHECK(span_residual(s.materialize(), basis) < 1e-8);
    for (const auto& b : basis.basis_ops)
        for (const auto& u : g.elements) CHECK(max_abs(commutator(b, u)) < 1e-10);
}

TEST_CASE("center_basis: abelian flips have center equal to the group algebra") {
    const auto g = collective_flip_group(2);
    const auto center = center_basis(g);
    const auto algebra = group_algebra_basis(g);
    REQUIRE(center.size() == 4);
    for (const auto& b : center.basis_ops) CHECK(span_residual(b, algebra) < 1e-8);
    for (const auto& b : algebra.basis_ops) CHECK(span_residual(b, center) < 1e-8);
}

TEST_CASE("center_basis: trivial group and S_4") {
    CHECK(center_basis(trivial_group(2)).size() == 1);
    CHECK(center_basis(symmetric_group(4)).size() == 3);  // one per isotypic block
}

TEST_CASE("projector image equals the commutant span (superoperator check)") {
    const auto g = collective_flip_group(2);
    const int d = g.dim;
    // Superoperator of Pi_G acting on vec(X): sum_g (g^T (x) g^dag)/|G|.
    Matrix super = Matrix::Zero(d * d, d * d);
    for (const auto& u : g.elements) super += kron(Matrix(u.transpose()), Matrix(u.adjoint()));
    super /= static_cast<double>(g.order());

    const auto basis = commutant_basis(g);
    Matrix proj = Matrix::Zero(d * d, d * d);
    for (const auto& b : basis.basis_ops) {
        Vector v = Eigen::Map<const Vector>(b.data(), d * d);
        v /= v.norm();
        proj += v * v.adjoint();
    }
    CHECK(max_abs_diff(super, proj) < 1e-8);
}

TEST_CASE("flip group projector fixes every centralizer string (n=2 and 4)") {
    for (int n : {2, 4}) {
        const auto g = collective_flip_group(n);
        const std::uint64_t all = (1ULL << n) - 1;
        const auto strings =
            centralizer_strings({PauliString(n, all, 0, 0), PauliString(n, 0, all, 0)});
        for (const auto& s : strings) {
            const Matrix m = s.materialize();
            CHECK(max_abs_diff(project_onto_commutant(m, g), m) < 1e-12);
        }
    }
}

TEST_CASE("group spec documents: preset and explicit-generator round trip") {
    const auto preset = parse_group_spec("preset collective_flips n 2");
    CHECK(preset.order() == 4);

    const auto s3 = symmetric_group(3);
    const auto reparsed = parse_group_spec(format_group_spec(s3));
    CHECK(reparsed.order() == 6);

    CHECK_THROWS_AS(parse_group_spec("preset unknown n 2"), ConfigError);
    CHECK_THROWS_AS(parse_group_spec(""), ConfigError);
}
