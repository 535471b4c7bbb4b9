#include <doctest.h>

#include <cmath>

#include "dynss/encoded.hpp"
#include "dynss/errors.hpp"
#include "dynss/group.hpp"
#include "test_helpers.hpp"

using namespace dynss;
using namespace dynss::testing;

namespace {

Matrix logical_pauli(int k, int qubit, int axis) {
    // Logical qubit 1 is the most significant factor of the 2^k codespace.
    Matrix out = identity(1 << (qubit - 1));
    out = kron(out, axis == 0 ? sigma_x() : (axis == 1 ? sigma_y() : sigma_z()));
    out = kron(out, identity(1 << (k - qubit)));
    return out;
}

}  // namespace

TEST_CASE("build_logical_frame: sizes and eigenspace membership") {
    for (int n : {4, 6}) {
        const auto frame = build_logical_frame(n, 0);
        CHECK(frame.logical_qubits() == n - 2);
        CHECK(frame.codespace_isometry.cols() == (1 << (n - 2)));
        const Matrix& v = frame.codespace_isometry;
        CHECK(max_abs_diff(v.adjoint() * v, identity(1 << (n - 2))) < 1e-12);

        const std::uint64_t all = (1ULL << n) - 1;
        const Matrix gx = PauliString(n, all, 0, 0).materialize();
        const Matrix gz = PauliString(n, 0, all, 0).materialize();
        CHECK(max_abs_diff(gx * v, v) < 1e-12);  // block 0: (+1, +1)
        CHECK(max_abs_diff(gz * v, v) < 1e-12);
    }
    CHECK_THROWS_AS(build_logical_frame(3, 0), PreconditionError);
    CHECK_THROWS_AS(build_logical_frame(4, 5), PreconditionError);
}

TEST_CASE("build_logical_frame: all four blocks carry the right eigenvalues") {
    const int n = 4;
    const Matrix gx = PauliString(n, 0xF, 0, 0).materialize();
    const Matrix gz = PauliString(n, 0, 0xF, 0).materialize();
    for (int block = 0; block < 4; ++block) {
        const auto frame = build_logical_frame(n, block);
        const double sx = (block & 2) ? -1.0 : 1.0;
        const double sz = (block & 1) ? -1.0 : 1.0;
        const Matrix& v = frame.codespace_isometry;
        CHECK(max_abs_diff(gx * v, sx * v) < 1e-12);
        CHECK(max_abs_diff(gz * v, sz * v) < 1e-12);
    }
}

TEST_CASE("logical operators lie in the Pauli centralizer of the stabilizers") {
    const int n = 4;
    const auto frame = build_logical_frame(n, 0);
    const auto centralizer =
        centralizer_strings({PauliString(n, 0xF, 0, 0), PauliString(n, 0, 0xF, 0)});
    auto contains = [&](const PauliString& p) {
        for (const auto& s : centralizer)
            if (s.x_bits() == p.x_bits() && s.z_bits() == p.z_bits()) return true;
        return false;
    };
    for (const auto& p : frame.logical_x) CHECK(contains(p));
    for (const auto& p : frame.logical_z) CHECK(contains(p));
}

TEST_CASE("encoded_gate_generator: x_rot 1 is X_1 X_2 and the frame sees logical X") {
    const int n = 4;
    const auto frame = build_logical_frame(n, 0);
    const Matrix gen = encoded_gate_generator(n, GateKind::x_rot, 1);
    CHECK(max_abs_diff(gen, PauliString::parse("+XXII").materialize()) < 1e-14);
    CHECK(max_abs_diff(logical_action(frame, gen), logical_pauli(2, 1, 0)) < 1e-12);
}

TEST_CASE("encoded_gate_generator: logical action matches the encoded Pauli algebra") {
    const int n = 4;
    const auto frame = build_logical_frame(n, 0);
    for (int j = 1; j <= 2; ++j) {
        CHECK(max_abs_diff(logical_action(frame, encoded_gate_generator(n, GateKind::x_rot, j)),
                           logical_pauli(2, j, 0)) < 1e-12);
        CHECK(max_abs_diff(logical_action(frame, encoded_gate_generator(n, GateKind::z_rot, j)),
                           logical_pauli(2, j, 2)) < 1e-12);
    }
    // Encoded products close with the right phases: Xbar_1 Zbar_1 = -i Ybar_1.
    const Matrix prod = logical_action(frame, encoded_gate_generator(n, GateKind::x_rot, 1) *
                                                  encoded_gate_generator(n, GateKind::z_rot, 1));
    CHECK(max_abs_diff(prod, Complex(0, -1) * logical_pauli(2, 1, 1)) < 1e-12);
}

TEST_CASE("encoded Pauli algebra closes exhaustively for n=4") {
    // Every product of the four logical generators compresses to the matching
    // two-qubit Pauli word, phases included.
    const int n = 4;
    const auto frame = build_logical_frame(n, 0);
    const auto logicals = logical_generators_flip_code(n);

    for (int mask = 0; mask < 16; ++mask) {
        PauliString phys = PauliString::identity(n);
        Matrix logical = identity(4);
        // Fixed word order: Xbar_1, Zbar_1, Xbar_2, Zbar_2.
        const PauliString* words[] = {&logicals.x[0], &logicals.z[0], &logicals.x[1],
                                      &logicals.z[1]};
        const Matrix factors[] = {logical_pauli(2, 1, 0), logical_pauli(2, 1, 2),
                                  logical_pauli(2, 2, 0), logical_pauli(2, 2, 2)};
        for (int k = 0; k < 4; ++k)
            if (mask & (1 << k)) {
                phys = pauli_mul(phys, *words[k]);
                logical = logical * factors[k];
            }
        CHECK(max_abs_diff(logical_action(frame, phys.materialize()), logical) < 1e-12);
    }
}

TEST_CASE("encoded_gate_generator: exchange commutes with the flip group") {
    const int n = 4;
    const auto g = collective_flip_group(n);
    const Matrix ex = encoded_gate_generator(n, GateKind::exchange, 1, 2);
    for (const auto& u : g.elements) CHECK(max_abs(commutator(ex, u)) < 1e-12);
    // Physically it is sigma_2 . sigma_3 (0-based sites 1 and 2).
    Matrix expected = Matrix::Zero(16, 16);
    for (int axis = 0; axis < 3; ++axis)
        expected += pauli_on_site(n, 1, axis) * pauli_on_site(n, 2, axis);
    CHECK(max_abs_diff(ex, expected) < 1e-14);
}

TEST_CASE("all gate generators preserve the codespace") {
    const int n = 4;
    const auto frame = build_logical_frame(n, 0);
    const Matrix& v = frame.codespace_isometry;
    const Matrix p_out = identity(16) - v * v.adjoint();
    for (const Matrix& gen :
         {encoded_gate_generator(n, GateKind::x_rot, 1), encoded_gate_generator(n, GateKind::z_rot, 2),
          encoded_gate_generator(n, GateKind::exchange, 1, 2)}) {
        const Matrix u = matexp(gen, 0.37);
        CHECK((p_out * u * v).norm() < 1e-10);
    }
}

TEST_CASE("encoded_swap_check: n=4 pair (1,2)") {
    const auto check = encoded_swap_check(4, 1, 2);
    CHECK(check.ok);
    CHECK(check.residual < 1e-10);
    CHECK_THROWS_AS(encoded_swap_check(4, 1, 1), PreconditionError);
}

TEST_CASE("encoded_swap_check: n=6 pairs and involution") {
    const auto check = encoded_swap_check(6, 2, 4);
    CHECK(check.ok);

    // Logical SWAP squared is the identity on the codespace.
    const auto frame = build_logical_frame(4, 0);
    const Matrix h = encoded_gate_generator(4, GateKind::exchange, 1, 2) - identity(16);
    const Matrix u = matexp(h, 3.14159265358979323846 / 4.0);
    const Matrix l = logical_action(frame, Matrix(u * u));
    const Complex phase = l(0, 0) / std::abs(l(0, 0));
    CHECK(max_abs_diff(l, phase * identity(4)) < 1e-10);
}

TEST_CASE("lie_closure_rank: su(2) from two anticommuting Paulis") {
    CHECK(lie_closure_rank({sigma_x(), sigma_z()}) == 3);
    CHECK(lie_closure_rank({sigma_z()}) == 1);
}

TEST_CASE("lie_closure_rank: encoded generator set reaches full su(4)") {
    const auto frame = build_logical_frame(4, 0);
    std::vector<Matrix> gens;
    for (int j = 1; j <= 2; ++j) {
        gens.push_back(logical_action(frame, encoded_gate_generator(4, GateKind::x_rot, j)));
        gens.push_back(logical_action(frame, encoded_gate_generator(4, GateKind::z_rot, j)));
    }
    gens.push_back(logical_action(frame, encoded_gate_generator(4, GateKind::exchange, 1, 2)));
    CHECK(lie_closure_rank(gens) >= 15);
}

TEST_CASE("run_encoded_circuit_under_decoupling: empty circuit, zero noise") {
    const auto frame = build_logical_frame(4, 0);
    const auto model = make_noise_model(4, 0, CouplingKind::independent, 0.0, 70);
    const auto result = run_encoded_circuit_under_decoupling(frame, {}, model, 0.25);
    CHECK(result.process_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_encoded_circuit_under_decoupling: commutant generators are transparent") {
    // A logical x rotation commutes with every pulse, so finite T_c cycling
    // is exactly invisible without noise.
    const auto frame = build_logical_frame(4, 0);
    const auto model = make_noise_model(4, 1, CouplingKind::independent, 0.0, 71);
    const std::vector<GateStep> circuit = {{GateKind::x_rot, 1, 2, 3.14159265358979323846, 0.0}};
    const auto result = run_encoded_circuit_under_decoupling(frame, circuit, model, 0.25);
    CHECK(result.process_fidelity > 1.0 - 1e-8);
}

TEST_CASE("run_encoded_circuit_under_decoupling: entangler fidelity rises as T_c falls") {
    const auto frame = build_logical_frame(4, 0);
    const auto model = make_noise_model(4, 1, CouplingKind::independent, 0.1, 3);
    // sqrt-of-swap bracketed by single-logical-qubit rotations; fixed gate
    // durations so each sweep point sees the same exposure time.
    const std::vector<GateStep> circuit = {
        {GateKind::x_rot, 1, 2, 1.5707963267948966, 8.0},
        {GateKind::exchange, 1, 2, 0.7853981633974483, 8.0},
        {GateKind::z_rot, 2, 2, 1.5707963267948966, 8.0},
    };
    double prev = -1.0;
    for (double tc : {0.8, 0.4, 0.2}) {
        const auto result = run_encoded_circuit_under_decoupling(frame, circuit, model, tc);
        CHECK(result.process_fidelity > prev);
        CHECK(result.process_fidelity > result.baseline_process_fidelity);
        prev = result.process_fidelity;
    }
}

TEST_CASE("run_encoded_circuit_under_decoupling: symmetry and duration guards") {
    const auto frame = build_logical_frame(4, 0);
    const auto model = make_noise_model(4, 0, CouplingKind::independent, 0.0, 72);
    // Too-short gate duration (below ten cycles).
    const std::vector<GateStep> fast = {{GateKind::x_rot, 1, 2, 0.3, 1.0}};
    CHECK_THROWS_AS(run_encoded_circuit_under_decoupling(frame, fast, model, 0.25),
                    PreconditionError);
}

TEST_CASE("j0_noiseless_qubit: dimension and invariance under collective rotations") {
    const auto verification = j0_noiseless_qubit(25, 0x9999);
    CHECK(verification.isometry.cols() == 2);
    CHECK(verification.max_infidelity < 1e-9);
    CHECK(verification.max_leakage < 1e-9);

    // The collective generators annihilate the J=0 column space.
    for (int axis = 0; axis < 3; ++axis)
        CHECK((collective_pauli(4, axis) * verification.isometry).norm() < 1e-9);
}
