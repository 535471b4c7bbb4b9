#include <doctest.h>

#include <algorithm>

#include "dynss/errors.hpp"
#include "dynss/pauli.hpp"
#include "test_helpers.hpp"

using namespace dynss;
using namespace dynss::testing;

namespace {

PauliString random_string(int n, Rng& rng) {
    const std::uint64_t mask = (1ULL << n) - 1;
    return PauliString(n, rng.next_u64() & mask, rng.next_u64() & mask,
                       static_cast<int>(rng.next_u64() & 3));
}

}  // namespace

TEST_CASE("pauli_mul: Z X = i Y (the pinned phase convention)") {
    const auto z = PauliString::single(1, 0, 'Z');
    const auto x = PauliString::single(1, 0, 'X');
    const auto zx = pauli_mul(z, x);
    CHECK(zx.str() == "+iY");
    CHECK(max_abs_diff(zx.materialize(), Complex(0, 1) * sigma_y()) < 1e-15);
}

TEST_CASE("pauli_mul: identity is neutral") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_string(4, rng);
        CHECK(pauli_mul(p, PauliString::identity(4)) == p);
        CHECK(pauli_mul(PauliString::identity(4), p) == p);
    }
}

TEST_CASE("pauli_mul: (X(x)Z)(Z(x)X) against the dense oracle") {
    const auto p = PauliString::parse("+XZ");
    const auto q = PauliString::parse("+ZX");
    const Matrix dense = p.materialize() * q.materialize();
    CHECK(max_abs_diff(pauli_mul(p, q).materialize(), dense) < 1e-15);
}

TEST_CASE("pauli_mul: materialization homomorphism on random strings") {
    Rng rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_string(3, rng);
        const auto q = random_string(3, rng);
        const Matrix dense = p.materialize() * q.materialize();
        CHECK(max_abs_diff(pauli_mul(p, q).materialize(), dense) < 1e-15);
    }
}

TEST_CASE("pauli_mul: associativity with phases is exact") {
    Rng rng(33);
    for (int n : {2, 4, 6})
        for (int trial = 0; trial < 30; ++trial) {
            const auto p = random_string(n, rng);
            const auto q = random_string(n, rng);
            const auto r = random_string(n, rng);
            CHECK(pauli_mul(pauli_mul(p, q), r) == pauli_mul(p, pauli_mul(q, r)));
        }
}

TEST_CASE("commutes: weight-two basics") {
    CHECK(commutes(PauliString::parse("+XX"), PauliString::parse("+ZZ")));
    CHECK_FALSE(commutes(PauliString::parse("+XI"), PauliString::parse("+ZI")));
}

TEST_CASE("commutes: exhaustive n=3 check against dense commutators") {
    std::vector<PauliString> all;
    for (std::uint64_t x = 0; x < 8; ++x)
        for (std::uint64_t z = 0; z < 8; ++z) all.emplace_back(3, x, z, 0);
    for (const auto& p : all) {
        const Matrix mp = p.materialize();
        for (const auto& q : all) {
            const Matrix mq = q.materialize();
            const bool dense = max_abs(Matrix(mp * mq - mq * mp)) < 1e-12;
            CHECK(commutes(p, q) == dense);
        }
    }
}

TEST_CASE("centralizer_strings: two-qubit stabilizer pair") {
    const auto found =
        centralizer_strings({PauliString::parse("+XX"), PauliString::parse("+ZZ")});
    REQUIRE(found.size() == 4);
    CHECK(found[0].str() == "+II");
    // Brute force over all 16 phase-free strings with the dense oracle.
    std::vector<PauliString> expected;
    const Matrix gx = PauliString::parse("+XX").materialize();
    const Matrix gz = PauliString::parse("+ZZ").materialize();
    for (std::uint64_t x = 0; x < 4; ++x)
        for (std::uint64_t z = 0; z < 4; ++z) {
            const PauliString s(2, x, z, 0);
            const Matrix m = s.materialize();
            if (max_abs(Matrix(m * gx - gx * m)) < 1e-12 &&
                max_abs(Matrix(m * gz - gz * m)) < 1e-12)
                expected.push_back(s);
        }
    std::sort(expected.begin(), expected.end(), PauliString::phase_free_less);
    REQUIRE(expected.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(found[k] == expected[k]);
    // The surviving site patterns are exactly II, XX, YY, ZZ.
    std::vector<std::string> names;
    for (const auto& s : found) names.push_back(s.str().substr(1));
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"II", "XX", "YY", "ZZ"});
}

TEST_CASE("centralizer_strings: collective flip generators on four qubits") {
    const auto found =
        centralizer_strings({PauliString(4, 0xF, 0, 0), PauliString(4, 0, 0xF, 0)});
    CHECK(found.size() == 64);  // 4^{n-1}
    // Every returned string commutes with both generators (dense re-check).
    const Matrix gx = PauliString(4, 0xF, 0, 0).materialize();
    const Matrix gz = PauliString(4, 0, 0xF, 0).materialize();
    for (const auto& s : found) {
        const Matrix m = s.materialize();
        CHECK(max_abs(Matrix(m * gx - gx * m)) < 1e-12);
        CHECK(max_abs(Matrix(m * gz - gz * m)) < 1e-12);
    }
}

TEST_CASE("centralizer_strings: counts for the flip generators") {
    for (int n : {2, 4, 6}) {
        const std::uint64_t all = (1ULL << n) - 1;
        const auto found =
            centralizer_strings({PauliString(n, all, 0, 0), PauliString(n, 0, all, 0)});
        CHECK(found.size() == (1ULL << (2 * n - 2)));  // 4^{n-1}
    }
}

TEST_CASE("centralizer_strings: empty generator set yields all strings") {
    CHECK(centralizer_strings({}, 2).size() == 16);
    CHECK(centralizer_strings({}, 3).size() == 64);
}

TEST_CASE("logical_generators_flip_code: n=4 pinned operators") {
    const auto logicals = logical_generators_flip_code(4);
    REQUIRE(logicals.x.size() == 2);
    REQUIRE(logicals.z.size() == 2);
    CHECK(logicals.x[0].str() == "+XXII");  // X_1 X_2
    CHECK(logicals.x[1].str() == "+XIXI");  // X_1 X_3
    CHECK(logicals.z[0].str() == "+IZIZ");  // Z_2 Z_4
    CHECK(logicals.z[1].str() == "+IIZZ");  // Z_3 Z_4
    // Overlap at qubit 2 makes the first pair anticommute.
    CHECK_FALSE(commutes(logicals.x[0], logicals.z[0]));
}

TEST_CASE("logical_generators_flip_code: encoded Pauli relations for n=4 and n=6") {
    for (int n : {4, 6}) {
        const auto logicals = logical_generators_flip_code(n);
        REQUIRE(logicals.x.size() == static_cast<std::size_t>(n - 2));
        const std::uint64_t all = (1ULL << n) - 1;
        const PauliString gx(n, all, 0, 0), gz(n, 0, all, 0);
        for (std::size_t j = 0; j < logicals.x.size(); ++j) {
            CHECK(commutes(logicals.x[j], gx));
            CHECK(commutes(logicals.x[j], gz));
            CHECK(commutes(logicals.z[j], gx));
            CHECK(commutes(logicals.z[j], gz));
            for (std::size_t k = 0; k < logicals.x.size(); ++k) {
                CHECK(commutes(logicals.x[j], logicals.x[k]));
                CHECK(commutes(logicals.z[j], logicals.z[k]));
                CHECK(commutes(logicals.x[j], logicals.z[k]) == (j != k));
            }
        }
    }
}

TEST_CASE("logical_generators_flip_code: preconditions") {
    CHECK_THROWS_AS(logical_generators_flip_code(3), PreconditionError);
    CHECK_THROWS_AS(logical_generators_flip_code(2), PreconditionError);
}

TEST_CASE("serialization: pinned strings materialize correctly") {
    const auto p = PauliString::parse("+XIZY");
    Matrix expected = kron(kron(kron(sigma_x(), identity(2)), sigma_z()), sigma_y());
    CHECK(max_abs_diff(p.materialize(), expected) < 1e-15);
    CHECK(p.str() == "+XIZY");

    CHECK(PauliString::parse("-iZ").str() == "-iZ");
    CHECK(max_abs_diff(PauliString::parse("-iZ").materialize(), Complex(0, -1) * sigma_z()) <
          1e-15);
}

TEST_CASE("serialization: bit-exact round trip on random strings") {
    Rng rng(44);
    for (int n : {1, 3, 7})
        for (int trial = 0; trial < 25; ++trial) {
            const auto p = random_string(n, rng);
            CHECK(PauliString::parse(p.str()) == p);
        }
}
