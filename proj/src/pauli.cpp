#include "dynss/pauli.hpp"

#include <algorithm>
#include <bit>

#include "dynss/errors.hpp"

namespace dynss {

PauliString::PauliString(int n, std::uint64_t x_bits, std::uint64_t z_bits, int phase_pow)
    : n_(n), x_(x_bits), z_(z_bits), phase_(((phase_pow % 4) + 4) % 4) {
    if (n < 0 || n > 63) throw ShapeError("PauliString: qubit count out of range");
    const std::uint64_t mask = n == 0 ? 0 : (~0ULL >> (64 - n));
    if ((x_ & ~mask) || (z_ & ~mask))
        throw ShapeError("PauliString: bits set beyond qubit count");
}

PauliString PauliString::identity(int n) { return PauliString(n, 0, 0, 0); }

PauliString PauliString::single(int n, int site, char letter) {
    if (site < 0 || site >= n) throw ShapeError("PauliString::single: site out of range");
    const std::uint64_t bit = 1ULL << site;
    switch (letter) {
        case 'I': return PauliString(n, 0, 0, 0);
        case 'X': return PauliString(n, bit, 0, 0);
        case 'Z': return PauliString(n, 0, bit, 0);
        case 'Y': return PauliString(n, bit, bit, 1);  // sigma_y = i X Z
        default: throw ShapeError("PauliString::single: letter must be I, X, Y or Z");
    }
}

PauliString PauliString::parse(const std::string& text) {
    std::size_t pos = 0;
    int phase = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        phase = text[pos] == '-' ? 2 : 0;
        ++pos;
        if (pos < text.size() && text[pos] == 'i') {
            phase += 1;
            ++pos;
        }
    }
    const int n = static_cast<int>(text.size() - pos);
    if (n <= 0) throw ShapeError("PauliString::parse: no site letters");
    std::uint64_t x = 0, z = 0;
    for (int j = 0; j < n; ++j) {
        switch (text[pos + j]) {
            case 'I': break;
            case 'X': x |= 1ULL << j; break;
            case 'Z': z |= 1ULL << j; break;
            case 'Y':
                x |= 1ULL << j;
                z |= 1ULL << j;
                phase += 1;
                break;
            default: throw ShapeError("PauliString::parse: invalid letter");
        }
    }
    return PauliString(n, x, z, phase);
}

Complex PauliString::phase() const {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
}

PauliString PauliString::with_phase(int phase_pow) const {
    return PauliString(n_, x_, z_, phase_pow);
}

char PauliString::letter(int site) const {
    const bool x = (x_ >> site) & 1;
    const bool z = (z_ >> site) & 1;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
}

std::string PauliString::str() const {
    // Each Y letter absorbs one factor of i from the X^x Z^z convention.
    int shown = phase_;
    std::string body;
    body.reserve(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        const char c = letter(j);
        if (c == 'Y') shown -= 1;
        body.push_back(c);
    }
    shown = ((shown % 4) + 4) % 4;
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    return prefix[shown] + body;
}

Matrix PauliString::materialize() const {
    Matrix out = Matrix::Identity(1, 1);
    static const Matrix x_mat = sigma_x();
    static const Matrix z_mat = sigma_z();
    for (int j = 0; j < n_; ++j) {
        Matrix site = Matrix::Identity(2, 2);
        if ((x_ >> j) & 1) site = x_mat * site;
        if ((z_ >> j) & 1) site = site * z_mat;  // X applied left of Z
        out = kron(out, site);
    }
    return phase() * out;
}

bool PauliString::operator==(const PauliString& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_ && phase_ == other.phase_;
}

bool PauliString::phase_free_less(const PauliString& a, const PauliString& b) {
    if (a.z_ != b.z_) return a.z_ < b.z_;
    return a.x_ < b.x_;
}

PauliString pauli_mul(const PauliString& p, const PauliString& q) {
    if (p.n() != q.n()) throw ShapeError("pauli_mul: qubit counts differ");
    // Commuting Z^z past X^x' contributes (-1)^|z & x'|.
    const int swaps = std::popcount(p.z_bits() & q.x_bits()) & 1;
    const int phase = p.phase_pow() + q.phase_pow() + 2 * swaps;
    return PauliString(p.n(), p.x_bits() ^ q.x_bits(), p.z_bits() ^ q.z_bits(), phase);
}

bool commutes(const PauliString& p, const PauliString& q) {
    if (p.n() != q.n()) throw ShapeError("commutes: qubit counts differ");
    const int parity = (std::popcount(p.x_bits() & q.z_bits()) +
                        std::popcount(p.z_bits() & q.x_bits())) &
                       1;
    return parity == 0;
}

std::vector<PauliString> centralizer_strings(const std::vector<PauliString>& generators,
                                             int n_hint) {
    int n = n_hint;
    for (const auto& g : generators) {
        if (n < 0) n = g.n();
        if (g.n() != n) throw ShapeError("centralizer_strings: mixed qubit counts");
    }
    if (n < 0) throw ShapeError("centralizer_strings: qubit count unknown for empty input");
    if (n < 1 || n > 12) throw PreconditionError("centralizer_strings: n must be in 1..12");

    // A string (x, z) commutes with generator (gx, gz) iff
    // <x, gz> + <z, gx> = 0 over GF(2). Solve for the nullspace basis of the
    // stacked constraints on the 2n-bit vector (x | z).
    std::vector<std::uint64_t> rows;
    for (const auto& g : generators) {
        // Row acts on (x | z) via masks (gz | gx).
        rows.push_back(g.z_bits() | (g.x_bits() << n));
    }

    // Gaussian elimination to row echelon form over the 2n columns.
    const int cols = 2 * n;
    std::vector<int> pivot_col;
    std::vector<std::uint64_t> echelon;
    for (std::uint64_t row : rows) {
        for (std::size_t r = 0; r < echelon.size(); ++r)
            if (row & (1ULL << pivot_col[r])) row ^= echelon[r];
        if (row == 0) continue;
        const int pc = std::countr_zero(row);
        echelon.push_back(row);
        pivot_col.push_back(pc);
    }
    // Back-substitute so pivot columns appear in exactly one row.
    for (std::size_t r = 0; r < echelon.size(); ++r)
        for (std::size_t s = 0; s < echelon.size(); ++s)
            if (s != r && (echelon[s] & (1ULL << pivot_col[r]))) echelon[s] ^= echelon[r];

    std::vector<bool> is_pivot(cols, false);
    for (int pc : pivot_col) is_pivot[pc] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    // Nullspace basis vector for each free column.
    std::vector<std::uint64_t> basis;
    for (int fc : free_cols) {
        std::uint64_t v = 1ULL << fc;
        for (std::size_t r = 0; r < echelon.size(); ++r)
            if (echelon[r] & (1ULL << fc)) v |= 1ULL << pivot_col[r];
        basis.push_back(v);
    }

    const std::uint64_t mask = n == 0 ? 0 : (~0ULL >> (64 - n));
    std::vector<PauliString> out;
    out.reserve(1ULL << basis.size());
    const std::uint64_t count = 1ULL << basis.size();
    for (std::uint64_t sel = 0; sel < count; ++sel) {
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < basis.size(); ++b)
            if ((sel >> b) & 1) v ^= basis[b];
        out.emplace_back(n, (v >> n) & mask, v & mask, 0);
    }
    std::sort(out.begin(), out.end(), PauliString::phase_free_less);
    return out;
}

FlipCodeLogicals logical_generators_flip_code(int n) {
    if (n < 4 || n % 2 != 0)
        throw PreconditionError("logical_generators_flip_code: n must be even and >= 4");
    FlipCodeLogicals out;
    for (int j = 1; j <= n - 2; ++j) {
        // Xbar_j = X_1 X_{j+1}, Zbar_j = Z_{j+1} Z_n (sites 1-indexed).
        out.x.push_back(PauliString(n, (1ULL << 0) | (1ULL << j), 0, 0));
        out.z.push_back(PauliString(n, 0, (1ULL << j) | (1ULL << (n - 1)), 0));
    }
    return out;
}

}  // namespace dynss
