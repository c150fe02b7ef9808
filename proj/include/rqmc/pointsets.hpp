#pragma once

// Randomized low-discrepancy point sets: rank-1 Korobov lattices with a
// random odd multiplier and Cranley-Patterson shift, and base-2 Sobol' nets
// with linear matrix scrambling and a 53-bit digital shift. Points are
// emitted in natural index order.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqmc/random.hpp"
#include "rqmc/sobol_table.hpp"

namespace rqmc {

/// n points in [0,1)^d, row-major.
struct PointSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> coords;

    PointSet() = default;
    PointSet(std::size_t n_, std::size_t d_) : n(n_), d(d_), coords(n_ * d_) {}

    std::span<const double> point(std::size_t i) const { return {coords.data() + i * d, d}; }
    std::span<double> point(std::size_t i) { return {coords.data() + i * d, d}; }
    double operator()(std::size_t i, std::size_t j) const { return coords[i * d + j]; }
};

constexpr bool is_power_of_two(std::uint64_t n) noexcept { return std::has_single_bit(n); }

// ---------------------------------------------------------------------------
// Lattices

struct LatticeRule {
    std::uint64_t n = 0;
    std::size_t d = 0;
    std::vector<std::uint64_t> gen_vector;
    std::vector<double> shift;

    void validate() const {
        if (n < 2 || !is_power_of_two(n) || n > (std::uint64_t{1} << 32)) {
            throw std::invalid_argument("lattice: n must be a power of two in [2, 2^32]");
        }
        if (d < 1 || gen_vector.size() != d || shift.size() != d) {
            throw std::invalid_argument("lattice: generating vector and shift must have d entries");
        }
        if (gen_vector[0] != 1) {
            throw std::invalid_argument("lattice: first generating-vector entry must be 1");
        }
        for (auto z : gen_vector) {
            if (z >= n || z % 2 == 0) {
                throw std::invalid_argument("lattice: generating-vector entries must be odd and below n");
            }
        }
        for (double s : shift) {
            if (!(s >= 0.0 && s < 1.0)) {
                throw std::invalid_argument("lattice: shift coordinates must lie in [0,1)");
            }
        }
    }
};

/// Korobov generating vector (1, a, a^2, ..., a^{d-1}) mod n.
inline std::vector<std::uint64_t> korobov_vector(std::uint64_t a, std::uint64_t n, std::size_t d) {
    if (n < 2 || !is_power_of_two(n)) {
        throw std::invalid_argument("korobov_vector: n must be a power of two >= 2");
    }
    if (a % 2 == 0 || a < 1 || a >= n) {
        throw std::invalid_argument("korobov_vector: a must be odd with 1 <= a < n");
    }
    if (d < 1) {
        throw std::invalid_argument("korobov_vector: dimension must be >= 1");
    }
    // n divides 2^64, so wrapping multiplication followed by masking is exact.
    const std::uint64_t mask = n - 1;
    std::vector<std::uint64_t> z(d);
    std::uint64_t power = 1;
    for (auto& zj : z) {
        zj = power;
        power = (power * a) & mask;
    }
    return z;
}

/// Draws a Korobov multiplier uniformly from the odd integers in [1, n), then
/// a uniform shift, coordinates 1..d in order.
template <class Rng>
LatticeRule draw_random_lattice(std::uint64_t n, std::size_t d, Rng& rng) {
    if (n < 2 || !is_power_of_two(n) || n > (std::uint64_t{1} << 32)) {
        throw std::invalid_argument("draw_random_lattice: n must be a power of two in [2, 2^32], got " +
                                    std::to_string(n));
    }
    if (d < 1) {
        throw std::invalid_argument("draw_random_lattice: dimension must be >= 1");
    }
    // n/2 is a power of two, so masking a uniform 64-bit word is unbiased.
    const std::uint64_t a = 2 * (rng() & (n / 2 - 1)) + 1;
    LatticeRule rule{n, d, korobov_vector(a, n, d), std::vector<double>(d)};
    for (auto& s : rule.shift) {
        s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    return rule;
}

/// Point i, coordinate j is frac(i z_j / n + shift_j).
inline PointSet lattice_points(const LatticeRule& rule) {
    rule.validate();
    PointSet ps(rule.n, rule.d);
    const std::uint64_t mask = rule.n - 1;
    const double inv_n = 1.0 / static_cast<double>(rule.n);
    for (std::uint64_t i = 0; i < rule.n; ++i) {
        double* row = ps.coords.data() + i * rule.d;
        for (std::size_t j = 0; j < rule.d; ++j) {
            double x = static_cast<double>((i * rule.gen_vector[j]) & mask) * inv_n + rule.shift[j];
            if (x >= 1.0) {
                x -= 1.0;
            }
            row[j] = x;
        }
    }
    return ps;
}

// ---------------------------------------------------------------------------
// Digital nets
//
// Bit layout: a 32-bit column word holds rows 0..31 of an F2 column with
// row 0 (the 2^-1 digit) in the most significant bit. Scramble matrices are
// stored as 32 row words in the same bit order.

inline constexpr unsigned net_matrix_bits = 32;
inline constexpr unsigned net_output_bits = 53;

struct DigitalNetB2 {
    unsigned m = 0;
    std::size_t d = 0;
    std::vector<std::uint32_t> gen_matrices;       // d * m column words, dimension-major
    std::vector<std::uint32_t> scramble_matrices;  // d * 32 row words, dimension-major
    std::vector<std::uint64_t> digital_shift;      // d words, low 53 bits used

    std::uint64_t n() const noexcept { return std::uint64_t{1} << m; }
    std::span<const std::uint32_t> gen_columns(std::size_t j) const { return {gen_matrices.data() + j * m, m}; }
    std::span<const std::uint32_t> scramble_rows(std::size_t j) const {
        return {scramble_matrices.data() + j * net_matrix_bits, net_matrix_bits};
    }

    void validate() const {
        if (m < 1 || m > 32) {
            throw std::invalid_argument("digital net: m must lie in [1, 32]");
        }
        if (d < 1 || gen_matrices.size() != d * m || scramble_matrices.size() != d * net_matrix_bits ||
            digital_shift.size() != d) {
            throw std::invalid_argument("digital net: matrix storage does not match (m, d)");
        }
        for (std::size_t j = 0; j < d; ++j) {
            const auto rows = scramble_rows(j);
            for (unsigned r = 0; r < net_matrix_bits; ++r) {
                const std::uint32_t diag = 1u << (31 - r);
                const std::uint32_t allowed = r == 0 ? diag : (~0u << (31 - r));
                if (!(rows[r] & diag) || (rows[r] & ~allowed)) {
                    throw std::invalid_argument("digital net: scramble matrix must be lower triangular "
                                                "with unit diagonal");
                }
            }
        }
        for (auto s : digital_shift) {
            if (s >> net_output_bits) {
                throw std::invalid_argument("digital net: digital shift wider than 53 bits");
            }
        }
    }
};

/// Unscrambled Sobol' generator columns for 2^m points in d dimensions.
inline std::vector<std::uint32_t> sobol_generator_matrices(unsigned m, std::size_t d,
                                                           const DirectionTable& table) {
    if (d > table.size()) {
        throw std::out_of_range("sobol: dimension " + std::to_string(d) + " exceeds direction table size " +
                                std::to_string(table.size()));
    }
    std::vector<std::uint32_t> cols(d * m);
    for (std::size_t j = 0; j < d; ++j) {
        const auto mk = table.direction_integers(j, m);
        for (unsigned k = 0; k < m; ++k) {
            cols[j * m + k] = mk[k] << (31 - k);
        }
    }
    return cols;
}

inline std::vector<std::uint32_t> identity_scrambles(std::size_t d) {
    std::vector<std::uint32_t> rows(d * net_matrix_bits);
    for (std::size_t j = 0; j < d; ++j) {
        for (unsigned r = 0; r < net_matrix_bits; ++r) {
            rows[j * net_matrix_bits + r] = 1u << (31 - r);
        }
    }
    return rows;
}

/// The plain Sobol' net: identity scramble, zero shift.
inline DigitalNetB2 raw_sobol_net(unsigned m, std::size_t d,
                                  const DirectionTable& table = default_direction_table()) {
    if (m < 1 || m > 32 || d < 1) {
        throw std::invalid_argument("raw_sobol_net: need 1 <= m <= 32 and d >= 1");
    }
    return DigitalNetB2{m, d, sobol_generator_matrices(m, d, table), identity_scrambles(d),
                        std::vector<std::uint64_t>(d, 0)};
}

/// Loads the Sobol' matrices and randomizes them. Draw order: for each
/// dimension, one word per scramble row 0..31 (the top r bits of word >> 32
/// fill the strictly lower part of row r); then one 53-bit shift
/// (word >> 11) per dimension.
template <class Rng>
DigitalNetB2 draw_random_net(unsigned m, std::size_t d, Rng& rng,
                             const DirectionTable& table = default_direction_table()) {
    DigitalNetB2 net = raw_sobol_net(m, d, table);
    for (std::size_t j = 0; j < d; ++j) {
        for (unsigned r = 0; r < net_matrix_bits; ++r) {
            const auto bits = static_cast<std::uint32_t>(rng() >> 32);
            const std::uint32_t below = r == 0 ? 0u : (~0u << (32 - r));
            net.scramble_matrices[j * net_matrix_bits + r] = (bits & below) | (1u << (31 - r));
        }
    }
    for (auto& s : net.digital_shift) {
        s = rng() >> 11;
    }
    return net;
}

/// Product of a 32x32 row-stored F2 matrix with a column word.
inline std::uint32_t f2_apply(std::span<const std::uint32_t> rows, std::uint32_t column) {
    std::uint32_t out = 0;
    for (unsigned r = 0; r < net_matrix_bits; ++r) {
        out |= static_cast<std::uint32_t>(std::popcount(rows[r] & column) & 1) << (31 - r);
    }
    return out;
}

/// Point i: scrambled matrix times the binary digits of i, widened to 53 bits,
/// XORed with the digital shift, scaled by 2^-53.
inline PointSet net_points(const DigitalNetB2& net) {
    net.validate();
    const std::uint64_t n = net.n();
    PointSet ps(n, net.d);
    std::vector<std::uint32_t> prefix(net.m);
    for (std::size_t j = 0; j < net.d; ++j) {
        const auto cols = net.gen_columns(j);
        const auto rows = net.scramble_rows(j);
        std::uint32_t acc = 0;
        for (unsigned k = 0; k < net.m; ++k) {
            acc ^= f2_apply(rows, cols[k]);
            prefix[k] = acc;
        }
        // Between i-1 and i exactly the digits 0..ctz(i) flip.
        std::uint32_t x = 0;
        const std::uint64_t shift = net.digital_shift[j];
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i > 0) {
                x ^= prefix[std::countr_zero(i)];
            }
            const std::uint64_t y = (static_cast<std::uint64_t>(x) << (net_output_bits - 32)) ^ shift;
            ps.coords[i * net.d + j] = static_cast<double>(y) * 0x1.0p-53;
        }
    }
    return ps;
}

}  // namespace rqmc
