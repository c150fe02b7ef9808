#pragma once

// Sobol' direction-number table: parser and the embedded default copy.
// The embedded text is byte-identical to data/sobol_joe_kuo_16.txt.

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rqmc {

struct DirectionEntry {
    unsigned dim = 0;
    unsigned degree = 0;
    std::uint32_t poly = 0;
    std::vector<std::uint32_t> initial;
};

class DirectionTable {
public:
    DirectionTable() = default;
    explicit DirectionTable(std::vector<DirectionEntry> entries) : entries_(std::move(entries)) {
        validate();
    }

    std::size_t size() const noexcept { return entries_.size(); }
    const DirectionEntry& operator[](std::size_t j) const { return entries_.at(j); }

    /// The first `bits` direction integers m_1..m_bits for 0-based dimension j,
    /// extended past the initial values by the primitive-polynomial recurrence.
    std::vector<std::uint32_t> direction_integers(std::size_t j, unsigned bits) const {
        const DirectionEntry& e = entries_.at(j);
        std::vector<std::uint32_t> m(bits);
        if (e.degree == 0) {
            std::fill(m.begin(), m.end(), 1u);
            return m;
        }
        const unsigned s = e.degree;
        for (unsigned k = 0; k < bits; ++k) {
            if (k < s) {
                m[k] = e.initial[k];
                continue;
            }
            std::uint32_t v = m[k - s] ^ (m[k - s] << s);
            for (unsigned i = 1; i < s; ++i) {
                const std::uint32_t a_i = (e.poly >> (s - 1 - i)) & 1u;
                if (a_i) {
                    v ^= m[k - i] << i;
                }
            }
            m[k] = v;
        }
        return m;
    }

private:
    void validate() const {
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            const auto& e = entries_[j];
            const std::string where = "direction table row for dim " + std::to_string(e.dim);
            if (e.dim != j + 1) {
                throw std::invalid_argument(where + ": dimensions must be 1, 2, 3, ... in order");
            }
            if (e.initial.size() != e.degree) {
                throw std::invalid_argument(where + ": expected " + std::to_string(e.degree) +
                                            " initial direction integers");
            }
            if (e.degree > 31 || (e.degree > 0 && e.poly >= (1u << (e.degree - 1))) ||
                (e.degree == 0 && e.poly != 0)) {
                throw std::invalid_argument(where + ": polynomial coefficients out of range");
            }
            for (std::size_t k = 0; k < e.initial.size(); ++k) {
                const std::uint32_t mk = e.initial[k];
                if (mk % 2 == 0 || mk >= (1u << (k + 1))) {
                    throw std::invalid_argument(where + ": m_" + std::to_string(k + 1) +
                                                " must be odd and below 2^" + std::to_string(k + 1));
                }
            }
        }
    }

    std::vector<DirectionEntry> entries_;
};

/// Parses the plain-text table format. Blank lines and '#' comments are skipped.
inline DirectionTable parse_direction_table(std::istream& in) {
    std::vector<DirectionEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        DirectionEntry e;
        if (!(fields >> e.dim)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw std::invalid_argument("direction table line " + std::to_string(line_no) +
                                        ": malformed row");
        }
        if (!(fields >> e.degree >> e.poly)) {
            throw std::invalid_argument("direction table line " + std::to_string(line_no) +
                                        ": expected dim, degree, poly");
        }
        std::uint32_t mk = 0;
        while (fields >> mk) {
            e.initial.push_back(mk);
        }
        if (!fields.eof()) {
            throw std::invalid_argument("direction table line " + std::to_string(line_no) +
                                        ": non-integer field");
        }
        entries.push_back(std::move(e));
    }
    return DirectionTable(std::move(entries));
}

inline DirectionTable load_direction_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open direction table " + path);
    }
    return parse_direction_table(in);
}

inline constexpr std::string_view embedded_direction_text =
    R"(# Sobol' direction numbers, dimensions 1-16 (Joe & Kuo, new-joe-kuo-6.21201).
#
# One row per dimension, whitespace separated:
#   dim  degree  poly  m_1 ... m_degree
# dim     1-based dimension index, rows in increasing order
# degree  degree s of the primitive polynomial over F2
# poly    interior coefficients a_1..a_{s-1} of the polynomial packed as an
#         integer, a_1 in the most significant position
# m_k     initial direction integers; m_k odd and m_k < 2^k
# Dimension 1 is the van der Corput sequence and is written with degree 0.
1 0 0
2 1 0 1
3 2 1 1 3
4 3 1 1 3 1
5 3 2 1 1 1
6 4 1 1 1 3 3
7 4 4 1 3 5 13
8 5 2 1 1 5 5 17
9 5 4 1 1 5 5 5
10 5 7 1 1 7 11 19
11 5 11 1 1 5 1 1
12 5 13 1 1 1 3 11
13 5 14 1 3 5 5 31
14 6 1 1 3 3 9 7 49
15 6 13 1 1 1 15 21 21
16 6 16 1 3 1 13 27 49
)";

/// Table parsed from the embedded copy; built once.
inline const DirectionTable& default_direction_table() {
    static const DirectionTable table = [] {
        std::istringstream in{std::string(embedded_direction_text)};
        return parse_direction_table(in);
    }();
    return table;
}

}  // namespace rqmc
