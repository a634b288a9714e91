#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "suprec/gf.hpp"

namespace suprec {

// Order-L matrix with +-1 entries and mutually orthogonal rows,
// H * H^T = L * I in exact integer arithmetic.
struct HadamardMatrix {
    int order = 0;
    std::vector<int> entries;  // row-major, values in {+1, -1}

    int at(int i, int j) const { return entries[static_cast<std::size_t>(i) * order + j]; }
    int& at(int i, int j) { return entries[static_cast<std::size_t>(i) * order + j]; }
};

// One BPSK sign sequence: a row of the generating matrix, or the negated
// all-plus row when extended_flag marks the extra --...- word.
struct Codeword {
    std::vector<int> signs;
    int index = 0;
    bool extended_flag = false;
};

inline const std::vector<int>& supported_orders() {
    static const std::vector<int> orders = {1, 2, 4, 8, 12, 16, 20, 24, 28, 32};
    return orders;
}

inline bool is_supported_order(int L) {
    for (int o : supported_orders())
        if (o == L) return true;
    return false;
}

inline bool validate(const HadamardMatrix& m) {
    int L = m.order;
    if (L < 1) return false;
    if (L != 1 && L != 2 && L % 4 != 0) return false;
    if (m.entries.size() != static_cast<std::size_t>(L) * L) return false;
    for (int v : m.entries)
        if (v != 1 && v != -1) return false;
    for (int i = 0; i < L; ++i) {
        for (int j = i; j < L; ++j) {
            long long dot = 0;
            for (int k = 0; k < L; ++k) dot += static_cast<long long>(m.at(i, k)) * m.at(j, k);
            if (dot != (i == j ? L : 0)) return false;
        }
    }
    return true;
}

// Recursive doubling [[H, H], [H, -H]] starting from [+1].
inline HadamardMatrix sylvester(int k) {
    if (k < 0 || k > 5) throw std::invalid_argument("sylvester: k must be in [0, 5]");
    HadamardMatrix h{1, {1}};
    for (int step = 0; step < k; ++step) {
        int n = h.order;
        HadamardMatrix d{2 * n, std::vector<int>(static_cast<std::size_t>(4) * n * n)};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int v = h.at(i, j);
                d.at(i, j) = v;
                d.at(i, j + n) = v;
                d.at(i + n, j) = v;
                d.at(i + n, j + n) = -v;
            }
        h = std::move(d);
    }
    return h;
}

// Paley type I: order q+1 for a prime power q = 3 (mod 4), built from the
// quadratic-residue character of GF(q). H = I + S with S antisymmetric and
// S S^T = q I.
inline HadamardMatrix paley(int q) {
    if (!FiniteField::is_prime_power(q)) throw std::invalid_argument("paley: q must be a prime power");
    if (q % 4 != 3) throw std::invalid_argument("paley: q must be 3 mod 4");
    if (q > 31) throw std::invalid_argument("paley: q must be <= 31");
    FiniteField f(q);
    int L = q + 1;
    HadamardMatrix h{L, std::vector<int>(static_cast<std::size_t>(L) * L, 0)};
    for (int j = 1; j < L; ++j) {
        h.at(0, j) = 1;
        h.at(j, 0) = -1;
    }
    for (int i = 1; i < L; ++i)
        for (int j = 1; j < L; ++j)
            if (i != j) h.at(i, j) = f.chi(f.sub(j - 1, i - 1));
    for (int i = 0; i < L; ++i) h.at(i, i) = 1;
    return h;
}

// Negate columns then rows so row 0 and column 0 are all +1.
inline void normalize_all_plus(HadamardMatrix& m) {
    int L = m.order;
    for (int j = 0; j < L; ++j)
        if (m.at(0, j) == -1)
            for (int i = 0; i < L; ++i) m.at(i, j) = -m.at(i, j);
    for (int i = 1; i < L; ++i)
        if (m.at(i, 0) == -1)
            for (int j = 0; j < L; ++j) m.at(i, j) = -m.at(i, j);
}

// Dispatcher over the constructions, normalized to an all-plus first
// row and column.
inline HadamardMatrix construct(int L) {
    if (!is_supported_order(L))
        throw std::invalid_argument("construct: no supported Hadamard matrix of order " + std::to_string(L));
    HadamardMatrix h;
    switch (L) {
        case 1: h = sylvester(0); break;
        case 2: h = sylvester(1); break;
        case 4: h = sylvester(2); break;
        case 8: h = sylvester(3); break;
        case 16: h = sylvester(4); break;
        case 32: h = sylvester(5); break;
        default: h = paley(L - 1); break;  // 12, 20, 24, 28
    }
    normalize_all_plus(h);
    return h;
}

// H / sqrt(L), row-major.
inline std::vector<double> rescaled(const HadamardMatrix& m) {
    double s = 1.0 / std::sqrt(static_cast<double>(m.order));
    std::vector<double> w(m.entries.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = s * m.entries[i];
    return w;
}

inline Codeword codeword(const HadamardMatrix& m, int row) {
    if (row < 0 || row >= m.order) throw std::out_of_range("codeword: row out of range");
    Codeword w;
    w.index = row;
    w.signs.resize(m.order);
    for (int j = 0; j < m.order; ++j) w.signs[j] = m.at(row, j);
    return w;
}

// The extra --...- word of the hybrid scheme: negation of the all-plus row.
inline Codeword extended_minus_word(const HadamardMatrix& m) {
    Codeword w = codeword(m, 0);
    for (int& s : w.signs) {
        if (s != 1) throw std::logic_error("extended word requires an all-plus row 0");
        s = -1;
    }
    w.extended_flag = true;
    return w;
}

// Text format: first line L, then L lines of L entries from {+1, -1, 1, -1}.
inline void export_matrix(const HadamardMatrix& m, std::ostream& os) {
    os << m.order << "\n";
    for (int i = 0; i < m.order; ++i) {
        for (int j = 0; j < m.order; ++j) os << (j ? " " : "") << (m.at(i, j) > 0 ? "+1" : "-1");
        os << "\n";
    }
}

inline HadamardMatrix import_matrix(std::istream& is) {
    int L = 0;
    if (!(is >> L) || L < 1) throw std::runtime_error("matrix import: bad order line");
    HadamardMatrix m{L, std::vector<int>(static_cast<std::size_t>(L) * L)};
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j) {
            std::string tok;
            if (!(is >> tok)) throw std::runtime_error("matrix import: truncated input");
            if (tok == "+1" || tok == "1")
                m.at(i, j) = 1;
            else if (tok == "-1")
                m.at(i, j) = -1;
            else
                throw std::runtime_error("matrix import: bad entry '" + tok + "'");
        }
    if (!validate(m)) throw std::runtime_error("matrix import: not a Hadamard matrix");
    return m;
}

}  // namespace suprec
