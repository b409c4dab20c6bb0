#pragma once

#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace htpq {

/// Arbitrary-precision code of a polynomial under the bijection below.
using PolyCode = Int;

/// Bijection between monomials and naturals.  The empty monomial maps to
/// 0; a monomial of length L >= 1 (trailing entry nonzero) maps to
/// 1 + pair(L-1, tuple(e_0, ..., e_{L-2}, e_{L-1} - 1)).  Subtracting one
/// from the final exponent makes the tuple range over all of N^L, so the
/// map is onto.
inline Int monomial_code(const Monomial& mono) {
    Monomial m = trim_monomial(mono);
    if (m.empty()) return Int(0);
    std::vector<Int> entries;
    entries.reserve(m.size());
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
        entries.emplace_back(static_cast<unsigned long>(m[i]));
    entries.emplace_back(static_cast<unsigned long>(m.back() - 1));
    return 1 + cantor_pair(Int(static_cast<unsigned long>(m.size() - 1)),
                           cantor_tuple(entries));
}

inline Monomial monomial_from_code(const Int& code) {
    if (code < 0) throw domain_error("monomial_from_code: negative code");
    if (code == 0) return {};
    auto [len_minus_1, packed] = cantor_unpair(code - 1);
    if (!len_minus_1.fits_ulong_p())
        throw resource_limit_error("monomial_from_code: length too large");
    std::size_t len = len_minus_1.get_ui() + 1;
    std::vector<Int> entries = cantor_untuple(packed, len);
    Monomial m(len);
    for (std::size_t i = 0; i < len; ++i) {
        Int e = entries[i];
        if (i + 1 == len) e += 1;
        if (!e.fits_ulong_p())
            throw resource_limit_error("monomial_from_code: exponent too large");
        m[i] = e.get_ui();
    }
    return m;
}

/// Bijection between integer polynomials and naturals.  The zero
/// polynomial maps to 0.  Otherwise sort the k terms by monomial code,
/// gap-encode the strictly increasing code sequence (d_1 = m_1,
/// d_{i+1} = m_{i+1} - m_i - 1), zigzag each nonzero coefficient, and map
/// to 1 + pair(k-1, tuple(d_1, c_1, ..., d_k, c_k)).  Every natural
/// decodes to exactly one polynomial and vice versa.
inline PolyCode encode(const Polynomial& f) {
    if (f.is_zero()) return Int(0);
    std::vector<std::pair<Int, Int>> coded;
    coded.reserve(f.term_count());
    for (const auto& [m, c] : f.terms())
        coded.emplace_back(monomial_code(m), zigzag_encode(c));
    std::sort(coded.begin(), coded.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Int> seq;
    seq.reserve(2 * coded.size());
    Int prev(-1);
    for (const auto& [m, c] : coded) {
        seq.push_back(m - prev - 1);
        seq.push_back(c);
        prev = m;
    }
    Int k(static_cast<unsigned long>(coded.size()));
    return 1 + cantor_pair(k - 1, cantor_tuple(seq));
}

inline Polynomial decode(const PolyCode& code) {
    if (code < 0) throw domain_error("decode: negative code");
    Polynomial f;
    if (code == 0) return f;
    auto [k_minus_1, packed] = cantor_unpair(code - 1);
    if (!k_minus_1.fits_ulong_p())
        throw resource_limit_error("decode: term count too large");
    std::size_t k = k_minus_1.get_ui() + 1;
    std::vector<Int> seq = cantor_untuple(packed, 2 * k);
    Int mono_code(-1);
    for (std::size_t i = 0; i < k; ++i) {
        mono_code += seq[2 * i] + 1;
        f.add_term(monomial_from_code(mono_code), zigzag_decode(seq[2 * i + 1]));
    }
    return f;
}

}  // namespace htpq
