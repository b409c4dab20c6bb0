#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace htpq {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_from(long v) { return Int(v); }

inline const Int& rat_num(const Rat& q) { return q.get_num(); }
inline const Int& rat_den(const Rat& q) { return q.get_den(); }

/// num/den reduced to lowest terms with positive denominator.
inline Rat make_rational(const Int& num, const Int& den) {
    if (den == 0) throw domain_error("make_rational: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Int abs_int(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

/// height(a/b) = max(|a|, b) for a/b in lowest terms, b > 0.
inline Int height(const Rat& q) {
    Int na = abs_int(rat_num(q));
    const Int& d = rat_den(q);
    return na >= d ? na : d;
}

inline bool fits_ulong(const Int& a) { return a.fits_ulong_p(); }

inline unsigned long to_ulong(const Int& a) {
    if (!a.fits_ulong_p()) throw domain_error("to_ulong: value out of range");
    return a.get_ui();
}

inline long to_long(const Int& a) {
    if (!a.fits_slong_p()) throw domain_error("to_long: value out of range");
    return a.get_si();
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    if (e == 0) return Rat(1);
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
    return r;  // already canonical: powers of coprime values stay coprime
}

/// Floor of the square root of a nonnegative integer.
inline Int isqrt(const Int& n) {
    if (n < 0) throw domain_error("isqrt: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Exact k-th root: returns root r with r^k = n if one exists.
inline bool exact_kth_root(const Int& n, unsigned long k, Int& root) {
    if (k == 0) throw domain_error("exact_kth_root: k must be positive");
    if (n < 0 && k % 2 == 0) return false;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    if (!exact) return false;
    root = r;
    return true;
}

inline Int gcd_int(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& n) {
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Zigzag bijection between nonzero integers and naturals:
/// c > 0 -> 2(c-1), c < 0 -> -2c-1.  Inverse of zigzag_decode.
inline Int zigzag_encode(const Int& c) {
    if (c == 0) throw domain_error("zigzag_encode: zero is not encoded");
    if (c > 0) return 2 * (c - 1);
    return -2 * c - 1;
}

inline Int zigzag_decode(const Int& n) {
    if (n < 0) throw domain_error("zigzag_decode: negative code");
    if (n % 2 == 0) return n / 2 + 1;
    return -(n + 1) / 2;
}

/// Cantor pairing pi(x, y) = (x+y)(x+y+1)/2 + y, a bijection
/// between pairs of naturals and naturals.
inline Int cantor_pair(const Int& x, const Int& y) {
    if (x < 0 || y < 0) throw domain_error("cantor_pair: negative argument");
    Int s = x + y;
    return s * (s + 1) / 2 + y;
}

inline std::pair<Int, Int> cantor_unpair(const Int& z) {
    if (z < 0) throw domain_error("cantor_unpair: negative argument");
    // Largest s with s(s+1)/2 <= z.
    Int s = (isqrt(8 * z + 1) - 1) / 2;
    Int t = s * (s + 1) / 2;
    Int y = z - t;
    Int x = s - y;
    return {x, y};
}

/// Left-fold tupling: fixed length k >= 1 gives a bijection between
/// k-tuples of naturals and naturals.
inline Int cantor_tuple(const std::vector<Int>& xs) {
    if (xs.empty()) throw domain_error("cantor_tuple: empty tuple");
    Int acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = cantor_pair(acc, xs[i]);
    return acc;
}

inline std::vector<Int> cantor_untuple(Int code, std::size_t k) {
    if (k == 0) throw domain_error("cantor_untuple: k must be positive");
    std::vector<Int> xs(k);
    for (std::size_t i = k; i-- > 1;) {
        auto [a, b] = cantor_unpair(code);
        xs[i] = b;
        code = a;
    }
    xs[0] = code;
    return xs;
}

/// splitmix64 step; the standard finalizer-based generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless PRF bit used by samplers: chain seed and index through
/// two splitmix64 steps and take the low bit of the third.
inline bool prf_bit(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    std::uint64_t b = splitmix64(s);
    return (b & 1ULL) != 0;
}

/// Three-input variant for indexed sample streams: bit i of sample
/// `index` under `seed`.
inline bool prf_bit(std::uint64_t seed, std::uint64_t index,
                    std::uint64_t bit) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    std::uint64_t b = splitmix64(s);
    s = b ^ (bit * 0xd1342543de82ef95ULL + 0xaf251af3b0f025b5ULL);
    std::uint64_t c = splitmix64(s);
    return (c & 1ULL) != 0;
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw parse_error("bad rational literal: " + s);
    if (q.get_den() == 0) throw parse_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline Int int_from_string(const std::string& s) {
    if (s.empty()) throw parse_error("empty integer literal");
    Int n;
    if (mpz_set_str(n.get_mpz_t(), s.c_str(), 10) != 0)
        throw parse_error("bad integer literal: " + s);
    return n;
}

}  // namespace htpq
