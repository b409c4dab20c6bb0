#pragma once

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <utility>
#include <vector>

#include "integers.hpp"

namespace htpq {

namespace detail {

/// Growing prime table shared by all callers.  Indexing starts at zero:
/// prime 0 is 2, prime 1 is 3, and so on.
class PrimeTable {
  public:
    static PrimeTable& instance() {
        static PrimeTable table;
        return table;
    }

    unsigned long nth(std::size_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (primes_.size() <= n) grow();
        return primes_[n];
    }

    /// All primes <= bound, ascending.
    std::vector<unsigned long> upto(unsigned long bound) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (primes_.back() < bound) grow();
        std::vector<unsigned long> out;
        for (unsigned long p : primes_) {
            if (p > bound) break;
            out.push_back(p);
        }
        return out;
    }

    /// Index of p in the table if p is prime, else no value.
    std::pair<bool, std::size_t> index_of(unsigned long p) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (primes_.back() < p) grow();
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it != primes_.end() && *it == p)
            return {true, static_cast<std::size_t>(it - primes_.begin())};
        return {false, 0};
    }

  private:
    PrimeTable() : sieved_upto_(1) { grow(); }

    void grow() {
        unsigned long lo = sieved_upto_ + 1;
        unsigned long hi = std::max<unsigned long>(sieved_upto_ * 2, 64);
        std::vector<bool> composite(hi - lo + 1, false);
        for (unsigned long d = 2; d * d <= hi; ++d) {
            unsigned long start = std::max(d * d, ((lo + d - 1) / d) * d);
            for (unsigned long m = start; m <= hi; m += d)
                composite[m - lo] = true;
        }
        for (unsigned long v = lo; v <= hi; ++v)
            if (!composite[v - lo]) primes_.push_back(v);
        sieved_upto_ = hi;
    }

    std::mutex mutex_;
    std::vector<unsigned long> primes_;
    unsigned long sieved_upto_;
};

}  // namespace detail

/// n-th prime, zero-indexed: nth_prime(0) = 2.
inline Int nth_prime(std::size_t n) {
    return Int(detail::PrimeTable::instance().nth(n));
}

inline std::vector<Int> primes_upto(const Int& bound) {
    std::vector<Int> out;
    if (bound < 2) return out;
    if (!bound.fits_ulong_p())
        throw domain_error("primes_upto: bound too large");
    for (unsigned long p :
         detail::PrimeTable::instance().upto(bound.get_ui()))
        out.emplace_back(p);
    return out;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

/// Zero-based index of a prime p; throws if p is not prime.
inline std::size_t prime_index(const Int& p) {
    if (!p.fits_ulong_p()) {
        if (!is_prime(p)) throw domain_error("prime_index: not a prime");
        throw resource_limit_error("prime_index: prime too large to index");
    }
    auto [ok, idx] = detail::PrimeTable::instance().index_of(p.get_ui());
    if (!ok) throw domain_error("prime_index: not a prime");
    return idx;
}

/// One (prime, exponent) entry of a factorization, exponents positive,
/// primes ascending.
struct PrimePower {
    Int prime;
    unsigned long exponent = 0;
    bool operator==(const PrimePower&) const = default;
};

inline constexpr unsigned long kDefaultFactorBound = 1000000;

/// Factor |n| by trial division with primes up to `bound`.  After the
/// divisions the remaining cofactor r satisfies: every prime factor of r
/// exceeds `bound`, so if r <= bound^2 it must itself be prime.  A larger
/// cofactor that is not provably prime raises factor_bound_error rather
/// than guessing.
inline std::vector<PrimePower> factorize(
    const Int& n, unsigned long bound = kDefaultFactorBound) {
    if (n == 0) throw domain_error("factorize: zero has no factorization");
    Int rem = abs_int(n);
    std::vector<PrimePower> out;
    if (rem == 1) return out;
    auto& table = detail::PrimeTable::instance();
    for (std::size_t i = 0;; ++i) {
        unsigned long p = table.nth(i);
        if (p > bound) break;
        Int pz(p);
        if (pz * pz > rem) break;
        if (!divides(pz, rem)) continue;
        unsigned long e = 0;
        while (divides(pz, rem)) {
            rem /= pz;
            ++e;
        }
        out.push_back({pz, e});
        if (rem == 1) return out;
    }
    if (rem == 1) return out;
    Int b(bound);
    if (rem <= b * b || is_prime(rem)) {
        out.push_back({rem, 1});
        return out;
    }
    throw factor_bound_error("factorize: cofactor " + rem.get_str() +
                             " exceeds bound " + std::to_string(bound));
}

/// Distinct prime divisors of the denominator of q (lowest terms).
inline std::vector<Int> denominator_primes(
    const Rat& q, unsigned long bound = kDefaultFactorBound) {
    std::vector<Int> out;
    if (rat_den(q) == 1) return out;
    for (const auto& pp : factorize(rat_den(q), bound)) out.push_back(pp.prime);
    return out;
}

}  // namespace htpq
