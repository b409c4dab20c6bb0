#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "primes.hpp"

namespace htpq {

/// Finite binary string over prime indices: bit i talks about membership
/// of the i-th prime.  Conditions are ordered by length, then
/// lexicographically, which is the canonical enumeration order used by
/// the certificate machinery.
class Condition {
  public:
    Condition() = default;
    explicit Condition(std::vector<bool> bits) : bits_(std::move(bits)) {}

    static Condition parse(const std::string& s) {
        std::vector<bool> bits;
        bits.reserve(s.size());
        for (char c : s) {
            if (c == '0')
                bits.push_back(false);
            else if (c == '1')
                bits.push_back(true);
            else
                throw parse_error("condition must be a 0/1 string");
        }
        return Condition(std::move(bits));
    }

    std::size_t length() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool bit(std::size_t i) const { return bits_.at(i); }
    const std::vector<bool>& bits() const { return bits_; }

    Condition extended(bool b) const {
        std::vector<bool> bits = bits_;
        bits.push_back(b);
        return Condition(std::move(bits));
    }

    Condition prefix(std::size_t len) const {
        if (len > bits_.size())
            throw domain_error("prefix: length exceeds condition");
        return Condition(
            std::vector<bool>(bits_.begin(), bits_.begin() + len));
    }

    bool is_prefix_of(const Condition& o) const {
        if (bits_.size() > o.bits_.size()) return false;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] != o.bits_[i]) return false;
        return true;
    }

    std::vector<std::size_t> one_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> zero_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (!bits_[i]) out.push_back(i);
        return out;
    }

    std::vector<Int> one_primes() const {
        std::vector<Int> out;
        for (std::size_t i : one_indices()) out.push_back(nth_prime(i));
        return out;
    }

    std::vector<Int> zero_primes() const {
        std::vector<Int> out;
        for (std::size_t i : zero_indices()) out.push_back(nth_prime(i));
        return out;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (bool b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    bool operator==(const Condition&) const = default;

    /// Canonical order: shorter first, then lexicographic with 0 < 1.
    bool operator<(const Condition& o) const {
        if (bits_.size() != o.bits_.size())
            return bits_.size() < o.bits_.size();
        return bits_ < o.bits_;
    }

  private:
    std::vector<bool> bits_;
};

struct FiniteInclude {
    std::set<Int> primes;
};

struct CofiniteExclude {
    std::set<Int> primes;
};

struct ResidueRule {
    // p is a member iff p ≡ a (mod m) for some listed class, unless
    // overridden at finitely many primes.
    std::vector<std::pair<unsigned long, unsigned long>> classes;
    std::map<Int, bool> overrides;
};

struct ConditionPlusDefault {
    Condition prefix;
    bool default_bit = false;
};

struct Sampled {
    std::uint64_t seed = 0;
};

using DescriptorVariant = std::variant<FiniteInclude, CofiniteExclude,
                                       ResidueRule, ConditionPlusDefault,
                                       Sampled>;

/// A decidable set W of primes describing the subring R_W = Z[1/p : p in W].
/// Descriptors are closed data so that experiments serialize and replay
/// exactly; membership queries are pure.
class SubringDescriptor {
  public:
    SubringDescriptor() : variant_(FiniteInclude{}) {}
    explicit SubringDescriptor(DescriptorVariant v)
        : variant_(std::move(v)) {
        if (auto* s = std::get_if<Sampled>(&variant_))
            cache_ = std::make_shared<SampleCache>(s->seed);
        validate();
    }

    static SubringDescriptor finite_include(std::set<Int> primes) {
        return SubringDescriptor(FiniteInclude{std::move(primes)});
    }
    static SubringDescriptor cofinite_exclude(std::set<Int> primes) {
        return SubringDescriptor(CofiniteExclude{std::move(primes)});
    }
    static SubringDescriptor integers() { return finite_include({}); }
    static SubringDescriptor rationals() { return cofinite_exclude({}); }

    const DescriptorVariant& variant() const { return variant_; }

    /// Membership of the i-th prime, bypassing the primality check.
    bool contains_prime_index(std::size_t i) const {
        if (const auto* f = std::get_if<FiniteInclude>(&variant_))
            return f->primes.count(nth_prime(i)) != 0;
        if (const auto* c = std::get_if<CofiniteExclude>(&variant_))
            return c->primes.count(nth_prime(i)) == 0;
        if (const auto* r = std::get_if<ResidueRule>(&variant_)) {
            Int p = nth_prime(i);
            auto it = r->overrides.find(p);
            if (it != r->overrides.end()) return it->second;
            for (const auto& [a, m] : r->classes)
                if (mpz_fdiv_ui(p.get_mpz_t(), m) == a) return true;
            return false;
        }
        if (const auto* cd = std::get_if<ConditionPlusDefault>(&variant_)) {
            if (i < cd->prefix.length()) return cd->prefix.bit(i);
            return cd->default_bit;
        }
        return cache_->bit(i);
    }

    bool contains_prime(const Int& p) const {
        if (!is_prime(p)) throw domain_error("contains_prime: not a prime");
        // The two finite-set variants answer without computing the index,
        // which keeps very large primes cheap.
        if (const auto* f = std::get_if<FiniteInclude>(&variant_))
            return f->primes.count(p) != 0;
        if (const auto* c = std::get_if<CofiniteExclude>(&variant_))
            return c->primes.count(p) == 0;
        if (const auto* r = std::get_if<ResidueRule>(&variant_)) {
            auto it = r->overrides.find(p);
            if (it != r->overrides.end()) return it->second;
            for (const auto& [a, m] : r->classes)
                if (mpz_fdiv_ui(p.get_mpz_t(), m) == a) return true;
            return false;
        }
        return contains_prime_index(prime_index(p));
    }

    bool contains_rational(const Rat& q,
                           unsigned long factor_bound =
                               kDefaultFactorBound) const {
        for (const Int& p : denominator_primes(q, factor_bound))
            if (!contains_prime(p)) return false;
        return true;
    }

    /// Initial segment of W as a binary string: bit i = membership of p_i.
    Condition restrict(std::size_t length) const {
        std::vector<bool> bits;
        bits.reserve(length);
        for (std::size_t i = 0; i < length; ++i)
            bits.push_back(contains_prime_index(i));
        return Condition(std::move(bits));
    }

    std::string to_string() const {
        std::ostringstream out;
        if (const auto* f = std::get_if<FiniteInclude>(&variant_)) {
            out << "include:";
            print_primes(out, f->primes);
        } else if (const auto* c = std::get_if<CofiniteExclude>(&variant_)) {
            out << "exclude:";
            print_primes(out, c->primes);
        } else if (const auto* r = std::get_if<ResidueRule>(&variant_)) {
            out << "residue:";
            bool first = true;
            for (const auto& [a, m] : r->classes) {
                if (!first) out << ",";
                first = false;
                out << a << "mod" << m;
            }
            if (!r->overrides.empty()) {
                out << ";override:";
                first = true;
                for (const auto& [p, b] : r->overrides) {
                    if (!first) out << ",";
                    first = false;
                    out << p.get_str() << "=" << (b ? 1 : 0);
                }
            }
        } else if (const auto* cd =
                       std::get_if<ConditionPlusDefault>(&variant_)) {
            out << "cond:" << cd->prefix.to_string()
                << ";default=" << (cd->default_bit ? 1 : 0);
        } else {
            out << "random:seed=" << std::get<Sampled>(variant_).seed;
        }
        return out.str();
    }

  private:
    /// Write-once memo of sampled bits, shared across copies so repeated
    /// queries stay cheap.
    struct SampleCache {
        explicit SampleCache(std::uint64_t s) : seed(s) {}
        bool bit(std::size_t i) {
            std::lock_guard<std::mutex> lock(mutex);
            auto it = bits.find(i);
            if (it != bits.end()) return it->second;
            bool b = prf_bit(seed, static_cast<std::uint64_t>(i));
            bits.emplace(i, b);
            return b;
        }
        std::uint64_t seed;
        std::mutex mutex;
        std::map<std::size_t, bool> bits;
    };

    void validate() const {
        if (const auto* f = std::get_if<FiniteInclude>(&variant_)) {
            require_primes(f->primes);
        } else if (const auto* c = std::get_if<CofiniteExclude>(&variant_)) {
            require_primes(c->primes);
        } else if (const auto* r = std::get_if<ResidueRule>(&variant_)) {
            for (const auto& [a, m] : r->classes) {
                if (m == 0) throw domain_error("residue class modulus 0");
                if (a >= m)
                    throw domain_error("residue class needs 0 <= a < m");
            }
            for (const auto& [p, b] : r->overrides)
                if (!is_prime(p))
                    throw domain_error("override key must be prime");
        }
    }

    static void require_primes(const std::set<Int>& s) {
        for (const Int& p : s)
            if (!is_prime(p))
                throw domain_error("descriptor set contains a non-prime: " +
                                   p.get_str());
    }

    static void print_primes(std::ostringstream& out,
                             const std::set<Int>& s) {
        bool first = true;
        for (const Int& p : s) {
            if (!first) out << ",";
            first = false;
            out << p.get_str();
        }
    }

    DescriptorVariant variant_;
    std::shared_ptr<SampleCache> cache_;
};

namespace detail {

inline std::set<Int> parse_prime_list(const std::string& body) {
    std::set<Int> primes;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string item = body.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw parse_error("empty entry in prime list");
        Int p = int_from_string(item);
        if (!is_prime(p))
            throw parse_error("not a prime: " + item);
        primes.insert(p);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return primes;
}

}  // namespace detail

/// Parse the descriptor text syntax: `include:2,5`, `exclude:5`,
/// `residue:3mod4;override:7=0`, `cond:0101;default=1`, `random:seed=42`.
inline SubringDescriptor parse_descriptor(const std::string& text) {
    auto starts_with = [&](const char* prefix) {
        return text.rfind(prefix, 0) == 0;
    };
    if (starts_with("include:")) {
        return SubringDescriptor(
            FiniteInclude{detail::parse_prime_list(text.substr(8))});
    }
    if (starts_with("exclude:")) {
        return SubringDescriptor(
            CofiniteExclude{detail::parse_prime_list(text.substr(8))});
    }
    if (starts_with("residue:")) {
        std::string body = text.substr(8);
        ResidueRule rule;
        std::string classes = body;
        std::size_t semi = body.find(';');
        if (semi != std::string::npos) {
            classes = body.substr(0, semi);
            std::string rest = body.substr(semi + 1);
            if (rest.rfind("override:", 0) != 0)
                throw parse_error("expected override: after ';'");
            std::string items = rest.substr(9);
            std::size_t pos = 0;
            while (pos < items.size()) {
                std::size_t comma = items.find(',', pos);
                std::string item = items.substr(
                    pos, comma == std::string::npos ? std::string::npos
                                                    : comma - pos);
                std::size_t eq = item.find('=');
                if (eq == std::string::npos)
                    throw parse_error("override entry needs p=bit");
                Int p = int_from_string(item.substr(0, eq));
                std::string bit = item.substr(eq + 1);
                if (bit != "0" && bit != "1")
                    throw parse_error("override bit must be 0 or 1");
                rule.overrides[p] = (bit == "1");
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        std::size_t pos = 0;
        while (pos < classes.size()) {
            std::size_t comma = classes.find(',', pos);
            std::string item = classes.substr(
                pos,
                comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t mod = item.find("mod");
            if (mod == std::string::npos)
                throw parse_error("residue class needs the form AmodM");
            Int a = int_from_string(item.substr(0, mod));
            Int m = int_from_string(item.substr(mod + 3));
            if (m <= 0 || a < 0 || a >= m)
                throw parse_error("residue class needs 0 <= a < m");
            rule.classes.emplace_back(a.get_ui(), m.get_ui());
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (rule.classes.empty())
            throw parse_error("residue descriptor needs at least one class");
        return SubringDescriptor(rule);
    }
    if (starts_with("cond:")) {
        std::string body = text.substr(5);
        std::size_t semi = body.find(';');
        if (semi == std::string::npos)
            throw parse_error("cond descriptor needs ;default=bit");
        std::string bits = body.substr(0, semi);
        std::string rest = body.substr(semi + 1);
        if (rest.rfind("default=", 0) != 0)
            throw parse_error("cond descriptor needs ;default=bit");
        std::string bit = rest.substr(8);
        if (bit != "0" && bit != "1")
            throw parse_error("default bit must be 0 or 1");
        return SubringDescriptor(
            ConditionPlusDefault{Condition::parse(bits), bit == "1"});
    }
    if (starts_with("random:seed=")) {
        std::string seed_text = text.substr(12);
        Int seed = int_from_string(seed_text);
        if (seed < 0 || !seed.fits_ulong_p())
            throw parse_error("seed out of range");
        return SubringDescriptor(
            Sampled{static_cast<std::uint64_t>(seed.get_ui())});
    }
    throw parse_error("unknown ring descriptor: " + text);
}

/// Subring whose W is exactly the ones of a condition (zero beyond).
inline SubringDescriptor descriptor_from_condition(const Condition& sigma) {
    std::set<Int> primes;
    for (const Int& p : sigma.one_primes()) primes.insert(p);
    return SubringDescriptor::finite_include(std::move(primes));
}

}  // namespace htpq
