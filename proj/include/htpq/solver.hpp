#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "polynomial.hpp"
#include "subring.hpp"

namespace htpq {

/// A verified rational zero: exact assignment plus the union of the
/// denominator prime factors of its coordinates.
struct SolutionWitness {
    std::map<VarId, Rat> assignment;
    std::set<Int> support;
};

struct SearchOutcome {
    enum class Kind { Found, ExhaustedUpTo };
    Kind kind = Kind::ExhaustedUpTo;
    std::optional<SolutionWitness> witness;
    unsigned long height_bound = 0;

    bool found() const { return kind == Kind::Found; }
};

/// Explicit resource budgets.  Exceeding one raises resource_limit_error;
/// exhaustion claims are made only after complete enumeration.
struct SearchLimits {
    std::size_t max_variables = 8;
    std::uint64_t max_candidates = 400000000;
    std::uint64_t max_solutions = 200000;
    unsigned jobs = 1;
    enum class Mode {
        // Enumerate all but one variable and solve the last one exactly.
        Hybrid,
        // Enumerate full tuples and evaluate; reference implementation.
        Grid
    };
    Mode mode = Mode::Hybrid;
    // Grid mode only: skip an all-integer tuple when f has no zero at its
    // residues modulo one of these.  Sound for integer candidates; never
    // used to conclude anything about non-integer ones.
    std::vector<unsigned long> moduli;
    unsigned long factor_bound = kDefaultFactorBound;
};

/// Canonical order on single coordinates: lower height first, then lower
/// absolute value, then positive before negative.  This makes the least
/// witness of symmetric equations the all-positive one.
inline int coordinate_compare(const Rat& a, const Rat& b) {
    Int ha = height(a);
    Int hb = height(b);
    if (ha != hb) return ha < hb ? -1 : 1;
    Rat aa = abs(a);
    Rat ab = abs(b);
    if (aa != ab) return aa < ab ? -1 : 1;
    if (a == b) return 0;
    return a > b ? -1 : 1;
}

/// The one-variable candidate list for (W, H): all a/b in lowest terms
/// with |a| <= H, 1 <= b <= H, b W-smooth, in canonical coordinate order.
/// This is the coordinate order everything else builds on.
class Candidates1D {
  public:
    Candidates1D(const SubringDescriptor& w, unsigned long height) {
        std::vector<unsigned long> dens = smooth_denominators(w, height);
        std::vector<std::pair<Int, Rat>> items;
        for (unsigned long b : dens) {
            for (unsigned long a = 0; a <= height; ++a) {
                if (a == 0 && b != 1) continue;
                if (std::gcd(a, b) != 1) continue;
                Int h(std::max<unsigned long>(a, b));
                items.emplace_back(h, make_rational(Int(a), Int(b)));
                if (a > 0)
                    items.emplace_back(
                        h, make_rational(-Int(a), Int(b)));
            }
        }
        std::sort(items.begin(), items.end(),
                  [](const auto& x, const auto& y) {
                      if (x.first != y.first) return x.first < y.first;
                      return coordinate_compare(x.second, y.second) < 0;
                  });
        values_.reserve(items.size());
        heights_.reserve(items.size());
        for (auto& [h, v] : items) {
            heights_.push_back(h);
            values_.push_back(v);
        }
    }

    std::size_t size() const { return values_.size(); }
    const Rat& value(std::size_t i) const { return values_[i]; }
    const Int& height_at(std::size_t i) const { return heights_[i]; }

    /// Number of candidates of height <= h (a prefix of the list).
    std::size_t count_height_leq(const Int& h) const {
        return std::upper_bound(heights_.begin(), heights_.end(), h) -
               heights_.begin();
    }

    /// Distinct heights present, ascending.
    std::vector<Int> shell_heights() const {
        std::vector<Int> out;
        for (const Int& h : heights_)
            if (out.empty() || out.back() != h) out.push_back(h);
        return out;
    }

  private:
    static std::vector<unsigned long> smooth_denominators(
        const SubringDescriptor& w, unsigned long height) {
        std::vector<unsigned long> dens{1};
        for (const Int& p : primes_upto(Int(height))) {
            if (!w.contains_prime(p)) continue;
            unsigned long pu = p.get_ui();
            std::size_t existing = dens.size();
            for (std::size_t i = 0; i < existing; ++i) {
                unsigned long b = dens[i];
                while (b <= height / pu) {
                    b *= pu;
                    dens.push_back(b);
                }
            }
        }
        std::sort(dens.begin(), dens.end());
        return dens;
    }

    std::vector<Rat> values_;
    std::vector<Int> heights_;
};

/// Process-wide memo of candidate lists keyed by (descriptor, height):
/// building one is the dominant cost of a small search, and sweeps over
/// many polynomials reuse the same few rings.
inline std::shared_ptr<const Candidates1D> shared_candidates(
    const SubringDescriptor& w, unsigned long height) {
    static std::mutex mu;
    static std::map<std::pair<std::string, unsigned long>,
                    std::shared_ptr<const Candidates1D>>
        cache;
    std::pair<std::string, unsigned long> key{w.to_string(), height};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() >= 64) cache.clear();
    auto made = std::make_shared<const Candidates1D>(w, height);
    cache.emplace(std::move(key), made);
    return made;
}

/// Canonical order on assignments over a fixed variable list: lower
/// tuple height first, ties broken coordinate by coordinate in the
/// candidate-list order.
inline bool assignment_less(const std::vector<Rat>& a,
                            const std::vector<Rat>& b) {
    Int ha(0), hb(0);
    for (const Rat& v : a) ha = std::max(ha, height(v));
    for (const Rat& v : b) hb = std::max(hb, height(v));
    if (ha != hb) return ha < hb;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = coordinate_compare(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

/// Streams every assignment of `vars` coordinates from the candidate
/// list, each exactly once, by nondecreasing tuple height and then
/// lexicographically (coordinates compared in the candidate order).
class CandidateStream {
  public:
    CandidateStream(std::size_t vars, const SubringDescriptor& w,
                    unsigned long height)
        : cands_(shared_candidates(w, height)), vars_(vars) {
        shells_ = cands_->shell_heights();
    }

    std::optional<std::vector<Rat>> next() {
        if (vars_ == 0) {
            if (emitted_empty_) return std::nullopt;
            emitted_empty_ = true;
            return std::vector<Rat>{};
        }
        while (true) {
            if (!shell_active_) {
                if (shell_idx_ >= shells_.size()) return std::nullopt;
                prev_count_ = shell_idx_ == 0
                                  ? 0
                                  : cands_->count_height_leq(
                                        shells_[shell_idx_ - 1]);
                count_ = cands_->count_height_leq(shells_[shell_idx_]);
                index_.assign(vars_, 0);
                shell_active_ = true;
                done_in_shell_ = false;
            }
            while (!done_in_shell_) {
                bool fresh = false;
                for (std::size_t i : index_)
                    if (i >= prev_count_) fresh = true;
                std::vector<std::size_t> current = index_;
                advance();
                if (fresh) {
                    std::vector<Rat> out;
                    out.reserve(vars_);
                    for (std::size_t i : current)
                        out.push_back(cands_->value(i));
                    return out;
                }
            }
            shell_active_ = false;
            ++shell_idx_;
        }
    }

    const Candidates1D& candidates() const { return *cands_; }

  private:
    void advance() {
        for (std::size_t pos = vars_; pos-- > 0;) {
            if (++index_[pos] < count_) return;
            index_[pos] = 0;
        }
        done_in_shell_ = true;
    }

    std::shared_ptr<const Candidates1D> cands_;
    std::size_t vars_;
    std::vector<Int> shells_;
    std::size_t shell_idx_ = 0;
    std::size_t prev_count_ = 0;
    std::size_t count_ = 0;
    std::vector<std::size_t> index_;
    bool shell_active_ = false;
    bool done_in_shell_ = false;
    bool emitted_empty_ = false;
};

namespace detail {

/// f rearranged by the exponent of one designated variable:
/// f = sum_k slice[k](other vars) * v^k.
struct LastVariableSlices {
    VarId variable = 0;
    std::vector<Polynomial> slices;

    LastVariableSlices(const Polynomial& f, VarId v) : variable(v) {
        slices.resize(f.degree_in(v) + 1);
        for (const auto& [m, c] : f.terms()) {
            unsigned long k = v < m.size() ? m[v] : 0;
            Monomial rest = m;
            if (v < rest.size()) rest[v] = 0;
            slices[k].add_term(rest, c);
        }
    }

    /// Coefficients of the univariate polynomial in v at a point.
    std::vector<Rat> at(const std::vector<Rat>& point) const {
        std::vector<Rat> out;
        out.reserve(slices.size());
        for (const Polynomial& s : slices) out.push_back(s.evaluate(point));
        return out;
    }
};

/// Divisors d of |n| with 1 <= d <= limit, by direct scan.
inline std::vector<unsigned long> bounded_divisors(const Int& n,
                                                   unsigned long limit) {
    std::vector<unsigned long> out;
    Int bound = abs_int(n);
    for (unsigned long d = 1; d <= limit; ++d) {
        if (bound < d) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), d)) out.push_back(d);
    }
    return out;
}

inline Rat eval_univariate(const std::vector<Int>& coefs, const Rat& x) {
    Rat acc(0);
    for (std::size_t k = coefs.size(); k-- > 0;) acc = acc * x + Rat(coefs[k]);
    return acc;
}

struct UnivariateRoots {
    bool identically_zero = false;
    std::vector<Rat> roots;  // verified, unsorted
};

/// All rational roots of sum coef[k] * y^k with height <= H; complete
/// because every rational root a/b in lowest terms must satisfy a | c_0
/// and b | c_lead (both after stripping powers of y), and roots beyond
/// height H are out of scope by contract.
inline UnivariateRoots univariate_rational_roots(const std::vector<Rat>& coefs,
                                                 unsigned long H) {
    UnivariateRoots result;
    Int scale(1);
    for (const Rat& c : coefs) scale = lcm_int(scale, rat_den(c));
    std::vector<Int> c;
    c.reserve(coefs.size());
    for (const Rat& q : coefs) c.push_back(rat_num(q * Rat(scale)));
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) {
        result.identically_zero = true;
        return result;
    }
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0) ++low;
    if (low > 0) {
        result.roots.emplace_back(0);
        c.erase(c.begin(), c.begin() + low);
    }
    if (c.size() <= 1) return result;

    auto push_if_root = [&](const Rat& r) {
        if (eval_univariate(c, r) == 0) result.roots.push_back(r);
    };

    std::size_t nonzero = 0;
    for (const Int& k : c)
        if (k != 0) ++nonzero;
    if (nonzero == 2) {
        // c_m y^m + c_0 = 0: solve by exact m-th roots of -c_0/c_m.
        unsigned long m = c.size() - 1;
        Rat target = Rat(-c[0]) / Rat(c.back());
        if (m == 1) {
            if (height(target) <= H) push_if_root(target);
            return result;
        }
        Int rn, rd;
        if (exact_kth_root(rat_num(target), m, rn) &&
            exact_kth_root(rat_den(target), m, rd)) {
            Rat root = make_rational(rn, rd);
            if (height(root) <= H) {
                push_if_root(root);
                if (m % 2 == 0) push_if_root(-root);
            }
        }
        return result;
    }

    for (unsigned long a : bounded_divisors(c[0], H)) {
        for (unsigned long b : bounded_divisors(c.back(), H)) {
            if (std::gcd(a, b) != 1) continue;
            Rat r = make_rational(Int(a), Int(b));
            push_if_root(r);
            push_if_root(-r);
        }
    }
    return result;
}

}  // namespace detail

/// Union of denominator prime factors across the coordinates.
inline std::set<Int> witness_support(const std::map<VarId, Rat>& assignment,
                                     unsigned long factor_bound =
                                         kDefaultFactorBound) {
    std::set<Int> support;
    for (const auto& [v, q] : assignment)
        for (const Int& p : denominator_primes(q, factor_bound))
            support.insert(p);
    return support;
}

namespace detail {

struct SearchAccumulator {
    std::optional<std::vector<Rat>> best;  // values in variable order
    std::vector<std::vector<Rat>> all;     // find_all mode
    std::uint64_t work = 0;

    void offer(const std::vector<Rat>& tuple, bool collect_all,
               std::uint64_t max_solutions) {
        if (collect_all) {
            if (all.size() >= max_solutions)
                throw resource_limit_error(
                    "search: solution count exceeds max_solutions");
            all.push_back(tuple);
        }
        if (!best || assignment_less(tuple, *best)) best = tuple;
    }

    void merge(SearchAccumulator&& o, bool collect_all,
               std::uint64_t max_solutions) {
        work += o.work;
        if (o.best && (!best || assignment_less(*o.best, *best)))
            best = o.best;
        if (collect_all) {
            if (all.size() + o.all.size() > max_solutions)
                throw resource_limit_error(
                    "search: solution count exceeds max_solutions");
            for (auto& t : o.all) all.push_back(std::move(t));
        }
    }
};

/// True when every rational value of f is strictly positive (or strictly
/// negative) for the trivial reason: all exponents even, all coefficients
/// of one sign, nonzero constant term.
inline bool definite_sign_no_zero(const Polynomial& f) {
    if (f.constant_term() == 0) return false;
    bool pos = f.constant_term() > 0;
    for (const auto& [m, c] : f.terms()) {
        if (pos ? c < 0 : c > 0) return false;
        for (unsigned long e : m)
            if (e % 2 != 0) return false;
    }
    return true;
}

inline bool smooth_in(const SubringDescriptor& w, const Int& den,
                      unsigned long factor_bound) {
    if (den == 1) return true;
    for (const auto& pp : factorize(den, factor_bound))
        if (!w.contains_prime(pp.prime)) return false;
    return true;
}

struct GridModuli {
    std::vector<unsigned long> moduli;
    std::vector<Polynomial> reduced;  // f with coefficients reduced mod m

    GridModuli(const Polynomial& f, const std::vector<unsigned long>& ms) {
        for (unsigned long m : ms) {
            if (m < 2) continue;
            Polynomial r;
            for (const auto& [mono, c] : f.terms())
                r.add_term(mono, Int(mpz_fdiv_ui(c.get_mpz_t(), m)));
            moduli.push_back(m);
            reduced.push_back(std::move(r));
        }
    }

    /// Only called for all-integer tuples; a nonzero residue rules the
    /// tuple out soundly.
    bool rejects(const std::vector<Rat>& tuple) const {
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            unsigned long m = moduli[i];
            Int acc(0);
            for (const auto& [mono, c] : reduced[i].terms()) {
                Int term = c;
                for (std::size_t v = 0; v < mono.size(); ++v) {
                    if (mono[v] == 0) continue;
                    unsigned long base =
                        mpz_fdiv_ui(rat_num(tuple[v]).get_mpz_t(), m);
                    for (unsigned long e = 0; e < mono[v]; ++e)
                        term = (term * Int(base)) % Int(m);
                }
                acc = (acc + term) % Int(m);
            }
            if (acc % Int(m) != 0) return true;
        }
        return false;
    }
};

}  // namespace detail

namespace detail {

/// Shared implementation behind search and find_all.  Enumerates prefix
/// shells over all variables but the last, solves the last variable
/// exactly, and keeps the canonically least witness (hybrid mode), or
/// walks complete tuples (grid mode).
class SearchEngine {
  public:
    SearchEngine(const Polynomial& f, const SubringDescriptor& w,
                 unsigned long height, const SearchLimits& limits)
        : f_(f), w_(w), height_(height), limits_(limits) {
        if (f.is_zero()) throw domain_error("search: zero polynomial");
        if (height == 0) throw domain_error("search: height must be >= 1");
        vars_ = f.variables();
        if (vars_.size() > limits.max_variables)
            throw resource_limit_error("search: too many variables");
    }

    /// collect_all: gather every solution instead of stopping early.
    SearchAccumulator run(bool collect_all) {
        SearchAccumulator acc;
        if (vars_.empty()) return acc;  // nonzero constant: no solutions
        if (detail::definite_sign_no_zero(f_)) return acc;
        cands_ = shared_candidates(w_, height_);
        if (cands_->size() == 0) return acc;
        if (limits_.mode == SearchLimits::Mode::Grid)
            grid_run(acc, collect_all);
        else
            hybrid_run(acc, collect_all);
        return acc;
    }

    const std::vector<VarId>& variables() const { return vars_; }

  private:
    void bump(SearchAccumulator& acc, std::uint64_t n = 1) const {
        acc.work += n;
        if (acc.work > limits_.max_candidates)
            throw resource_limit_error("search: candidate budget exceeded");
    }

    bool root_admissible(const Rat& r) const {
        return height(r) <= height_ &&
               detail::smooth_in(w_, rat_den(r), limits_.factor_bound);
    }

    void hybrid_run(SearchAccumulator& acc, bool collect_all) {
        if (vars_.size() == 1) {
            auto roots = detail::univariate_rational_roots(
                coefficient_vector(), height_);
            bump(acc);
            if (roots.identically_zero)
                throw domain_error("search: zero polynomial");
            for (const Rat& r : roots.roots)
                if (root_admissible(r)) acc.offer({r}, collect_all,
                                                  limits_.max_solutions);
            return;
        }

        VarId last = vars_.back();
        detail::LastVariableSlices slices(f_, last);
        std::vector<Int> shells = cands_->shell_heights();
        std::size_t prev = 0;
        for (const Int& shell : shells) {
            std::size_t cur = cands_->count_height_leq(shell);
            scan_shell(acc, slices, prev, cur, collect_all);
            prev = cur;
            if (!collect_all && acc.best) {
                Int best_h(0);
                for (const Rat& v : *acc.best)
                    best_h = std::max(best_h, height(v));
                if (shell >= best_h) return;
            }
        }
    }

    /// One prefix shell: every (n-1)-tuple whose maximal coordinate index
    /// falls in [prev, cur).  Work is striped over the first coordinate
    /// when several jobs are configured; merging keeps determinism.
    void scan_shell(SearchAccumulator& acc,
                    const detail::LastVariableSlices& slices,
                    std::size_t prev, std::size_t cur, bool collect_all) {
        unsigned jobs = std::max(1u, limits_.jobs);
        if (jobs == 1 || cur < 2) {
            scan_shell_stripe(acc, slices, prev, cur, 0, 1, collect_all);
            return;
        }
        std::vector<SearchAccumulator> locals(jobs);
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            threads.emplace_back([&, t] {
                try {
                    scan_shell_stripe(locals[t], slices, prev, cur, t, jobs,
                                      collect_all);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (auto& local : locals)
            acc.merge(std::move(local), collect_all, limits_.max_solutions);
        if (acc.work > limits_.max_candidates)
            throw resource_limit_error("search: candidate budget exceeded");
    }

    void scan_shell_stripe(SearchAccumulator& acc,
                           const detail::LastVariableSlices& slices,
                           std::size_t prev, std::size_t cur,
                           std::size_t stripe, std::size_t step,
                           bool collect_all) {
        std::size_t m = vars_.size() - 1;
        std::vector<std::size_t> idx(m, 0);
        idx[0] = stripe;
        std::vector<Rat> prefix(m);
        while (idx[0] < cur) {
            bool fresh = false;
            for (std::size_t i : idx)
                if (i >= prev) fresh = true;
            if (fresh) {
                bump(acc);
                for (std::size_t i = 0; i < m; ++i)
                    prefix[i] = cands_->value(idx[i]);
                process_prefix(acc, slices, prefix, collect_all);
            }
            // Odometer: last coordinate fastest; the first advances by
            // `step` so stripes partition the box.
            std::size_t pos = m;
            while (pos-- > 0) {
                if (pos == 0) {
                    idx[0] += step;
                    break;
                }
                if (++idx[pos] < cur) break;
                idx[pos] = 0;
            }
            if (m == 1 && idx[0] >= cur) break;
        }
    }

    void process_prefix(SearchAccumulator& acc,
                        const detail::LastVariableSlices& slices,
                        const std::vector<Rat>& prefix_vals,
                        bool collect_all) {
        std::vector<Rat> point(vars_.empty() ? 0 : vars_.back() + 1, Rat(0));
        for (std::size_t i = 0; i + 1 < vars_.size(); ++i)
            point[vars_[i]] = prefix_vals[i];
        std::vector<Rat> coefs = slices.at(point);
        auto roots = detail::univariate_rational_roots(coefs, height_);
        if (roots.identically_zero) {
            // Every candidate value of the last variable works.
            if (collect_all) {
                for (std::size_t i = 0; i < cands_->size(); ++i)
                    offer_tuple(acc, prefix_vals, cands_->value(i),
                                collect_all);
            } else {
                offer_tuple(acc, prefix_vals, cands_->value(0), collect_all);
            }
            return;
        }
        for (const Rat& r : roots.roots)
            if (root_admissible(r))
                offer_tuple(acc, prefix_vals, r, collect_all);
    }

    void offer_tuple(SearchAccumulator& acc, const std::vector<Rat>& prefix,
                     const Rat& last, bool collect_all) {
        std::vector<Rat> tuple = prefix;
        tuple.push_back(last);
        acc.offer(tuple, collect_all, limits_.max_solutions);
    }

    void grid_run(SearchAccumulator& acc, bool collect_all) {
        detail::GridModuli filter(f_, limits_.moduli);
        std::size_t n = vars_.size();
        std::vector<Int> shells = cands_->shell_heights();
        std::size_t prev = 0;
        for (const Int& shell : shells) {
            std::size_t cur = cands_->count_height_leq(shell);
            std::vector<std::size_t> idx(n, 0);
            while (true) {
                bool fresh = false;
                for (std::size_t i : idx)
                    if (i >= prev) fresh = true;
                if (fresh) {
                    bump(acc);
                    std::vector<Rat> tuple(n);
                    bool all_int = true;
                    for (std::size_t i = 0; i < n; ++i) {
                        tuple[i] = cands_->value(idx[i]);
                        if (rat_den(tuple[i]) != 1) all_int = false;
                    }
                    bool skip = all_int && filter.rejects(point_at(tuple));
                    if (!skip && evaluate_at(tuple) == 0)
                        acc.offer(tuple, collect_all, limits_.max_solutions);
                }
                std::size_t pos = n;
                bool done = true;
                while (pos-- > 0) {
                    if (++idx[pos] < cur) {
                        done = false;
                        break;
                    }
                    idx[pos] = 0;
                }
                if (done) break;
            }
            prev = cur;
            if (!collect_all && acc.best) {
                Int best_h(0);
                for (const Rat& v : *acc.best)
                    best_h = std::max(best_h, height(v));
                if (shell >= best_h) return;
            }
        }
    }

    std::vector<Rat> point_at(const std::vector<Rat>& tuple) const {
        std::vector<Rat> point(vars_.back() + 1, Rat(0));
        for (std::size_t i = 0; i < vars_.size(); ++i)
            point[vars_[i]] = tuple[i];
        return point;
    }

    Rat evaluate_at(const std::vector<Rat>& tuple) const {
        return f_.evaluate(point_at(tuple));
    }

    std::vector<Rat> coefficient_vector() const {
        std::vector<Rat> coefs(f_.degree_in(vars_[0]) + 1, Rat(0));
        for (const auto& [m, c] : f_.terms()) {
            unsigned long e = vars_[0] < m.size() ? m[vars_[0]] : 0;
            coefs[e] += Rat(c);
        }
        return coefs;
    }

    const Polynomial& f_;
    const SubringDescriptor& w_;
    unsigned long height_;
    const SearchLimits& limits_;
    std::vector<VarId> vars_;
    std::shared_ptr<const Candidates1D> cands_;
};

inline SolutionWitness make_witness(const Polynomial& f,
                                    const std::vector<VarId>& vars,
                                    const std::vector<Rat>& tuple,
                                    unsigned long factor_bound) {
    SolutionWitness witness;
    for (std::size_t i = 0; i < vars.size(); ++i)
        witness.assignment[vars[i]] = tuple[i];
    witness.support = witness_support(witness.assignment, factor_bound);
    std::vector<Rat> point(vars.empty() ? 0 : vars.back() + 1, Rat(0));
    for (std::size_t i = 0; i < vars.size(); ++i) point[vars[i]] = tuple[i];
    if (f.evaluate(point) != 0)
        throw domain_error("internal: witness failed re-evaluation");
    return witness;
}

}  // namespace detail

/// Complete height-bounded search for a zero of f with coordinates in
/// R_W.  Found comes with the canonically least verified witness;
/// ExhaustedUpTo(H) asserts the full candidate grid was covered.
inline SearchOutcome search(const Polynomial& f, const SubringDescriptor& w,
                            unsigned long height,
                            const SearchLimits& limits = {}) {
    detail::SearchEngine engine(f, w, height, limits);
    detail::SearchAccumulator acc = engine.run(false);
    SearchOutcome outcome;
    outcome.height_bound = height;
    if (acc.best) {
        outcome.kind = SearchOutcome::Kind::Found;
        outcome.witness = detail::make_witness(
            f, engine.variables(), *acc.best, limits.factor_bound);
    }
    return outcome;
}

/// Every zero on the candidate grid, canonically sorted.
inline std::vector<SolutionWitness> find_all(const Polynomial& f,
                                             const SubringDescriptor& w,
                                             unsigned long height,
                                             const SearchLimits& limits = {}) {
    detail::SearchEngine engine(f, w, height, limits);
    detail::SearchAccumulator acc = engine.run(true);
    std::sort(acc.all.begin(), acc.all.end(), assignment_less);
    std::vector<SolutionWitness> out;
    out.reserve(acc.all.size());
    for (const auto& tuple : acc.all)
        out.push_back(detail::make_witness(f, engine.variables(), tuple,
                                           limits.factor_bound));
    return out;
}

/// Common zero of a polynomial system by direct grid enumeration over the
/// union of the variables; the independent reference route for the
/// sum-of-squares conjunction gadget.
inline SearchOutcome search_system(const std::vector<Polynomial>& system,
                                   const SubringDescriptor& w,
                                   unsigned long height,
                                   const SearchLimits& limits = {}) {
    if (system.empty()) throw domain_error("search_system: empty system");
    std::set<VarId> var_set;
    for (const Polynomial& g : system) {
        if (g.is_zero()) continue;
        for (VarId v : g.variables()) var_set.insert(v);
    }
    std::vector<VarId> vars(var_set.begin(), var_set.end());
    if (vars.size() > limits.max_variables)
        throw resource_limit_error("search_system: too many variables");
    SearchOutcome outcome;
    outcome.height_bound = height;

    CandidateStream stream(vars.size(), w, height);
    std::uint64_t work = 0;
    std::optional<std::vector<Rat>> best;
    while (auto tuple = stream.next()) {
        if (++work > limits.max_candidates)
            throw resource_limit_error("search_system: budget exceeded");
        std::vector<Rat> point(vars.empty() ? 0 : vars.back() + 1, Rat(0));
        for (std::size_t i = 0; i < vars.size(); ++i)
            point[vars[i]] = (*tuple)[i];
        bool all_zero = true;
        for (const Polynomial& g : system) {
            if (g.evaluate(point) != 0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            best = *tuple;
            break;  // stream order is canonical, first hit is least
        }
    }
    if (best) {
        outcome.kind = SearchOutcome::Kind::Found;
        SolutionWitness witness;
        for (std::size_t i = 0; i < vars.size(); ++i)
            witness.assignment[vars[i]] = (*best)[i];
        witness.support =
            witness_support(witness.assignment, limits.factor_bound);
        outcome.witness = witness;
    }
    return outcome;
}

}  // namespace htpq
