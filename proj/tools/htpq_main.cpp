// Command line harness: every library operation behind one binary with
// structured single-line output records.  stdout carries only
// deterministic records; timing and diagnostics go to stderr.  Exit
// codes: 0 success / positive verdict, 1 negative verdict or
// refutation, 2 budget exhaustion or undecided, 3 bad input, 4 bug.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htpq/category.hpp"
#include "htpq/definability.hpp"
#include "htpq/measure.hpp"
#include "htpq/poly_code.hpp"
#include "htpq/reductions.hpp"
#include "htpq/store.hpp"

namespace {

using namespace htpq;

void emit(const Record& r) { std::cout << r.line() << "\n"; }

std::string int_set_text(const std::set<Int>& s) {
    std::string out;
    for (const Int& p : s) {
        if (!out.empty()) out += ',';
        out += p.get_str();
    }
    return out;
}

std::string now_stamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Context {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string store_path;

    SearchLimits limits() const {
        SearchLimits l;
        l.jobs = jobs;
        return l;
    }

    // Primary records are byte-stable; wall-clock stamps live in a
    // sidecar file so reruns diff clean.
    void persist(const Record& r) const {
        if (store_path.empty()) return;
        store_append(store_path, r);
        Record stamp;
        stamp.add("stamp", now_stamp());
        stamp.add("kind", r.get("kind").value_or(""));
        store_append(store_path + ".times", stamp);
    }
};

bool blank(const std::string& line) {
    for (char c : line)
        if (c != ' ' && c != '\t') return false;
    return true;
}

std::vector<std::string> read_payload_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (!blank(line)) out.push_back(line);
    }
    return out;
}

std::vector<Polynomial> read_poly_file(const std::string& path) {
    std::vector<Polynomial> out;
    for (const std::string& line : read_payload_lines(path))
        out.push_back(parse_polynomial(line));
    return out;
}

std::vector<Rat> read_probe_file(const std::string& path) {
    std::vector<Rat> out;
    for (const std::string& line : read_payload_lines(path)) {
        std::istringstream in(line);
        std::string token;
        while (in >> token) out.push_back(parse_rational(token));
    }
    return out;
}

std::set<Int> parse_primes(const std::string& text) {
    std::set<Int> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        Int p;
        try {
            p = Int(item);
        } catch (const std::invalid_argument&) {
            throw parse_error("bad prime: " + item);
        }
        if (!is_prime(p)) throw parse_error("not a prime: " + item);
        out.insert(p);
    }
    return out;
}

// Model spec file: one field per line, "name = value", with h_plus and
// h_times in the same textual polynomial syntax as everywhere else.
std::map<std::string, std::string> read_keyvalue_file(
    const std::string& path) {
    std::map<std::string, std::string> out;
    for (const std::string& line : read_payload_lines(path)) {
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("spec line needs name = value: " + line);
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b = s.find_last_not_of(" \t");
            if (a == std::string::npos) return std::string();
            return s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw parse_error("spec line with empty name");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

int run_solve(const Context& ctx, const std::string& poly,
              const std::string& ring, unsigned long height) {
    Polynomial f = parse_polynomial(poly);
    SubringDescriptor w = parse_descriptor(ring);
    SearchOutcome out = search(f, w, height, ctx.limits());
    Record r;
    r.add("kind", "solve");
    r.add("poly", polynomial_to_string(f));
    r.add("ring", w.to_string());
    r.add("height", std::to_string(height));
    r.add("outcome", out.found() ? "found" : "exhausted");
    if (out.witness) {
        r.add("witness", assignment_to_text(out.witness->assignment));
        r.add("support", int_set_text(out.witness->support));
    }
    emit(r);
    ctx.persist(r);
    return out.found() ? 0 : 2;
}

int run_reduce_homogenize(const Context& ctx, const std::string& poly) {
    Polynomial f = parse_polynomial(poly);
    HomogenizationResult hr = homogenize_with_positivity(f);
    Record r;
    r.add("kind", "reduce");
    r.add("op", "homogenize");
    r.add("poly", polynomial_to_string(f));
    r.add("reduced", polynomial_to_string(hr.reduced));
    r.add("homogenizer", "x" + std::to_string(hr.y));
    r.add("squares", "x" + std::to_string(hr.a) + ",x" + std::to_string(hr.b) +
                         ",x" + std::to_string(hr.c) + ",x" +
                         std::to_string(hr.d));
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_reduce_conjoin(const Context& ctx, const std::string& polys_file) {
    std::vector<Polynomial> gs = read_poly_file(polys_file);
    Polynomial joint = conjoin(gs);
    Record r;
    r.add("kind", "reduce");
    r.add("op", "conjoin");
    r.add("count", std::to_string(gs.size()));
    r.add("reduced", polynomial_to_string(joint));
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_reduce_semilocal(const Context& ctx, const std::string& poly,
                         const std::string& exclude,
                         const std::string& gadget_file, bool mock) {
    Polynomial g = parse_polynomial(poly);
    std::set<Int> a0 = parse_primes(exclude);
    GadgetRegistry registry;
    if (!gadget_file.empty()) {
        std::size_t lineno = 0;
        for (const std::string& line : read_payload_lines(gadget_file)) {
            ++lineno;
            Record rec = Record::parse(line);
            GadgetEntry entry;
            try {
                entry.prime = Int(rec.need("prime"));
            } catch (const std::invalid_argument&) {
                throw parse_error("gadget entry " + std::to_string(lineno) +
                                  ": bad prime");
            }
            entry.gadget = parse_polynomial(rec.need("poly"));
            entry.semantics = rec.need("semantics");
            registry.add(std::move(entry));
        }
    }
    if (mock)
        for (const Int& p : a0)
            if (registry.find(p) == nullptr)
                registry.add({p, mock_gadget_polynomial(), kMockSemanticsTag});
    SemilocalResult res = semilocal_reduce(g, a0, registry);
    Record r;
    r.add("kind", "reduce");
    r.add("op", "semilocal");
    r.add("poly", polynomial_to_string(g));
    r.add("exclude", int_set_text(a0));
    r.add("reduced", polynomial_to_string(res.reduced));
    r.add("instances", std::to_string(res.instances.size()));
    if (res.uses_mock) r.add("semantics", "mock");
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_oracle_quad(const Context& ctx, const std::string& poly,
                    const std::string& ring) {
    Polynomial f = parse_polynomial(poly);
    SubringDescriptor w = parse_descriptor(ring);
    auto verdict = decide_family_member(f, w, ctx.limits().factor_bound);
    Record r;
    r.add("kind", "oracle");
    r.add("op", "quad");
    r.add("poly", polynomial_to_string(f));
    r.add("ring", w.to_string());
    if (!verdict) {
        r.add("verdict", "not-in-family");
        emit(r);
        ctx.persist(r);
        return 2;
    }
    r.add("verdict", verdict->solvable ? "solvable" : "insolvable");
    r.add("method", verdict->method);
    if (!verdict->reason.empty()) r.add("reason", verdict->reason);
    if (verdict->witness)
        r.add("witness", assignment_to_text(*verdict->witness));
    emit(r);
    ctx.persist(r);
    for (const PlaceReport& pr : verdict->places) {
        Record place;
        place.add("kind", "oracle-place");
        place.add("place", pr.place);
        place.add("ok", pr.ok ? "1" : "0");
        if (!pr.note.empty()) place.add("note", pr.note);
        emit(place);
    }
    return verdict->solvable ? 0 : 1;
}

int run_certify(const Context& ctx, const std::string& poly,
                std::size_t depth, unsigned long height) {
    Polynomial f = parse_polynomial(poly);
    std::vector<CylinderCertificate> pos =
        positive_certificates(f, depth, height, ctx.limits());
    auto neg = negative_certificates(f, depth, ctx.limits().factor_bound);
    for (const CylinderCertificate& cert : pos) {
        Record rec = certificate_record(cert, ctx.seed);
        emit(rec);
        ctx.persist(rec);
    }
    if (neg)
        for (const CylinderCertificate& cert : *neg) {
            Record rec = certificate_record(cert, ctx.seed);
            emit(rec);
            ctx.persist(rec);
        }
    Record summary;
    summary.add("kind", "certify");
    summary.add("poly", polynomial_to_string(f));
    summary.add("depth", std::to_string(depth));
    summary.add("height", std::to_string(height));
    summary.add("positive", std::to_string(pos.size()));
    summary.add("negative", neg ? std::to_string(neg->size()) : "0");
    summary.add("family", neg ? "1" : "0");
    emit(summary);
    return 0;
}

int run_probe(const Context& ctx, const std::string& poly,
              const std::string& ring, std::size_t depth,
              unsigned long height) {
    Polynomial f = parse_polynomial(poly);
    SubringDescriptor w = parse_descriptor(ring);
    ProbeStatus st = boundary_probe(f, w, depth, height, ctx.limits());
    Record r;
    r.add("kind", "probe");
    r.add("poly", polynomial_to_string(f));
    r.add("ring", w.to_string());
    r.add("depth", std::to_string(depth));
    r.add("height", std::to_string(height));
    int code = 2;
    switch (st.kind) {
        case ProbeStatus::Kind::InA:
            r.add("verdict", "in-class");
            r.add("witness", assignment_to_text(st.witness->assignment));
            code = 0;
            break;
        case ProbeStatus::Kind::InComplementInterior:
            r.add("verdict", "complement-interior");
            r.add("exclusion", int_set_text(st.exclusion));
            if (st.reason && !st.reason->reason.empty())
                r.add("reason", st.reason->reason);
            code = 1;
            break;
        case ProbeStatus::Kind::UndecidedUpTo:
            r.add("verdict", "undecided");
            code = 2;
            break;
    }
    emit(r);
    ctx.persist(r);
    return code;
}

int run_phi(const Context& ctx, const std::string& poly,
            const std::string& ring, unsigned rounds) {
    Polynomial f = parse_polynomial(poly);
    SubringDescriptor w = parse_descriptor(ring);
    PhiBudget budget;
    budget.rounds = rounds;
    budget.limits = ctx.limits();
    PhiResult res = phi_decide(f, w, budget);
    Record r;
    r.add("kind", "phi");
    r.add("poly", polynomial_to_string(f));
    r.add("ring", w.to_string());
    int code = 2;
    switch (res.kind) {
        case PhiResult::Kind::Member:
            r.add("verdict", "member");
            r.add("witness", assignment_to_text(res.witness->assignment));
            code = 0;
            break;
        case PhiResult::Kind::NonMember:
            r.add("verdict", "non-member");
            r.add("exclusion", int_set_text(res.exclusion));
            if (res.reason && !res.reason->reason.empty())
                r.add("reason", res.reason->reason);
            code = 1;
            break;
        case PhiResult::Kind::Undecided:
            r.add("verdict", "undecided");
            code = 2;
            break;
    }
    r.add("rounds", std::to_string(res.rounds_used));
    r.add("height", std::to_string(res.max_height));
    emit(r);
    ctx.persist(r);
    return code;
}

int run_generic(const Context& ctx, const std::string& ring,
                const std::string& polys_file, unsigned rounds) {
    SubringDescriptor w = parse_descriptor(ring);
    std::vector<Polynomial> fs = read_poly_file(polys_file);
    PhiBudget budget;
    budget.rounds = rounds;
    budget.limits = ctx.limits();
    GenericCheckResult res = generic_check(w, fs, budget);
    for (std::size_t i = 0; i < fs.size(); ++i) {
        Record item;
        item.add("kind", "generic-item");
        item.add("poly", polynomial_to_string(fs[i]));
        const PhiResult& pr = res.results[i];
        item.add("verdict",
                 pr.kind == PhiResult::Kind::Member
                     ? "member"
                     : pr.kind == PhiResult::Kind::NonMember ? "non-member"
                                                             : "undecided");
        emit(item);
    }
    Record summary;
    summary.add("kind", "generic");
    summary.add("ring", w.to_string());
    summary.add("polys", std::to_string(fs.size()));
    summary.add("passes", res.passes ? "1" : "0");
    emit(summary);
    ctx.persist(summary);
    return res.passes ? 0 : 2;
}

int run_measure(const Context& ctx, const std::string& poly,
                unsigned long height, std::uint64_t samples,
                bool exact_family, std::size_t depth, bool depth_given) {
    Polynomial f = parse_polynomial(poly);
    Record r;
    r.add("kind", "measure");
    r.add("poly", polynomial_to_string(f));
    MeasureEstimate est;
    if (depth_given) {
        BoundaryGapReport gap = boundary_gap(f, height, depth, samples,
                                             ctx.seed, ctx.limits());
        est = gap.estimate;
        r.add("depth", std::to_string(depth));
        r.add("lower_class", gap.lower_A.get_str());
        r.add("lower_complement", gap.lower_comp.get_str());
        r.add("gap", gap.gap.get_str());
        r.add("family", gap.oracle_family ? "1" : "0");
    } else {
        est = estimate_measure_A(f, height, samples, ctx.seed, ctx.limits());
    }
    r.add("height", std::to_string(est.height));
    r.add("samples", std::to_string(est.samples));
    r.add("seed", std::to_string(est.seed));
    r.add("value", est.value.get_str());
    r.add("ci_low", est.ci_low.get_str());
    r.add("ci_high", est.ci_high.get_str());
    if (exact_family) {
        auto exact = exact_family_measure(f, ctx.limits().factor_bound);
        r.add("exact_family", exact ? "1" : "0");
        if (exact) r.add("exact", exact->get_str());
    }
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_model_check(const Context& ctx, const std::string& spec_file,
                    const std::string& ring, long range,
                    unsigned long height) {
    std::map<std::string, std::string> kv = read_keyvalue_file(spec_file);
    for (const char* key : {"n", "h", "h_plus", "h_times"})
        if (!kv.count(key))
            throw parse_error(std::string("spec file misses '") + key + "'");
    DiophantineModelSpec spec;
    try {
        std::size_t pos = 0;
        spec.width = std::stoul(kv.at("n"), &pos);
        if (pos != kv.at("n").size()) throw std::invalid_argument("n");
    } catch (const std::logic_error&) {
        throw parse_error("spec file: bad n");
    }
    spec.h = parse_polynomial(kv.at("h"));
    spec.h_plus = parse_polynomial(kv.at("h_plus"));
    spec.h_times = parse_polynomial(kv.at("h_times"));
    SubringDescriptor w = parse_descriptor(ring);
    ModelCheckReport rep = check_model(spec, w, range, height, ctx.limits());
    for (const FactReport& f : rep.facts) {
        Record item;
        item.add("kind", "model-fact");
        item.add("fact", f.fact);
        item.add("status", fact_status_text(f.status));
        if (!f.note.empty()) item.add("note", f.note);
        emit(item);
    }
    Record summary;
    summary.add("kind", "model-check");
    summary.add("ring", w.to_string());
    summary.add("range", std::to_string(range));
    summary.add("height", std::to_string(height));
    summary.add("refuted", rep.refuted ? "1" : "0");
    summary.add("complete", rep.complete ? "1" : "0");
    summary.add("summary", rep.summary);
    emit(summary);
    ctx.persist(summary);
    if (rep.refuted) return 1;
    return rep.complete ? 0 : 2;
}

int run_exdef_check(const Context& ctx, const std::string& g_text,
                    const std::string& ring, const std::string& probes_file,
                    unsigned long height) {
    ExistentialDefSpec spec;
    spec.g = parse_polynomial(g_text);
    SubringDescriptor w = parse_descriptor(ring);
    std::vector<Rat> probes = read_probe_file(probes_file);
    ExistentialDefReport rep =
        check_existential_def(spec, w, probes, height, ctx.limits());
    for (const ProbeReport& p : rep.probes) {
        Record item;
        item.add("kind", "exdef-probe");
        item.add("probe", p.probe.get_str());
        item.add("verdict", probe_verdict_text(p.status));
        if (!p.note.empty()) item.add("note", p.note);
        emit(item);
    }
    Record summary;
    summary.add("kind", "exdef-check");
    summary.add("g", polynomial_to_string(spec.g));
    summary.add("ring", w.to_string());
    summary.add("height", std::to_string(height));
    summary.add("refuted", rep.refuted ? "1" : "0");
    summary.add("complete", rep.complete ? "1" : "0");
    summary.add("summary", rep.summary);
    emit(summary);
    ctx.persist(summary);
    if (rep.refuted) return 1;
    return rep.complete ? 0 : 2;
}

int run_encode(const Context& ctx, const std::string& poly) {
    Polynomial f = parse_polynomial(poly);
    Record r;
    r.add("kind", "encode");
    r.add("poly", polynomial_to_string(f));
    r.add("code", encode(f).get_str());
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_decode(const Context& ctx, const std::string& number) {
    Int code;
    try {
        code = Int(number);
    } catch (const std::invalid_argument&) {
        throw parse_error("decode: bad natural number: " + number);
    }
    if (code < 0) throw parse_error("decode: number must be nonnegative");
    Polynomial f = decode(code);
    Record r;
    r.add("kind", "decode");
    r.add("code", code.get_str());
    r.add("poly", polynomial_to_string(f));
    emit(r);
    ctx.persist(r);
    return 0;
}

int run_store_verify(const Context& ctx) {
    if (ctx.store_path.empty())
        throw domain_error("store verify needs --store <path>");
    auto [store, audit] =
        store_load(ctx.store_path, ctx.limits().factor_bound);
    for (const StoreIssue& issue : audit.corrupt) {
        Record r;
        r.add("kind", "store-audit");
        r.add("problem", "corrupt");
        r.add("line", std::to_string(issue.line));
        r.add("detail", issue.message);
        emit(r);
    }
    for (const StoreIssue& issue : audit.rejected) {
        Record r;
        r.add("kind", "store-audit");
        r.add("problem", "rejected");
        r.add("line", std::to_string(issue.line));
        r.add("detail", issue.message);
        emit(r);
    }
    Record summary;
    summary.add("kind", "store-verify");
    summary.add("records", std::to_string(store.records.size()));
    summary.add("corrupt", std::to_string(audit.corrupt.size()));
    summary.add("rejected", std::to_string(audit.rejected.size()));
    summary.add("revalidated", std::to_string(audit.revalidated));
    summary.add("clean", audit.clean() ? "1" : "0");
    emit(summary);
    return audit.clean() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    auto started = std::chrono::steady_clock::now();
    CLI::App app{"exact solvability experiments over subrings of Q"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file mirroring the global flags");

    Context ctx;
    CLI::Option* seed_opt =
        app.add_option("--seed", ctx.seed, "seed for sampling commands");
    app.add_option("--jobs", ctx.jobs, "solver worker threads")
        ->check(CLI::Range(1u, 64u));
    app.add_option("--store", ctx.store_path, "certificate store path");

    int code = 0;

    auto* solve = app.add_subcommand("solve", "search for a zero in R_W");
    std::string solve_poly, solve_ring = "include:";
    unsigned long solve_height = 10;
    solve->add_option("--poly", solve_poly, "polynomial text")->required();
    solve->add_option("--ring", solve_ring, "subring descriptor");
    solve->add_option("--height", solve_height, "height bound")->required();
    solve->callback(
        [&] { code = run_solve(ctx, solve_poly, solve_ring, solve_height); });

    auto* reduce = app.add_subcommand("reduce", "polynomial reductions");
    reduce->require_subcommand(1);
    auto* homog = reduce->add_subcommand(
        "homogenize", "homogeneous positive-definite form of f");
    std::string homog_poly;
    homog->add_option("--poly", homog_poly, "polynomial text")->required();
    homog->callback([&] { code = run_reduce_homogenize(ctx, homog_poly); });
    auto* conj = reduce->add_subcommand("conjoin", "sum-of-squares system");
    std::string conj_file;
    conj->add_option("--polys", conj_file, "file, one polynomial per line")
        ->required();
    conj->callback([&] { code = run_reduce_conjoin(ctx, conj_file); });
    auto* semi = reduce->add_subcommand("semilocal",
                                        "attach prime-exclusion gadgets");
    std::string semi_poly, semi_exclude, semi_gadgets;
    bool semi_mock = false;
    semi->add_option("--poly", semi_poly, "polynomial text")->required();
    semi->add_option("--exclude", semi_exclude, "primes, comma separated")
        ->required();
    semi->add_option("--gadgets", semi_gadgets,
                     "gadget file: prime= poly= semantics= records");
    semi->add_flag("--mock", semi_mock,
                   "fill missing gadgets with the placeholder");
    semi->callback([&] {
        code = run_reduce_semilocal(ctx, semi_poly, semi_exclude,
                                    semi_gadgets, semi_mock);
    });

    auto* oracle = app.add_subcommand("oracle", "decidable verdicts");
    oracle->require_subcommand(1);
    auto* quad = oracle->add_subcommand("quad",
                                        "family membership and solvability");
    std::string quad_poly, quad_ring = "include:";
    quad->add_option("--poly", quad_poly, "polynomial text")->required();
    quad->add_option("--ring", quad_ring, "subring descriptor");
    quad->callback([&] { code = run_oracle_quad(ctx, quad_poly, quad_ring); });

    auto* certify =
        app.add_subcommand("certify", "minimal cylinder certificates");
    std::string cert_poly;
    std::size_t cert_depth = 3;
    unsigned long cert_height = 10;
    certify->add_option("--poly", cert_poly, "polynomial text")->required();
    certify->add_option("--depth", cert_depth, "condition length bound")
        ->required();
    certify->add_option("--height", cert_height, "height bound")->required();
    certify->callback(
        [&] { code = run_certify(ctx, cert_poly, cert_depth, cert_height); });

    auto* probe = app.add_subcommand("probe", "boundary trichotomy for one W");
    std::string probe_poly, probe_ring;
    std::size_t probe_depth = 4;
    unsigned long probe_height = 10;
    probe->add_option("--poly", probe_poly, "polynomial text")->required();
    probe->add_option("--ring", probe_ring, "subring descriptor")->required();
    probe->add_option("--depth", probe_depth, "prime indices examined");
    probe->add_option("--height", probe_height, "height bound");
    probe->callback([&] {
        code = run_probe(ctx, probe_poly, probe_ring, probe_depth,
                         probe_height);
    });

    auto* phi = app.add_subcommand("phi", "dovetailed membership decision");
    std::string phi_poly, phi_ring;
    unsigned phi_rounds = 8;
    phi->add_option("--poly", phi_poly, "polynomial text")->required();
    phi->add_option("--ring", phi_ring, "subring descriptor")->required();
    phi->add_option("--rounds", phi_rounds, "doubling rounds");
    phi->callback(
        [&] { code = run_phi(ctx, phi_poly, phi_ring, phi_rounds); });

    auto* generic =
        app.add_subcommand("generic", "phi-decidability of a polynomial list");
    std::string gen_ring, gen_polys;
    unsigned gen_rounds = 8;
    generic->add_option("--ring", gen_ring, "subring descriptor")->required();
    generic->add_option("--polys", gen_polys, "file, one polynomial per line")
        ->required();
    generic->add_option("--rounds", gen_rounds, "doubling rounds");
    generic->callback(
        [&] { code = run_generic(ctx, gen_ring, gen_polys, gen_rounds); });

    auto* measure =
        app.add_subcommand("measure", "class measure of solvability");
    std::string meas_poly;
    unsigned long meas_height = 10;
    std::uint64_t meas_samples = 1000;
    bool meas_exact = false;
    std::size_t meas_depth = 0;
    measure->add_option("--poly", meas_poly, "polynomial text")->required();
    measure->add_option("--height", meas_height, "height bound")->required();
    measure->add_option("--samples", meas_samples, "sample count")
        ->required();
    measure->add_flag("--exact-family", meas_exact,
                      "also report the exact family measure");
    CLI::Option* meas_depth_opt = measure->add_option(
        "--depth", meas_depth, "also certify a boundary gap at this depth");
    measure->callback([&] {
        if (seed_opt->count() == 0)
            throw domain_error("measure: --seed is required for sampling");
        code = run_measure(ctx, meas_poly, meas_height, meas_samples,
                           meas_exact, meas_depth, meas_depth_opt->count() > 0);
    });

    auto* model = app.add_subcommand("model-check",
                                     "scrutinize a diophantine model of Z");
    std::string model_spec, model_ring;
    long model_range = 5;
    unsigned long model_height = 20;
    model->add_option("--spec", model_spec, "spec file: n, h, h_plus, h_times")
        ->required();
    model->add_option("--ring", model_ring, "subring descriptor")->required();
    model->add_option("--range", model_range, "integer window radius")
        ->required();
    model->add_option("--height", model_height, "height bound")->required();
    model->callback([&] {
        code = run_model_check(ctx, model_spec, model_ring, model_range,
                               model_height);
    });

    auto* exdef = app.add_subcommand("exdef-check",
                                     "scrutinize an existential definition");
    std::string ex_g, ex_ring, ex_probes;
    unsigned long ex_height = 10;
    exdef->add_option("--g", ex_g, "defining polynomial text")->required();
    exdef->add_option("--ring", ex_ring, "subring descriptor")->required();
    exdef->add_option("--probes", ex_probes, "file of rational probes")
        ->required();
    exdef->add_option("--height", ex_height, "height bound")->required();
    exdef->callback([&] {
        code = run_exdef_check(ctx, ex_g, ex_ring, ex_probes, ex_height);
    });

    auto* enc = app.add_subcommand("encode", "polynomial to natural number");
    std::string enc_poly;
    enc->add_option("--poly", enc_poly, "polynomial text")->required();
    enc->callback([&] { code = run_encode(ctx, enc_poly); });

    auto* dec = app.add_subcommand("decode", "natural number to polynomial");
    std::string dec_number;
    dec->add_option("--number", dec_number, "natural number")->required();
    dec->callback([&] { code = run_decode(ctx, dec_number); });

    auto* store = app.add_subcommand("store", "certificate store maintenance");
    store->require_subcommand(1);
    auto* verify = store->add_subcommand(
        "verify", "re-validate every record in the store");
    verify->callback([&] { code = run_store_verify(ctx); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int status = app.exit(e);
        return status == 0 ? 0 : 3;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const resource_limit_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cerr << "time_ms=" << elapsed << "\n";
    return code;
}
