#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "category.hpp"
#include "poly_text.hpp"
#include "records.hpp"

namespace htpq {

/// Assignment text: "x0=1/5 x2=-3", variables ascending.  Empty
/// assignments serialize to the empty string.
inline std::string assignment_to_text(const std::map<VarId, Rat>& a) {
    std::string out;
    for (const auto& [v, q] : a) {
        if (!out.empty()) out += ' ';
        out += 'x';
        out += std::to_string(v);
        out += '=';
        out += q.get_str();
    }
    return out;
}

inline Rat parse_rational(const std::string& text) {
    if (text.empty()) throw parse_error("empty rational");
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(text));
        return make_rational(Int(text.substr(0, slash)),
                             Int(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw parse_error("bad rational: " + text);
    }
}

inline std::map<VarId, Rat> parse_assignment(const std::string& text) {
    std::map<VarId, Rat> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        std::size_t eq = token.find('=');
        if (token.size() < 4 || token[0] != 'x' || eq == std::string::npos ||
            eq < 2)
            throw parse_error("bad assignment token: " + token);
        unsigned long v = 0;
        try {
            std::size_t pos = 0;
            v = std::stoul(token.substr(1, eq - 1), &pos);
            if (pos != eq - 1) throw parse_error("bad variable: " + token);
        } catch (const std::logic_error&) {
            throw parse_error("bad variable: " + token);
        }
        if (!out.emplace(static_cast<VarId>(v),
                         parse_rational(token.substr(eq + 1)))
                 .second)
            throw parse_error("duplicate variable: " + token);
    }
    return out;
}

/// Record encodings for the two certificate kinds.  Stored fields are
/// claims, never trusted on load; see store_load.
inline Record certificate_record(const CylinderCertificate& cert,
                                 std::uint64_t seed) {
    Record r;
    bool positive = cert.kind == CylinderCertificate::Kind::Positive;
    r.add("kind", positive ? "positive-cylinder" : "negative-cylinder");
    r.add("poly", polynomial_to_string(cert.target));
    r.add("condition", cert.sigma.to_string());
    if (positive) {
        if (!cert.witness)
            throw domain_error("certificate_record: positive without witness");
        r.add("witness", assignment_to_text(cert.witness->assignment));
    } else {
        r.add("reason", cert.reason && !cert.reason->reason.empty()
                            ? cert.reason->reason
                            : "oracle: insolvable");
    }
    r.add("seed", std::to_string(seed));
    return r;
}

struct StoreIssue {
    std::size_t line = 0;
    std::string message;
};

struct CertificateStore {
    std::vector<Record> records;
    std::vector<std::size_t> lines;  // 1-based source line of each record
};

struct StoreAudit {
    std::vector<StoreIssue> corrupt;   // unparsable lines
    std::vector<StoreIssue> rejected;  // parsed but failed re-validation
    std::size_t revalidated = 0;       // certificates re-derived successfully
    bool clean() const { return corrupt.empty() && rejected.empty(); }
};

inline void store_append(const std::string& path, const Record& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw domain_error("store_append: cannot open " + path);
    out << record.line() << '\n';
    if (!out) throw domain_error("store_append: write failed on " + path);
}

namespace detail {

/// Rebuild and re-derive one stored certificate claim.  Returns an
/// error message, or empty on success.
inline std::string revalidate_record(const Record& r,
                                     unsigned long factor_bound) {
    auto kind = r.get("kind");
    if (!kind) return "missing kind";
    try {
        if (*kind == "positive-cylinder" || *kind == "negative-cylinder") {
            CylinderCertificate cert;
            cert.target = parse_polynomial(r.need("poly"));
            cert.sigma = Condition::parse(r.need("condition"));
            if (*kind == "positive-cylinder") {
                cert.kind = CylinderCertificate::Kind::Positive;
                SolutionWitness w;
                w.assignment = parse_assignment(r.need("witness"));
                w.support = witness_support(w.assignment, factor_bound);
                cert.witness = std::move(w);
            } else {
                cert.kind = CylinderCertificate::Kind::Negative;
            }
            if (!validate_certificate(cert, factor_bound))
                return "certificate failed re-validation";
            return "";
        }
        if (*kind == "witness" || (*kind == "solve" && r.get("witness"))) {
            Polynomial f = parse_polynomial(r.need("poly"));
            SubringDescriptor w = parse_descriptor(r.need("ring"));
            std::map<VarId, Rat> a = parse_assignment(r.need("witness"));
            std::vector<Rat> point(f.variable_span(), Rat(0));
            for (const auto& [v, q] : a) {
                if (!w.contains_rational(q, factor_bound))
                    return "witness coordinate outside the ring";
                if (v < point.size()) point[v] = q;
            }
            for (VarId v : f.variables())
                if (!a.count(v)) return "witness misses a variable";
            if (f.evaluate(point) != 0) return "witness does not evaluate to 0";
            return "";
        }
        // Other record kinds carry no re-derivable claim; check shape only.
        if (auto poly = r.get("poly")) parse_polynomial(*poly);
        if (auto cond = r.get("condition")) Condition::parse(*cond);
        if (auto ring = r.get("ring")) parse_descriptor(*ring);
        return "";
    } catch (const parse_error& e) {
        return e.what();
    } catch (const domain_error& e) {
        return e.what();
    }
}

}  // namespace detail

/// Load a store file.  Corrupt lines are reported with their line
/// number and skipped; every surviving record is re-validated.  The
/// load itself never throws on bad content, only on a missing file.
inline std::pair<CertificateStore, StoreAudit> store_load(
    const std::string& path,
    unsigned long factor_bound = kDefaultFactorBound) {
    std::ifstream in(path);
    if (!in) throw domain_error("store_load: cannot open " + path);
    CertificateStore store;
    StoreAudit audit;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Record record;
        try {
            record = Record::parse(line);
        } catch (const parse_error& e) {
            audit.corrupt.push_back({lineno, e.what()});
            continue;
        }
        std::string err = detail::revalidate_record(record, factor_bound);
        if (!err.empty())
            audit.rejected.push_back({lineno, err});
        else
            ++audit.revalidated;
        store.records.push_back(std::move(record));
        store.lines.push_back(lineno);
    }
    return {std::move(store), std::move(audit)};
}

}  // namespace htpq
