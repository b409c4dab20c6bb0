#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace htpq {

/// One structured line: ordered name=value pairs, space separated,
/// values quoted when they need it.  Greppable, diffable, append-only
/// friendly; newlines are banned so a record never spans lines.

inline bool is_record_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

namespace detail {

inline bool needs_quoting(const std::string& value) {
    if (value.empty()) return true;
    for (char c : value)
        if (c == ' ' || c == '"' || c == '\\' || c == '=') return true;
    return false;
}

inline std::string quote_value(const std::string& value) {
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

struct Record {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(const std::string& key, const std::string& value) {
        if (!is_record_key(key))
            throw domain_error("record: bad key '" + key + "'");
        if (value.find('\n') != std::string::npos ||
            value.find('\r') != std::string::npos)
            throw domain_error("record: newline in value of '" + key + "'");
        fields.emplace_back(key, value);
    }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return v;
        return std::nullopt;
    }

    std::string need(const std::string& key) const {
        auto v = get(key);
        if (!v) throw parse_error("record: missing field '" + key + "'");
        return *v;
    }

    std::string line() const {
        std::string out;
        for (const auto& [k, v] : fields) {
            if (!out.empty()) out += ' ';
            out += k;
            out += '=';
            out += detail::needs_quoting(v) ? detail::quote_value(v) : v;
        }
        return out;
    }

    /// Inverse of line(); throws parse_error on any malformed token.
    static Record parse(const std::string& text) {
        Record r;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && text[i] == ' ') ++i;
            if (i >= text.size()) break;
            std::size_t eq = text.find('=', i);
            if (eq == std::string::npos)
                throw parse_error("record: token without '='");
            std::string key = text.substr(i, eq - i);
            if (!is_record_key(key))
                throw parse_error("record: bad key '" + key + "'");
            i = eq + 1;
            std::string value;
            if (i < text.size() && text[i] == '"') {
                ++i;
                bool closed = false;
                while (i < text.size()) {
                    char c = text[i++];
                    if (c == '\\') {
                        if (i >= text.size())
                            throw parse_error("record: dangling escape");
                        char e = text[i++];
                        if (e != '"' && e != '\\')
                            throw parse_error("record: bad escape");
                        value += e;
                    } else if (c == '"') {
                        closed = true;
                        break;
                    } else {
                        value += c;
                    }
                }
                if (!closed)
                    throw parse_error("record: unterminated quote");
                if (i < text.size() && text[i] != ' ')
                    throw parse_error("record: junk after quoted value");
            } else {
                std::size_t end = text.find(' ', i);
                if (end == std::string::npos) end = text.size();
                value = text.substr(i, end - i);
                if (value.find('"') != std::string::npos ||
                    value.find('\\') != std::string::npos)
                    throw parse_error("record: unquoted special character");
                i = end;
            }
            r.fields.emplace_back(std::move(key), std::move(value));
        }
        if (r.fields.empty()) throw parse_error("record: empty line");
        return r;
    }

    bool operator==(const Record& o) const { return fields == o.fields; }
};

}  // namespace htpq
