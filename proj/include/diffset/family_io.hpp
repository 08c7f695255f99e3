#pragma once

// Family file formats. The primary format is a small JSON document with the
// sets as strictly increasing element arrays in colex order; a compact hex
// variant keeps one "<mask> <label>" line per set for large families. Both
// round-trip bit-exactly.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "construct.hpp"
#include "ground.hpp"

namespace diffset {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void validate_family(const Family& f, const std::string& where) {
    if (f.n < 1 || f.n > 64) throw ParseError(where + ": n out of range [1,64]");
    if (f.k < 0 || f.k > f.n) throw ParseError(where + ": k out of range [0,n]");
    if (f.labels.size() != f.sets.size()) throw ParseError(where + ": labels do not match sets");
    const std::uint64_t full = (f.n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << f.n) - 1);
    ESet prev;
    bool first = true;
    for (ESet s : f.sets) {
        if ((s.bits & ~full) != 0) throw ParseError(where + ": set outside the ground set");
        if (s.size() != f.k) throw ParseError(where + ": set of wrong size");
        if (!first && !(prev < s)) throw ParseError(where + ": sets not in strictly ascending colex order");
        prev = s;
        first = false;
    }
}

}  // namespace detail

inline nlohmann::ordered_json family_to_json(const Family& f) {
    nlohmann::ordered_json doc;
    doc["schema"] = "family/1";
    doc["kind"] = f.kind;
    doc["n"] = f.n;
    doc["k"] = f.k;
    auto sets = nlohmann::ordered_json::array();
    for (ESet s : f.sets) sets.push_back(to_elements(s));
    doc["sets"] = std::move(sets);
    auto labels = nlohmann::ordered_json::array();
    for (Label l : f.labels) labels.push_back(to_string(l));
    doc["labels"] = std::move(labels);
    return doc;
}

inline std::string family_to_json_string(const Family& f) { return family_to_json(f).dump(2) + "\n"; }

inline Family family_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("schema").get<std::string>() != "family/1") throw ParseError("family: unknown schema");
        Family f;
        f.kind = doc.at("kind").get<std::string>();
        f.n = doc.at("n").get<int>();
        f.k = doc.at("k").get<int>();
        for (const auto& arr : doc.at("sets")) {
            ESet s;
            int prev = -1;
            for (const auto& e : arr) {
                int v = e.get<int>();
                if (v <= prev) throw ParseError("family: set elements not strictly increasing");
                if (v < 0 || v >= f.n) throw ParseError("family: element out of range");
                s = s.with(v);
                prev = v;
            }
            f.sets.push_back(s);
        }
        if (doc.contains("labels")) {
            for (const auto& l : doc.at("labels")) {
                auto parsed = label_from_string(l.get<std::string>());
                if (!parsed) throw ParseError("family: unknown label '" + l.get<std::string>() + "'");
                f.labels.push_back(*parsed);
            }
        } else {
            f.labels.assign(f.sets.size(), Label::External);
        }
        detail::validate_family(f, "family");
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("family: malformed document: ") + e.what());
    }
}

inline std::string family_to_hex_string(const Family& f) {
    std::ostringstream out;
    out << "familyhex/1 n=" << f.n << " k=" << f.k << " kind=" << f.kind << "\n";
    const int width = (f.n + 3) / 4;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        std::ostringstream hex;
        hex << std::hex << f.sets[i].bits;
        std::string h = hex.str();
        out << std::string(static_cast<std::size_t>(width) > h.size() ? width - h.size() : 0, '0') << h << ' '
            << to_string(f.labels[i]) << "\n";
    }
    return out.str();
}

inline Family family_from_hex_string(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("familyhex: empty file");
    std::istringstream hs(header);
    std::string magic, nf, kf, kindf;
    hs >> magic >> nf >> kf >> kindf;
    if (magic != "familyhex/1" || nf.rfind("n=", 0) != 0 || kf.rfind("k=", 0) != 0 || kindf.rfind("kind=", 0) != 0)
        throw ParseError("familyhex: bad header");
    Family f;
    try {
        f.n = std::stoi(nf.substr(2));
        f.k = std::stoi(kf.substr(2));
    } catch (const std::exception&) {
        throw ParseError("familyhex: bad header numbers");
    }
    f.kind = kindf.substr(5);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string hex, label;
        ls >> hex >> label;
        std::uint64_t bits = 0;
        try {
            std::size_t pos = 0;
            bits = std::stoull(hex, &pos, 16);
            if (pos != hex.size()) throw ParseError("familyhex: bad mask '" + hex + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("familyhex: bad mask '" + hex + "'");
        }
        f.sets.push_back(ESet(bits));
        auto parsed = label_from_string(label);
        if (!parsed) throw ParseError("familyhex: unknown label '" + label + "'");
        f.labels.push_back(*parsed);
    }
    detail::validate_family(f, "familyhex");
    return f;
}

inline void write_family(const Family& f, const std::filesystem::path& path, const std::string& format = "json") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    if (format == "json")
        out << family_to_json_string(f);
    else if (format == "hex")
        out << family_to_hex_string(f);
    else
        throw std::invalid_argument("write_family: unknown format '" + format + "'");
    if (!out) throw ParseError("write failed: " + path.string());
}

inline Family read_family(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::size_t at = text.find_first_not_of(" \t\r\n");
    if (at == std::string::npos) throw ParseError("empty family file: " + path.string());
    if (text[at] == '{') {
        try {
            return family_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("family: JSON parse error in " + path.string() + ": " + e.what());
        }
    }
    return family_from_hex_string(text);
}

}  // namespace diffset
