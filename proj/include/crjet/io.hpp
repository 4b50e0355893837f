#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crjet/errors.hpp"
#include "crjet/expr.hpp"
#include "crjet/manifold.hpp"
#include "crjet/maps.hpp"

namespace crjet {

/// Line format shared by .crm and .crmap files: `key = value` pairs, '#'
/// comments, blank lines ignored. Header keys n, d and optionally label and
/// trunc precede the component assignments.
namespace fileformat {

struct Assignment {
    std::string key;
    std::string value;
    int line = 0;
    int value_col = 0;
};

inline std::vector<Assignment> read_assignments(std::istream& in) {
    std::vector<Assignment> out;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw parse_error("expected 'key = value'", lineno, 1);
        std::size_t kend = line.find_last_not_of(" \t", eq - 1);
        if (kend == std::string::npos || kend < a) throw parse_error("missing key", lineno, 1);
        std::string key = line.substr(a, kend - a + 1);
        std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
        std::size_t vend = line.find_last_not_of(" \t\r");
        if (vstart == std::string::npos || vend < vstart)
            throw parse_error("missing value for '" + key + "'", lineno, static_cast<int>(eq) + 2);
        out.push_back({key, line.substr(vstart, vend - vstart + 1), lineno,
                       static_cast<int>(vstart) + 1});
    }
    return out;
}

inline int parse_int(const Assignment& a, int lo, int hi) {
    try {
        std::size_t used = 0;
        int v = std::stoi(a.value, &used);
        if (used != a.value.size()) throw std::invalid_argument("");
        if (v < lo || v > hi) throw std::out_of_range("");
        return v;
    } catch (const std::exception&) {
        throw parse_error("'" + a.key + "' must be an integer in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]",
                          a.line, a.value_col);
    }
}

/// Splits "Q3" style keys; returns 0 when the prefix does not match.
inline int component_index(const std::string& key, const std::string& prefix) {
    if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return 0;
    int idx = 0;
    for (std::size_t k = prefix.size(); k < key.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(key[k]))) return 0;
        idx = idx * 10 + (key[k] - '0');
        if (idx > 64) return 0;
    }
    return idx;
}

} // namespace fileformat

struct ManifoldFile {
    Manifold manifold;
    bool graph_form = false;
    bool rigid = false;
    std::optional<int> trunc_header;
};

/// Reads a .crm manifold description. Q-form files give the d components of
/// Q(z, chi, tau) directly; imw-form files give Im w = phi(z, zbar, Re w)
/// complexified as phi(z, chi, s). A trunc header marks the input as known
/// only up to that total degree; s-dependent graphs require one (the
/// `default_trunc` argument supplies the command-line fallback).
inline ManifoldFile read_manifold(std::istream& in, int default_trunc = 16) {
    auto rows = fileformat::read_assignments(in);
    std::optional<int> n, d, trunc;
    std::string label;
    std::map<int, fileformat::Assignment> qrows, grows;
    for (const auto& a : rows) {
        if (a.key == "n") n = fileformat::parse_int(a, 1, 16);
        else if (a.key == "d") d = fileformat::parse_int(a, 1, 16);
        else if (a.key == "trunc") trunc = fileformat::parse_int(a, 1, 64);
        else if (a.key == "label") label = a.value;
        else if (int j = fileformat::component_index(a.key, "Q"); j > 0) {
            if (!qrows.emplace(j, a).second) throw parse_error("duplicate " + a.key, a.line, 1);
        } else if (int g = fileformat::component_index(a.key, "imw"); g > 0) {
            if (!grows.emplace(g, a).second) throw parse_error("duplicate " + a.key, a.line, 1);
        } else {
            throw parse_error("unknown key '" + a.key + "'", a.line, 1);
        }
    }
    if (!n || !d) throw parse_error("file must set n and d", rows.empty() ? 1 : rows.back().line, 1);
    if (!qrows.empty() && !grows.empty())
        throw parse_error("file mixes Q and imw components", grows.begin()->second.line, 1);
    bool graph = qrows.empty();
    auto& body = graph ? grows : qrows;
    if (static_cast<int>(body.size()) != *d)
        throw parse_error("expected exactly d = " + std::to_string(*d) + " components",
                          rows.empty() ? 1 : rows.back().line, 1);
    for (int j = 1; j <= *d; ++j)
        if (!body.count(j))
            throw parse_error("missing component " + std::to_string(j), rows.back().line, 1);

    ManifoldFile out;
    out.graph_form = graph;
    out.trunc_header = trunc;
    if (!graph) {
        VarsPtr V = manifold_vars(*n, *d);
        std::vector<Series> Q;
        for (int j = 1; j <= *d; ++j) {
            const auto& a = body.at(j);
            Series s = parse_expression(a.value, V, a.line, a.value_col);
            if (trunc) s = s.truncated_to(*trunc);
            Q.push_back(std::move(s));
        }
        out.rigid = false;
        out.manifold = make_manifold(*n, *d, std::move(Q), label);
        return out;
    }
    VarsPtr gv = graph_vars(*n, *d, true);
    std::vector<Series> phi;
    bool uses_s = false;
    for (int j = 1; j <= *d; ++j) {
        const auto& a = body.at(j);
        Series s = parse_expression(a.value, gv, a.line, a.value_col);
        for (const auto& [mono, c] : s.terms())
            for (int k = 0; k < *d; ++k)
                if (mono.exp[static_cast<std::size_t>(2 * *n + k)] > 0) uses_s = true;
        phi.push_back(std::move(s));
    }
    if (!uses_s && !trunc) {
        VarsPtr rigid_vars = graph_vars(*n, *d, false);
        std::vector<Series> rphi;
        for (const auto& p : phi) rphi.push_back(p.projected(rigid_vars));
        out.rigid = true;
        out.manifold = from_rigid_graph(*n, *d, rphi, label);
        return out;
    }
    out.rigid = false;
    out.manifold = from_graph(*n, *d, phi, trunc ? *trunc : default_trunc, label);
    return out;
}

inline ManifoldFile read_manifold_file(const std::string& path, int default_trunc = 16) {
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path + "'");
    try {
        return read_manifold(in, default_trunc);
    } catch (parse_error& e) {
        throw parse_error(path + ": " + e.what(), e.line, e.col);
    }
}

struct MapFile {
    FormalMap map;
    std::optional<int> trunc_header;
};

/// Reads a .crmap file: components F1..Fn and G1..Gd over (z, w).
inline MapFile read_map(std::istream& in) {
    auto rows = fileformat::read_assignments(in);
    std::optional<int> n, d, trunc;
    std::string label;
    std::map<int, fileformat::Assignment> frows, grows;
    for (const auto& a : rows) {
        if (a.key == "n") n = fileformat::parse_int(a, 1, 16);
        else if (a.key == "d") d = fileformat::parse_int(a, 1, 16);
        else if (a.key == "trunc") trunc = fileformat::parse_int(a, 1, 64);
        else if (a.key == "label") label = a.value;
        else if (int j = fileformat::component_index(a.key, "F"); j > 0) {
            if (!frows.emplace(j, a).second) throw parse_error("duplicate " + a.key, a.line, 1);
        } else if (int g = fileformat::component_index(a.key, "G"); g > 0) {
            if (!grows.emplace(g, a).second) throw parse_error("duplicate " + a.key, a.line, 1);
        } else {
            throw parse_error("unknown key '" + a.key + "'", a.line, 1);
        }
    }
    if (!n || !d) throw parse_error("file must set n and d", rows.empty() ? 1 : rows.back().line, 1);
    if (static_cast<int>(frows.size()) != *n || static_cast<int>(grows.size()) != *d)
        throw parse_error("expected n components F and d components G",
                          rows.empty() ? 1 : rows.back().line, 1);
    VarsPtr V = map_vars(*n, *d);
    std::vector<Series> F, G;
    for (int k = 1; k <= *n; ++k) {
        auto it = frows.find(k);
        if (it == frows.end()) throw parse_error("missing F" + std::to_string(k), rows.back().line, 1);
        Series s = parse_expression(it->second.value, V, it->second.line, it->second.value_col);
        if (trunc) s = s.truncated_to(*trunc);
        F.push_back(std::move(s));
    }
    for (int j = 1; j <= *d; ++j) {
        auto it = grows.find(j);
        if (it == grows.end()) throw parse_error("missing G" + std::to_string(j), rows.back().line, 1);
        Series s = parse_expression(it->second.value, V, it->second.line, it->second.value_col);
        if (trunc) s = s.truncated_to(*trunc);
        G.push_back(std::move(s));
    }
    MapFile out{make_map(*n, *d, std::move(F), std::move(G), label), trunc};
    return out;
}

inline MapFile read_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path + "'");
    try {
        return read_map(in);
    } catch (parse_error& e) {
        throw parse_error(path + ": " + e.what(), e.line, e.col);
    }
}

} // namespace crjet
