#pragma once

/// @file config.hpp
/// Strict INI-style run configuration: sections [domain], [model],
/// [weights], [time], [output]; unknown sections or keys are parse errors,
/// out-of-range values are validation errors naming the field. Scalar
/// fields that support `auto` carry an explicit flag.

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arcs/errors.hpp"
#include "arcs/solver.hpp"

namespace arcs {

struct AutoOr {
    bool is_auto = true;
    double value = 0.0;
};

enum class GeneratorKind { constant, cosine_bump, gaussian_bump, file };

/// Named initial-data generator. cosine-bump is the compactly supported
/// C^1 bump A * prod_a cos^2(pi d_a / (2 width)) for |d_a| <= width;
/// gaussian-bump is A * exp(-sum d_a^2 / (2 width^2)); both centered at
/// `center`. file reads a field snapshot (see io.hpp).
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::constant;
    double amplitude = 1.0;
    std::array<double, 2> center{-1.0, -1.0}; ///< negative = domain center
    double width = -1.0;                      ///< negative = min(length)/8
    std::string path;                         ///< for kind == file
};

struct FamilyConfig {
    std::string family = "pow"; ///< "pow" or "const"
    double chat = 1.0;
    double k = 2.0;
};

struct RunConfig {
    // [domain]
    int dim = 2;
    std::array<double, 2> lengths{1.0, 1.0};
    std::array<int, 2> cells{64, 64};
    // [model]
    int theorem_n = 2;
    FamilyConfig chi, xi;
    AutoOr alpha, beta;
    bool has_c0_override = false;
    double c0_override = 0.0;
    GeneratorSpec u0, v0, w0;
    // [weights]
    AutoOr p, r, sigma;
    // [time]
    SchemeConfig scheme;
    double blowup_cap_rel = 1e6;
    // [output]
    std::string directory = "out";
    AutoOr interval; ///< auto = t_end / 50
    bool snapshots = false;
};

namespace detail {

struct IniEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<IniEntry> parse_ini_entries(const std::string& text) {
    std::vector<IniEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError("line " + std::to_string(line) + ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line) + ": expected key = value");
        IniEntry e;
        e.section = section;
        e.key = trim(s.substr(0, eq));
        e.value = trim(s.substr(eq + 1));
        e.line = line;
        if (e.key.empty())
            throw ParseError("line " + std::to_string(line) + ": empty key");
        if (e.section.empty())
            throw ParseError("line " + std::to_string(line) + ": key outside any section");
        entries.push_back(std::move(e));
    }
    return entries;
}

inline double to_double(const IniEntry& e) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(e.line) + ": value of `" + e.key +
                         "` is not a number: " + e.value);
    }
}

inline int to_int(const IniEntry& e) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(e.line) + ": value of `" + e.key +
                         "` is not an integer: " + e.value);
    }
}

inline bool to_bool(const IniEntry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ParseError("line " + std::to_string(e.line) + ": value of `" + e.key +
                     "` is not a boolean: " + e.value);
}

inline AutoOr to_auto_or(const IniEntry& e) {
    AutoOr a;
    if (e.value == "auto") return a;
    a.is_auto = false;
    a.value = to_double(e);
    return a;
}

/// Known keys per section; anything else is a ParseError naming the key.
inline const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"domain", {"dim", "length_x", "length_y", "cells_x", "cells_y"}},
        {"model",
         {"theorem_n", "chi_family", "chi_chat", "chi_k", "xi_family", "xi_chat",
          "xi_k", "alpha", "beta", "c0_override",
          "u0", "u0_amplitude", "u0_center_x", "u0_center_y", "u0_width", "u0_file",
          "v0", "v0_amplitude", "v0_center_x", "v0_center_y", "v0_width", "v0_file",
          "w0", "w0_amplitude", "w0_center_x", "w0_center_y", "w0_width", "w0_file"}},
        {"weights", {"p", "r", "sigma"}},
        {"time",
         {"dt", "dt_max", "cfl", "diffusion", "linear_tol", "t_end", "u_floor",
          "blowup_cap_rel"}},
        {"output", {"directory", "interval", "snapshots"}},
    };
    return keys;
}

/// Numeric scalar keys that a sweep may expand into Cartesian lists.
inline const std::set<std::string>& sweepable_keys() {
    static const std::set<std::string> keys = {
        "dim", "length_x", "length_y", "cells_x", "cells_y", "theorem_n",
        "chi_chat", "chi_k", "xi_chat", "xi_k", "alpha", "beta", "c0_override",
        "u0_amplitude", "u0_center_x", "u0_center_y", "u0_width",
        "v0_amplitude", "v0_center_x", "v0_center_y", "v0_width",
        "w0_amplitude", "w0_center_x", "w0_center_y", "w0_width",
        "p", "r", "sigma", "dt", "dt_max", "cfl", "linear_tol", "t_end",
        "u_floor", "blowup_cap_rel", "interval"};
    return keys;
}

inline GeneratorKind to_generator_kind(const IniEntry& e) {
    if (e.value == "constant") return GeneratorKind::constant;
    if (e.value == "cosine-bump") return GeneratorKind::cosine_bump;
    if (e.value == "gaussian-bump") return GeneratorKind::gaussian_bump;
    if (e.value == "file") return GeneratorKind::file;
    throw ParseError("line " + std::to_string(e.line) + ": unknown generator `" +
                     e.value + "` for " + e.key);
}

} // namespace detail

/// Parses configuration text. `source` names the origin for messages.
inline RunConfig parse_config_text(const std::string& text,
                                   const std::string& source = "config") {
    const auto entries = detail::parse_ini_entries(text);
    const auto& known = detail::known_keys();
    std::set<std::string> seen;
    RunConfig cfg;
    bool have_length_y = false, have_cells_y = false;
    bool have_chi_k = false, have_xi_k = false;

    for (const auto& e : entries) {
        const auto sec = known.find(e.section);
        if (sec == known.end())
            throw ParseError("line " + std::to_string(e.line) + ": unknown section [" +
                             e.section + "]");
        if (!sec->second.count(e.key))
            throw ParseError("line " + std::to_string(e.line) + ": unknown key `" +
                             e.key + "` in [" + e.section + "]");
        if (!seen.insert(e.section + "." + e.key).second)
            throw ParseError("line " + std::to_string(e.line) + ": duplicate key `" +
                             e.key + "`");

        if (e.section == "domain") {
            if (e.key == "dim") cfg.dim = detail::to_int(e);
            else if (e.key == "length_x") cfg.lengths[0] = detail::to_double(e);
            else if (e.key == "length_y") { cfg.lengths[1] = detail::to_double(e); have_length_y = true; }
            else if (e.key == "cells_x") cfg.cells[0] = detail::to_int(e);
            else if (e.key == "cells_y") { cfg.cells[1] = detail::to_int(e); have_cells_y = true; }
        } else if (e.section == "model") {
            if (e.key == "theorem_n") cfg.theorem_n = detail::to_int(e);
            else if (e.key == "chi_family") cfg.chi.family = e.value;
            else if (e.key == "chi_chat") cfg.chi.chat = detail::to_double(e);
            else if (e.key == "chi_k") { cfg.chi.k = detail::to_double(e); have_chi_k = true; }
            else if (e.key == "xi_family") cfg.xi.family = e.value;
            else if (e.key == "xi_chat") cfg.xi.chat = detail::to_double(e);
            else if (e.key == "xi_k") { cfg.xi.k = detail::to_double(e); have_xi_k = true; }
            else if (e.key == "alpha") cfg.alpha = detail::to_auto_or(e);
            else if (e.key == "beta") cfg.beta = detail::to_auto_or(e);
            else if (e.key == "c0_override") { cfg.c0_override = detail::to_double(e); cfg.has_c0_override = true; }
            else {
                GeneratorSpec* g = nullptr;
                std::string suffix;
                for (const char* prefix : {"u0", "v0", "w0"}) {
                    if (e.key.rfind(prefix, 0) == 0) {
                        g = prefix[0] == 'u' ? &cfg.u0 : prefix[0] == 'v' ? &cfg.v0 : &cfg.w0;
                        suffix = e.key.substr(2);
                        break;
                    }
                }
                if (suffix.empty()) g->kind = detail::to_generator_kind(e);
                else if (suffix == "_amplitude") g->amplitude = detail::to_double(e);
                else if (suffix == "_center_x") g->center[0] = detail::to_double(e);
                else if (suffix == "_center_y") g->center[1] = detail::to_double(e);
                else if (suffix == "_width") g->width = detail::to_double(e);
                else if (suffix == "_file") g->path = e.value;
            }
        } else if (e.section == "weights") {
            if (e.key == "p") cfg.p = detail::to_auto_or(e);
            else if (e.key == "r") cfg.r = detail::to_auto_or(e);
            else if (e.key == "sigma") cfg.sigma = detail::to_auto_or(e);
        } else if (e.section == "time") {
            if (e.key == "dt") {
                const AutoOr a = detail::to_auto_or(e);
                cfg.scheme.dt = a.is_auto ? -1.0 : a.value;
                if (!a.is_auto && !(a.value > 0.0))
                    throw ValidationError("dt must be `auto` or > 0");
            } else if (e.key == "dt_max") cfg.scheme.dt_max = detail::to_double(e);
            else if (e.key == "cfl") cfg.scheme.cfl = detail::to_double(e);
            else if (e.key == "diffusion") {
                if (e.value == "implicit") cfg.scheme.implicit_diffusion = true;
                else if (e.value == "explicit") cfg.scheme.implicit_diffusion = false;
                else throw ParseError("line " + std::to_string(e.line) +
                                      ": diffusion must be implicit or explicit");
            } else if (e.key == "linear_tol") cfg.scheme.linear_tol = detail::to_double(e);
            else if (e.key == "t_end") cfg.scheme.t_end = detail::to_double(e);
            else if (e.key == "u_floor") cfg.scheme.u_floor = detail::to_double(e);
            else if (e.key == "blowup_cap_rel") cfg.blowup_cap_rel = detail::to_double(e);
        } else if (e.section == "output") {
            if (e.key == "directory") cfg.directory = e.value;
            else if (e.key == "interval") cfg.interval = detail::to_auto_or(e);
            else if (e.key == "snapshots") cfg.snapshots = detail::to_bool(e);
        }
    }

    // Cross-field validation; messages name the offending field.
    if (cfg.dim != 1 && cfg.dim != 2) throw ValidationError("dim must be 1 or 2");
    if (cfg.dim == 1 && (have_length_y || have_cells_y))
        throw ValidationError("length_y/cells_y are invalid for dim = 1");
    for (int a = 0; a < cfg.dim; ++a) {
        if (!(cfg.lengths[a] > 0.0)) throw ValidationError("length must be > 0");
        if (cfg.cells[a] < 4) throw ValidationError("cells must be >= 4 per axis");
    }
    if (cfg.theorem_n < 2) throw ValidationError("theorem_n must be >= 2");
    for (const auto* fam : {&cfg.chi, &cfg.xi}) {
        const bool is_chi = fam == &cfg.chi;
        const std::string name = is_chi ? "chi" : "xi";
        if (fam->family != "pow" && fam->family != "const")
            throw ValidationError(name + "_family must be pow or const");
        if (!(fam->chat > 0.0)) throw ValidationError(name + "_chat must be > 0");
        if (fam->family == "pow" && !(fam->k > 1.0))
            throw ValidationError(name + "_k must be > 1 (tail diverges otherwise)");
        if (fam->family == "const" && (is_chi ? have_chi_k : have_xi_k))
            throw ValidationError(name + "_k is invalid for the const family");
    }
    for (const auto* a : {&cfg.alpha, &cfg.beta})
        if (!a->is_auto && !(a->value > 0.0))
            throw ValidationError("alpha/beta must be `auto` or > 0");
    if (cfg.has_c0_override && !(cfg.c0_override > 0.0))
        throw ValidationError("c0_override must be > 0");
    const bool any_auto = cfg.p.is_auto || cfg.r.is_auto || cfg.sigma.is_auto;
    const bool all_auto = cfg.p.is_auto && cfg.r.is_auto && cfg.sigma.is_auto;
    if (any_auto && !all_auto)
        throw ValidationError("weights p, r, sigma must be all auto or all explicit");
    if (!cfg.p.is_auto && !(cfg.p.value > 1.0))
        throw ValidationError("p must be > 1");
    if (!cfg.r.is_auto && cfg.r.value < 0.0) throw ValidationError("r must be >= 0");
    if (!cfg.sigma.is_auto && cfg.sigma.value < 0.0)
        throw ValidationError("sigma must be >= 0");
    if (!(cfg.scheme.dt_max > 0.0)) throw ValidationError("dt_max must be > 0");
    if (!(cfg.scheme.cfl > 0.0 && cfg.scheme.cfl <= 1.0))
        throw ValidationError("cfl must be in (0, 1]");
    if (!(cfg.scheme.linear_tol > 0.0))
        throw ValidationError("linear_tol must be > 0");
    if (cfg.scheme.t_end < 0.0) throw ValidationError("t_end must be >= 0");
    if (cfg.scheme.u_floor < 0.0) throw ValidationError("u_floor must be >= 0");
    if (!(cfg.blowup_cap_rel > 0.0))
        throw ValidationError("blowup_cap_rel must be > 0");
    if (!cfg.interval.is_auto && !(cfg.interval.value > 0.0))
        throw ValidationError("interval must be `auto` or > 0");
    for (const auto* g : {&cfg.u0, &cfg.v0, &cfg.w0}) {
        if (g->amplitude < 0.0) throw ValidationError("generator amplitude must be >= 0");
        if (g->kind == GeneratorKind::file && g->path.empty())
            throw ValidationError("file generator requires the *_file key");
    }
    if (cfg.directory.empty()) throw ValidationError("output directory must be set");
    (void)source;
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace arcs
