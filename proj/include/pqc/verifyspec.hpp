#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pqc/errors.hpp"
#include "pqc/jets.hpp"

namespace pqc {

// One monomial of the conformal factor: coefficient and exponents by
// coordinate name ("t1", "x2", ..., "x", "y", "z").
struct HTerm {
    double coeff = 0.0;
    std::map<std::string, int> exps;
};

struct VerificationSpec {
    int n = 1;
    std::vector<std::string> suites;
    bool suites_specified = false;
    std::vector<HTerm> h_terms;
    int sample_count = 5;
    std::uint64_t seed = 42;
    double point_box = 1.0;
    std::map<std::string, double> tolerances; // identity id -> tolerance
    std::vector<std::string> warnings;
};

inline const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> v = {"algebra", "heisenberg", "conformal", "cayley"};
    return v;
}

// Per-identity default tolerances, matched to the arithmetic pipeline of
// each identity class: exact-jet 1e-10, cancellation-heavy 1e-7 (or the
// looser documented values), finite-difference cross-checks 1e-6.
inline std::map<std::string, double> default_tolerances() {
    std::map<std::string, double> t;
    const double exact = 1e-12;
    for (const char* k : {"pq_unit_products", "pq_norm_mult", "pq_assoc", "pq_conj_antihom",
                          "pq_inverse", "commutator_vertical", "commutator_cyclic",
                          "commutator_mixed", "horizontality", "reeb_pairing", "reeb_contraction",
                          "structure_equations", "compatibility", "horizontal_torsion",
                          "frame_relations", "flat_torsion", "flat_curvature", "flat_wpqc"})
        t[k] = exact;
    t["identity_deformation"] = 1e-12;

    const double jets = 1e-10;
    for (const char* k :
         {"tau_symmetry", "tau_tracefree", "tau_eigenspace", "mu_symmetry", "mu_tracefree",
          "mu_eigenspace", "mu_propmu", "mu_vanishes_n1", "torsion_roundtrip", "torsion_mu_spread",
          "mm1", "qcw6_trace", "qcw6_pair_traces", "qcwric_ric", "qcwric_scal", "mm_msym_lbar",
          "qcw4_last_pair_antisym", "l0_tracefree", "pwr_completeness"})
        t[k] = jets;

    t["qcw4_cross"] = 1e-6;
    t["pyam"] = 1e-8;
    t["lll_routes"] = 1e-8;
    for (const char* k : {"ricci", "ricciformf", "riccitau", "riccizeta", "ricis_ric", "ricis_rho",
                          "ricis_varrho", "ricis_zeta"})
        t[k] = 1e-7;
    for (const char* k : {"zamiana", "rjr", "comp1", "div"}) t[k] = 1e-6;
    for (const char* k : {"trfree_ric", "trfree_rho", "trfree_varrho", "trfree_zeta",
                          "main0_pwr_minus1", "wpqc_projector", "wpqc_explicit", "wpqc_routes"})
        t[k] = 1e-7;
    t["flatness_verdict"] = 0.5; // boolean encoded as 0/1 residual
    for (const char* k : {"pack_last_pair_antisymmetry", "pack_ric_symmetry",
                          "pack_zeta_pair_symmetry", "pack_rho_pair_symmetry",
                          "pack_varrho_pair_symmetry", "pack_rho_11_property",
                          "pack_varrho_11_property"})
        t[k] = 1e-9;

    t["cayley_identity"] = 1e-8;
    t["cayley_base_point"] = 1e-10;
    t["cayley_roundtrip"] = 1e-10;
    t["cayley_embedding"] = 1e-10;
    t["cayley_eta_imaginary"] = 1e-12;
    t["cayley_sphere_constraint"] = 1e-10;
    return t;
}

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        // allow comma separation too
        std::string cur;
        for (char c : tok) {
            if (c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

inline double parse_double(const std::string& s, int lineno) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": cannot parse number '" + s + "'");
    }
}

// "t1^2" or "x" (exponent 1)
inline std::pair<std::string, int> parse_monomial(const std::string& tok, int lineno) {
    const size_t caret = tok.find('^');
    if (caret == std::string::npos) return {tok, 1};
    const std::string name = tok.substr(0, caret);
    const std::string expo = tok.substr(caret + 1);
    try {
        const int e = std::stoi(expo);
        if (e < 0) throw std::invalid_argument("negative");
        return {name, e};
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad exponent in '" + tok + "'");
    }
}

} // namespace detail

// Key/value text document:
//   n = 2
//   suites = conformal cayley
//   sample_count = 5
//   seed = 42
//   point_box = 1.0
//   tol ricci = 1e-7
//   hterm = 1.0
//   hterm = 0.25 t1^2 x
// '#' starts a comment.  Duplicate scalar keys: last one wins with a warning;
// hterm lines accumulate.
inline VerificationSpec parse_spec_text(const std::string& text) {
    VerificationSpec spec;
    spec.suites.clear();
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool any = false;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        any = true;

        if (key.rfind("tol ", 0) == 0) {
            const std::string id = detail::trim(key.substr(4));
            if (spec.tolerances.count(id))
                spec.warnings.push_back("duplicate tolerance key '" + id + "', last one wins");
            spec.tolerances[id] = detail::parse_double(value, lineno);
            continue;
        }
        if (key == "hterm") {
            auto toks = detail::split_ws(value);
            if (toks.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty hterm");
            HTerm term;
            term.coeff = detail::parse_double(toks[0], lineno);
            for (size_t i = 1; i < toks.size(); ++i) {
                auto [name, e] = detail::parse_monomial(toks[i], lineno);
                term.exps[name] += e;
            }
            spec.h_terms.push_back(term);
            continue;
        }
        if (seen.count(key))
            spec.warnings.push_back("duplicate key '" + key + "', last one wins");
        seen.insert(key);
        if (key == "n") {
            spec.n = static_cast<int>(detail::parse_double(value, lineno));
        } else if (key == "suites") {
            spec.suites = detail::split_ws(value);
            spec.suites_specified = true;
        } else if (key == "sample_count") {
            spec.sample_count = static_cast<int>(detail::parse_double(value, lineno));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(detail::parse_double(value, lineno));
        } else if (key == "point_box") {
            spec.point_box = detail::parse_double(value, lineno);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!any) throw ParseError("empty verification spec");
    return spec;
}

inline VerificationSpec parse_spec_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
    VerificationSpec spec;
    try {
        if (j.contains("n")) spec.n = j["n"].get<int>();
        if (j.contains("suites")) {
            spec.suites = j["suites"].get<std::vector<std::string>>();
            spec.suites_specified = true;
        }
        if (j.contains("sample_count")) spec.sample_count = j["sample_count"].get<int>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("point_box")) spec.point_box = j["point_box"].get<double>();
        if (j.contains("tolerances"))
            for (auto& [k, v] : j["tolerances"].items()) spec.tolerances[k] = v.get<double>();
        if (j.contains("h")) {
            for (const auto& item : j["h"]) {
                HTerm t;
                t.coeff = item.at(0).get<double>();
                for (auto& [k, v] : item.at(1).items()) t.exps[k] = v.get<int>();
                spec.h_terms.push_back(t);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json schema: ") + e.what());
    }
    return spec;
}

inline void validate_spec(const VerificationSpec& spec) {
    std::vector<std::string> errs;
    if (spec.n < 1) errs.push_back("n must be >= 1");
    if (spec.sample_count < 1) errs.push_back("sample_count must be >= 1");
    if (spec.point_box <= 0.0) errs.push_back("point_box must be positive");
    for (const auto& s : spec.suites) {
        if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
            errs.push_back("unknown suite '" + s + "'");
    }
    const bool conformal =
        std::find(spec.suites.begin(), spec.suites.end(), "conformal") != spec.suites.end();
    if (conformal && spec.h_terms.empty())
        errs.push_back("conformal suite requires a nonempty h polynomial");
    if (spec.n >= 1) {
        for (const auto& t : spec.h_terms)
            for (const auto& [name, e] : t.exps) {
                try {
                    (void)coord_index(spec.n, name);
                } catch (const ValidationError&) {
                    errs.push_back("h references unknown coordinate '" + name + "' for n=" +
                                   std::to_string(spec.n));
                }
                if (e < 0) errs.push_back("negative exponent on '" + name + "'");
            }
    }
    if (!errs.empty()) {
        std::string msg = "invalid verification spec:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ValidationError(msg);
    }
}

// Loads text or json (auto-detected on the first non-space byte), fills
// defaults, validates every invariant.
inline VerificationSpec load_spec(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open spec file '" + path + "'");
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    VerificationSpec spec = (first != std::string::npos && text[first] == '{')
                                ? parse_spec_json(text)
                                : parse_spec_text(text);
    if (!spec.suites_specified && spec.suites.empty()) spec.suites = known_suites();
    auto defaults = default_tolerances();
    for (const auto& [k, v] : spec.tolerances) defaults[k] = v;
    spec.tolerances = defaults;
    validate_spec(spec);
    return spec;
}

inline Poly h_poly_from_terms(int n, const std::vector<HTerm>& terms) {
    const int nv = num_coords(n);
    Poly p(nv);
    for (const auto& t : terms) {
        Poly::Exps e(static_cast<size_t>(nv), 0);
        for (const auto& [name, k] : t.exps) e[static_cast<size_t>(coord_index(n, name))] += k;
        p.add_term(e, t.coeff);
    }
    return p;
}

} // namespace pqc
