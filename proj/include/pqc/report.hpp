#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pqc/errors.hpp"

namespace pqc {

struct ReportEntry {
    std::string suite;
    std::string identity;
    std::string equation; // identity tag, stable across runs
    int points = 0;
    double max_residual = 0.0;
    double scale = 1.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct Report {
    int n = 1;
    std::uint64_t seed = 42;
    int sample_count = 5;
    double point_box = 1.0;
    std::vector<std::string> suites;
    std::map<std::string, double> tolerances;
    std::vector<std::string> warnings;
    std::vector<std::string> notes; // e.g. curvature normalization calibration
    std::vector<ReportEntry> entries;
    bool overall_pass = true;
};

// Equation tag for an identity id; identities keep their tag across suites.
inline std::string equation_tag(const std::string& identity) {
    static const std::map<std::string, std::string> tags = {
        {"pq_unit_products", "paraq"},
        {"pq_norm_mult", "norm-mult"},
        {"pq_assoc", "assoc"},
        {"pq_conj_antihom", "conj"},
        {"pq_inverse", "inv"},
        {"commutator_vertical", "3.1-comm"},
        {"commutator_cyclic", "3.1-comm"},
        {"commutator_mixed", "3.1-comm"},
        {"horizontality", "pqh"},
        {"reeb_pairing", "xi"},
        {"reeb_contraction", "xi"},
        {"structure_equations", "3.1-struct"},
        {"compatibility", "ccon"},
        {"horizontal_torsion", "torha"},
        {"frame_relations", "paraq"},
        {"flat_torsion", "torha"},
        {"flat_curvature", "flat"},
        {"flat_wpqc", "qccm"},
        {"identity_deformation", "qcw4"},
        {"qcw4_cross", "qcw4"},
        {"qcw4_last_pair_antisym", "qcw4"},
        {"tau_symmetry", "tau-trfree"},
        {"tau_tracefree", "tau-trfree"},
        {"tau_eigenspace", "tau-sym"},
        {"mu_symmetry", "propmu"},
        {"mu_tracefree", "propmu"},
        {"mu_eigenspace", "propmu"},
        {"mu_propmu", "propmu"},
        {"mu_vanishes_n1", "propmu"},
        {"torsion_roundtrip", "defor"},
        {"torsion_mu_spread", "mus"},
        {"mm1", "mm1"},
        {"qcw6_trace", "qcw6"},
        {"qcw6_pair_traces", "qcw6"},
        {"qcwric_ric", "qcwric"},
        {"qcwric_scal", "qcwric"},
        {"pyam", "pyam"},
        {"lll_routes", "lll"},
        {"l0_tracefree", "l0"},
        {"mm_msym_lbar", "mm"},
        {"ricci", "ricci"},
        {"ricciformf", "ricciformf"},
        {"riccitau", "riccitau"},
        {"riccizeta", "riccizeta"},
        {"zamiana", "zamiana"},
        {"rjr", "rjr"},
        {"comp1", "comp1"},
        {"ricis_ric", "ricis"},
        {"ricis_rho", "ricis"},
        {"ricis_varrho", "ricis"},
        {"ricis_zeta", "ricis"},
        {"div", "div"},
        {"trfree_ric", "trfree"},
        {"trfree_rho", "trfree"},
        {"trfree_varrho", "trfree"},
        {"trfree_zeta", "trfree"},
        {"main0_pwr_minus1", "main0"},
        {"wpqc_projector", "qccm"},
        {"wpqc_explicit", "qccm"},
        {"wpqc_routes", "qccm"},
        {"pwr_completeness", "New21"},
        {"flatness_verdict", "main2"},
        {"cayley_identity", "cal"},
        {"cayley_base_point", "cal"},
        {"cayley_roundtrip", "cayley"},
        {"cayley_embedding", "sigma"},
        {"cayley_eta_imaginary", "p3sas1"},
        {"cayley_sphere_constraint", "p3sas1"},
    };
    auto it = tags.find(identity);
    if (it != tags.end()) return it->second;
    if (identity.rfind("pack_", 0) == 0) return "ric-sym";
    return identity;
}

// 17 significant digits, enough to round-trip any double exactly.
inline std::string decimal17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return std::string(buf);
}

inline nlohmann::ordered_json report_to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["environment"] = {
        {"n", r.n},
        {"seed", r.seed},
        {"sample_count", r.sample_count},
        {"point_box", decimal17(r.point_box)},
        {"suites", r.suites},
    };
    nlohmann::ordered_json tols = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.tolerances) tols[k] = decimal17(v);
    j["environment"]["tolerances"] = tols;
    j["environment"]["warnings"] = r.warnings;
    j["environment"]["notes"] = r.notes;

    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    std::vector<ReportEntry> sorted = r.entries;
    std::sort(sorted.begin(), sorted.end(), [](const ReportEntry& a, const ReportEntry& b) {
        if (a.suite != b.suite) return a.suite < b.suite;
        return a.identity < b.identity;
    });
    for (const auto& e : sorted) {
        entries.push_back({
            {"suite", e.suite},
            {"identity", e.identity},
            {"equation", e.equation},
            {"points", e.points},
            {"max_residual", decimal17(e.max_residual)},
            {"scale", decimal17(e.scale)},
            {"tolerance", decimal17(e.tolerance)},
            {"pass", e.pass},
        });
    }
    j["entries"] = entries;
    j["overall_pass"] = r.overall_pass;
    return j;
}

inline std::string report_to_json_string(const Report& r) {
    return report_to_json(r).dump(2) + "\n";
}

// Human summary; failing entries sorted first.
inline std::string report_to_text(const Report& r) {
    std::vector<ReportEntry> sorted = r.entries;
    std::sort(sorted.begin(), sorted.end(), [](const ReportEntry& a, const ReportEntry& b) {
        if (a.pass != b.pass) return !a.pass;
        if (a.suite != b.suite) return a.suite < b.suite;
        return a.identity < b.identity;
    });
    std::string out;
    out += "pqc verification report\n";
    out += "n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) +
           " samples=" + std::to_string(r.sample_count) + "\n";
    for (const auto& w : r.warnings) out += "warning: " + w + "\n";
    for (const auto& nte : r.notes) out += "note: " + nte + "\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-6s %-10s %-26s %-12s %6s %12s %12s %9s\n", "status",
                  "suite", "identity", "equation", "pts", "residual", "scale", "tol");
    out += line;
    for (const auto& e : sorted) {
        std::snprintf(line, sizeof(line), "%-6s %-10s %-26s %-12s %6d %12.3e %12.3e %9.1e\n",
                      e.pass ? "pass" : "FAIL", e.suite.c_str(), e.identity.c_str(),
                      e.equation.c_str(), e.points, e.max_residual, e.scale, e.tolerance);
        out += line;
    }
    out += std::string("overall: ") + (r.overall_pass ? "PASS" : "FAIL") + "\n";
    return out;
}

inline void write_report(const Report& r, const std::string& path, const std::string& format) {
    std::string body;
    if (format == "json") {
        body = report_to_json_string(r);
    } else if (format == "text") {
        body = report_to_text(r);
    } else {
        throw ValidationError("unknown report format '" + format + "'");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open report path '" + path + "'");
    os << body;
    if (!os) throw IoError("failed writing report to '" + path + "'");
}

} // namespace pqc
