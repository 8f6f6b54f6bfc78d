#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "pqc/report.hpp"
#include "pqc/runner.hpp"
#include "pqc/verifyspec.hpp"

using namespace pqc;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = std::string("cli_test_") + name;
    std::ofstream os(path, std::ios::binary);
    os << body;
    return path;
}

} // namespace

TEST_CASE("minimal text spec gets defaults") {
    const auto path = write_temp("minimal.cfg", "n = 1\nsuites = heisenberg\n");
    const VerificationSpec spec = load_spec(path);
    CHECK(spec.n == 1);
    CHECK(spec.suites == std::vector<std::string>{"heisenberg"});
    CHECK(spec.sample_count == 5);
    CHECK(spec.seed == 42);
    CHECK(spec.point_box == 1.0);
    CHECK(spec.tolerances.at("ricci") == 1e-7);
    std::remove(path.c_str());
}

TEST_CASE("json spec parses with the same schema") {
    const auto path = write_temp(
        "spec.json",
        R"({"n":2,"suites":["conformal"],"seed":7,"sample_count":3,
            "h":[[2.0,{}],[1.0,{"t1":1,"x2":1}]],
            "tolerances":{"zamiana":1e-5}})");
    const VerificationSpec spec = load_spec(path);
    CHECK(spec.n == 2);
    CHECK(spec.seed == 7);
    CHECK(spec.sample_count == 3);
    CHECK(spec.h_terms.size() == 2);
    CHECK(spec.tolerances.at("zamiana") == 1e-5);
    CHECK(spec.tolerances.at("ricci") == 1e-7); // default survives
    std::remove(path.c_str());
}

TEST_CASE("unknown coordinate in h is a validation error") {
    const auto path = write_temp("bad.cfg",
                                 "n = 1\nsuites = conformal\nhterm = 1.0\nhterm = 0.5 t3\n");
    CHECK_THROWS_AS(load_spec(path), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("conformal suite without h is rejected") {
    const auto path = write_temp("noh.cfg", "n = 1\nsuites = conformal\n");
    CHECK_THROWS_AS(load_spec(path), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("duplicate tolerance keys: last one wins with a warning") {
    const auto path = write_temp("dup.cfg",
                                 "n = 1\nsuites = heisenberg\ntol ricci = 1e-3\ntol ricci = 1e-4\n");
    const VerificationSpec spec = load_spec(path);
    CHECK(spec.tolerances.at("ricci") == 1e-4);
    REQUIRE(spec.warnings.size() == 1);
    CHECK(spec.warnings[0].find("duplicate tolerance") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("parse errors carry line diagnostics") {
    const auto path = write_temp("syntax.cfg", "n = 1\nnot a key value line\n");
    try {
        load_spec(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("report with no entries still carries the environment echo") {
    Report r;
    r.n = 3;
    r.seed = 99;
    const std::string body = report_to_json_string(r);
    const auto j = nlohmann::json::parse(body);
    CHECK(j["environment"]["n"] == 3);
    CHECK(j["environment"]["seed"] == 99);
    CHECK(j["entries"].empty());
    CHECK(j["overall_pass"] == true);
}

TEST_CASE("json report round-trips and failures sort first in text") {
    Report r;
    ReportEntry ok;
    ok.suite = "algebra";
    ok.identity = "pq_assoc";
    ok.equation = equation_tag("pq_assoc");
    ok.points = 10;
    ok.max_residual = 1.25e-15;
    ok.scale = 1.0;
    ok.tolerance = 1e-12;
    ok.pass = true;
    ReportEntry bad = ok;
    bad.suite = "zeta"; // sorts after "algebra" by suite
    bad.identity = "made_up";
    bad.pass = false;
    r.entries = {ok, bad};
    r.overall_pass = false;

    const std::string body = report_to_json_string(r);
    const auto j = nlohmann::json::parse(body);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0]["identity"] == "pq_assoc");
    // residual strings carry 17 significant digits and round-trip exactly
    const std::string res_str = j["entries"][0]["max_residual"].get<std::string>();
    CHECK(std::stod(res_str) == 1.25e-15);
    CHECK(res_str.find('e') != std::string::npos);
    CHECK(j["overall_pass"] == false);

    const std::string text = report_to_text(r);
    const size_t fail_pos = text.find("FAIL");
    const size_t pass_pos = text.find("pass   algebra");
    REQUIRE(fail_pos != std::string::npos);
    REQUIRE(pass_pos != std::string::npos);
    CHECK(fail_pos < pass_pos);
}

TEST_CASE("runner: heisenberg suite passes and reports are deterministic") {
    VerificationSpec spec;
    spec.n = 1;
    spec.suites = {"algebra", "heisenberg"};
    spec.tolerances = default_tolerances();
    const Report a = run_suite(spec);
    const Report b = run_suite(spec);
    CHECK(a.overall_pass);
    CHECK(report_to_json_string(a) == report_to_json_string(b));
}

TEST_CASE("runner: conformal suite end to end on a small sample") {
    VerificationSpec spec;
    spec.n = 1;
    spec.suites = {"conformal"};
    spec.sample_count = 2;
    spec.tolerances = default_tolerances();
    HTerm c0;
    c0.coeff = 1.0;
    HTerm c2;
    c2.coeff = 1.0;
    c2.exps["t1"] = 2;
    spec.h_terms = {c0, c2};
    const Report r = run_suite(spec);
    CHECK(r.overall_pass);
    bool saw_qcw4 = false;
    for (const auto& e : r.entries)
        if (e.identity == "qcw4_cross") {
            saw_qcw4 = true;
            CHECK(e.points == 2);
        }
    CHECK(saw_qcw4);
    REQUIRE_FALSE(r.notes.empty());
    CHECK(r.notes[0].find("(2h)^1") != std::string::npos);
}

TEST_CASE("explicitly empty suite list runs nothing but echoes the environment") {
    const auto path = write_temp("empty.cfg", "n = 1\nsuites =\n");
    const VerificationSpec spec = load_spec(path);
    CHECK(spec.suites.empty());
    const Report r = run_suite(spec);
    CHECK(r.entries.empty());
    CHECK(r.overall_pass);
    const auto j = nlohmann::json::parse(report_to_json_string(r));
    CHECK(j["environment"]["n"] == 1);
    std::remove(path.c_str());
}

TEST_CASE("runner: domain exhaustion on a negative factor") {
    VerificationSpec spec;
    spec.n = 1;
    spec.suites = {"conformal"};
    spec.sample_count = 1;
    spec.tolerances = default_tolerances();
    HTerm c0;
    c0.coeff = -1.0; // h < 0 everywhere
    spec.h_terms = {c0};
    CHECK_THROWS_AS(run_suite(spec), DomainExhausted);
}
