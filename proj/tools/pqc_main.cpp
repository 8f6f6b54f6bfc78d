#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pqc/report.hpp"
#include "pqc/runner.hpp"
#include "pqc/verifyspec.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pqc: numerical verification of paraquaternionic contact structure identities"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string format = "text";
    std::string out_path;
    std::int64_t seed_override = -1;
    int points_override = -1;

    CLI::App* verify = app.add_subcommand("verify", "run a verification spec and emit a report");
    verify->add_option("spec", spec_path, "path to the verification spec (key/value or json)")
        ->required();
    verify->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", out_path, "write the report to this path instead of stdout");
    verify->add_option("--seed", seed_override, "override the spec seed");
    verify->add_option("--points", points_override, "override the spec sample count");

    CLI11_PARSE(app, argc, argv);

    try {
        pqc::VerificationSpec spec = pqc::load_spec(spec_path);
        if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);
        if (points_override >= 1) spec.sample_count = points_override;
        const pqc::Report report = pqc::run_suite(spec);
        if (!out_path.empty()) {
            pqc::write_report(report, out_path, format);
        } else {
            const std::string body = (format == "json") ? pqc::report_to_json_string(report)
                                                        : pqc::report_to_text(report);
            std::fputs(body.c_str(), stdout);
        }
        return report.overall_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pqc: %s\n", e.what());
        return 2;
    }
}
