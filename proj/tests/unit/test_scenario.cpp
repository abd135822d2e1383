#include "doctest.h"
#include "dhilb/polynomial.hpp"
#include "dhilb/scenario.hpp"

using namespace dhilb;

namespace {

RunOutcome run(const std::string& yaml, const RunOptions& options = {}) { return run_scenario(yaml, "s.yaml", options); }

std::string message(const RunOutcome& r) { return r.report["error"]["message"].get<std::string>(); }

}  // namespace

TEST_CASE("polynomial grammar") {
    CHECK(parse_polynomial("x0*x1 - x2^2", 3).to_string() == parse_polynomial("-x2^2+x1*x0", 3).to_string());
    CHECK(parse_polynomial("1/2*x0^2 + (x0 - x1)*x1", 2) == parse_polynomial("x0*x1 + 1/2*x0^2 - x1^2", 2));
    CHECK(parse_polynomial("(x0+x1)^2", 2) == parse_polynomial("x0^2 + 2*x0*x1 + x1^2", 2));
    CHECK(parse_polynomial("x0 - x0", 1).is_zero());
    CHECK_THROWS(parse_polynomial("x3", 3));
    CHECK_THROWS(parse_polynomial("x0 +", 2));
    CHECK_THROWS(parse_polynomial("y0", 2));
}

TEST_CASE("scenario errors carry file, line and column") {
    const RunOutcome unknown = run("task: truncate\nambient: {n: 2}\nwindow: {p: 1, q: 3}\nbogus: 1\n");
    CHECK(unknown.exit_code == 1);
    CHECK(message(unknown).find("s.yaml:4:1: unknown key 'bogus'") == 0);

    const RunOutcome inhom = run("task: tangent\nambient: {n: 2}\nZ: [\"x1\", \"x0^2 + x1\"]\nwindow: {p: 1, q: 3}\n");
    CHECK(inhom.exit_code == 1);
    CHECK(message(inhom).find("s.yaml:3:") == 0);
    CHECK(message(inhom).find("x0^2 + x1") != std::string::npos);

    const RunOutcome yaml = run("task: [unclosed\n");
    CHECK(yaml.exit_code == 1);
    CHECK(message(yaml).find("s.yaml:") == 0);

    CHECK(run("ambient: {n: 2}\n").exit_code == 1);
    CHECK(run("task: frobnicate\n").exit_code == 1);
    CHECK(run("task: truncate\nambient: {n: 2, segre: [1, 1]}\nwindow: {p: 1, q: 2}\n").exit_code == 1);
    CHECK(run("task: truncate\nambient: {n: 2}\nwindow: {p: 3, q: 2}\n").exit_code == 1);
    CHECK(run("task: truncate\nambient: {n: 2}\nwindow: {p: 1, q: 2}\nfield: p:101\n").exit_code == 1);
}

TEST_CASE("report shape and determinism") {
    const std::string s = "task: truncate\nambient: {n: 2}\nX: [\"x0*x2 - x1^2\"]\nwindow: {p: 2, q: 4}\n";
    const RunOutcome a = run(s);
    const RunOutcome b = run(s);
    CHECK(a.exit_code == 0);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report["schema"] == kReportSchema);
    CHECK(a.report["status"] == "ok");
    CHECK(a.report["result"]["dims"]["3"] == 7);
    CHECK(a.report["result"]["hilbert_polynomial"].is_string());
    CHECK_FALSE(a.report.contains("timing_ms"));
    RunOptions timed;
    timed.timing = true;
    CHECK(run(s, timed).report.contains("timing_ms"));
}

TEST_CASE("field option overrides the scenario") {
    const std::string s = "task: tangent\nambient: {n: 2}\nZ: [\"x1\", \"x2\"]\nwindow: {p: 1, q: 4}\nfield: q\n";
    RunOptions prime;
    prime.field = "p:1000003";
    const RunOutcome r = run(s, prime);
    CHECK(r.report["field"] == "p:1000003");
    CHECK(r.report["result"]["H"] == run(s).report["result"]["H"]);
    prime.field = "p:10";
    CHECK(run(s, prime).exit_code == 1);
}

TEST_CASE("subcommand must match the scenario task") {
    RunOptions o;
    o.task = "sweep";
    const RunOutcome r = run("task: truncate\nambient: {n: 1}\nwindow: {p: 1, q: 2}\n", o);
    CHECK(r.exit_code == 1);
    CHECK(message(r).find("does not match subcommand") != std::string::npos);
    // Without a task key the subcommand supplies it.
    CHECK(run("ambient: {n: 1}\nwindow: {p: 1, q: 2}\n", RunOptions{std::nullopt, 1, false, "truncate"}).exit_code == 0);
}

TEST_CASE("Segre ambient adds the minors to X and Z") {
    const RunOutcome r = run("task: rmap\nambient: {segre: [1, 1]}\nZ: [\"x1 - x2\"]\nwindow: {p: 1, q: 4}\n");
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["result"]["H"] == nlohmann::json::array({3, 0}));
    CHECK(run("task: rmap\nambient: {n: 3}\nZ: [\"x1 - x2\"]\nwindow: {p: 1, q: 4}\n").exit_code == 1);
}

TEST_CASE("exit codes by error kind") {
    // m = 2 needs Harrison weight 5, above the default n_max = 4.
    CHECK(run("task: tangent\nambient: {n: 2}\nZ: [\"x1\", \"x2\"]\nwindow: {p: 1, q: 6}\nm: 2\n").exit_code == 2);
    CHECK(run("task: operad\noperad: com\nmax_arity: 9\n").exit_code == 2);
    const RunOutcome mismatch = run("task: compare\nambient: {n: 1}\nZ: [\"x0*x1\"]\nwindow: {p: 2, q: 5}\n");
    CHECK(mismatch.exit_code == 3);
    CHECK(mismatch.report["status"] == "mismatch");
    CHECK(mismatch.text.find("MISMATCH") != std::string::npos);
}
