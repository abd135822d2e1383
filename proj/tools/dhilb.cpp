// Command-line front end: runs one YAML scenario and prints its report.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dhilb/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact tangent and Harrison/operad computations for truncated Hilbert schemes"};
    app.set_version_flag("--version", std::string(dhilb::tool_version()));
    app.require_subcommand(1);
    app.fallthrough();

    bool as_json = false;
    bool timing = false;
    unsigned threads = 1;
    std::string field;
    std::string output;
    app.add_flag("--json", as_json, "Print the JSON report instead of text");
    app.add_option("--threads", threads, "Upper bound on worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--field", field, "Arithmetic: q or p:<prime> (overrides the scenario)");
    app.add_flag("--timing", timing, "Add wall time to the report (breaks byte-identical output)");
    app.add_option("-o,--output", output, "Also write the report to this file");

    std::string scenario;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"run", "Run the task named in the scenario"},
        {"truncate", "Dimensions of the truncated coordinate ring A_[p,q]"},
        {"tangent", "Derived tangent H^0..H^m at Z in one window"},
        {"sweep", "Derived tangent over a grid of windows, with stabilization flags"},
        {"harrison", "Harrison cohomology of an algebra with coefficients in itself"},
        {"operad", "Operad components, bar/cobar complexes, coordinate dg-algebra, RCA tangent"},
        {"oracle", "Cohomology of a complete intersection (Cech-Koszul)"},
        {"rmap", "Tangent of the mapping space via a graph in a Segre product"},
        {"compare", "Derived tangent against the complete-intersection oracle"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("scenario", scenario, "Scenario file (YAML)")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    dhilb::RunOptions options;
    if (!field.empty()) options.field = field;
    options.threads = threads;
    options.timing = timing;
    const std::string command = app.get_subcommands().front()->get_name();
    if (command != "run") options.task = command;

    const dhilb::RunOutcome outcome = dhilb::run_scenario_file(scenario, options);
    const std::string rendered = as_json ? outcome.report.dump(2) + "\n" : outcome.text;
    std::cout << rendered;
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "cannot write " << output << "\n";
            return 1;
        }
        out << rendered;
    }
    if (outcome.exit_code != 0 && !as_json) std::cerr << "exit " << outcome.exit_code << "\n";
    return outcome.exit_code;
}
