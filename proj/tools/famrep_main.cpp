#include "famrep/cli/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Exact finitely additive representation toolkit"};
    app.require_subcommand(1, 1);

    famrep::cli::Options options;
    std::optional<std::uint64_t> seed;
    std::string tolerance;
    std::size_t jobs = 1;
    std::vector<std::string> inputs;

    const auto add_common = [&](CLI::App* sub, bool takes_input) {
        sub->add_option("--seed", seed, "Seed for the Skorohod sampler (and for selftest)");
        if (!takes_input) return;
        sub->add_option("--tolerance", tolerance, "Reconstruction tolerance for sampled convex functions, as p/q");
        sub->add_flag("--emit-minimal-ring", options.emit_minimal_ring,
                      "Attach the minimal carrying structure to companion verdicts");
        sub->add_option("-j,--jobs", jobs, "Worker threads for directory inputs")->check(CLI::PositiveNumber);
        sub->add_option("inputs", inputs, "Instance files or directories")->required();
    };

    const std::vector<std::pair<std::string, std::string>> described{
        {"check", "Solve any instance with its default solver"},
        {"represent", "Probability representation of a conglomerability instance"},
        {"companion", "Companion measure, optionally with a null ideal"},
        {"disintegrate", "Mixture weights of a disintegration instance"},
        {"integrate", "Layer-cake integral"},
        {"decompose", "Kink measure of a convex function"},
        {"skorohod", "Interval measure for the universal Skorohod map"},
        {"selftest", "Run the randomized invariant suites"},
    };
    for (const auto& [name, help] : described) add_common(app.add_subcommand(name, help), name != "selftest");

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    options.seed = seed;
    options.jobs = jobs;
    if (!tolerance.empty()) {
        try {
            options.tolerance = famrep::parse_rational(tolerance);
        } catch (const std::invalid_argument&) {
            std::cerr << "--tolerance: malformed rational \"" << tolerance << "\"\n";
            return 2;
        }
    }
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    return famrep::cli::run(command, paths, options, std::cout, std::cerr);
}
