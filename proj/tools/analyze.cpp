#include "symcon/report.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Constrained-system analyzer: Dirac, original and modified "
                 "Barcelos-Wotzasek symplectic algorithms over exact rational functions"};

    symcon::RunConfig config;
    int max_level = -1;
    int degree = -1;
    std::string json_path;
    std::string promote;

    app.add_option("model", config.model_path, "model file to analyze")->required();
    app.add_option("--algo", config.algorithm, "algorithm: dirac | bw | mbw | compare")
        ->check(CLI::IsMember({"dirac", "bw", "mbw", "compare"}))
        ->capture_default_str();
    app.add_option("--max-level", max_level, "iteration limit (default: model option)");
    app.add_flag("--eom-constraints", config.eom_constraints,
                 "promote a conserved quantity matching a Dirac-only chain entry and continue");
    app.add_option("--degree", degree, "conserved-quantity ansatz degree (default: model option)");
    app.add_option("--promote", promote, "label of the Dirac chain entry to promote");
    app.add_option("--json", json_path, "write the JSON report to this path");
    app.add_option("--seed", config.seed, "seed for the numeric check oracles")
        ->capture_default_str();
    app.add_option("--output", config.output, "text | json | both")
        ->check(CLI::IsMember({"text", "json", "both"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (max_level >= 0) config.max_level = max_level;
    if (degree >= 0) config.conserved_degree = degree;
    if (!json_path.empty()) config.json_path = json_path;
    if (!promote.empty()) config.promote = promote;

    return symcon::run_cli(config, std::cout, std::cerr);
}
