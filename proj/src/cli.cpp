#include "manet/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "manet/experiment.hpp"

namespace manet::cli {

namespace {

config::ScenarioConfig load_config(const std::string& path,
                                   const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw config::ConfigError(config::ConfigFault::ConstraintViolation, path, 0,
                                  "cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    config::ScenarioConfig cfg = config::parse_config(buffer.str());
    config::apply_overrides(cfg, overrides);
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

int do_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                const std::string& csv_path, const std::string& trace_path) {
    config::ScenarioConfig cfg = load_config(config_path, overrides);
    std::ofstream trace_file;
    std::ostream* trace = nullptr;
    if (!trace_path.empty()) {
        trace_file.open(trace_path, std::ios::binary);
        if (!trace_file) {
            throw std::runtime_error("cannot write '" + trace_path + "'");
        }
        trace = &trace_file;
    }
    experiment::RunResult result = experiment::run_experiment(cfg, trace);
    if (csv_path.empty()) {
        std::cout << result.csv;
    } else {
        write_text(csv_path, result.csv);
    }
    return 0;
}

int do_compare(const std::string& config_path, std::size_t seeds,
               const std::string& csv_path) {
    config::ScenarioConfig cfg = load_config(config_path, {});
    experiment::CompareResult result = experiment::compare(cfg, seeds);
    if (csv_path.empty()) {
        std::cout << result.summary_csv;
        return 0;
    }
    write_text(csv_path, result.summary_csv);
    write_text(csv_path + ".runs.csv", result.runs_csv);
    // One gnuplot-ready two-column series per metric and protocol.
    for (const auto& [metric, by_protocol] : result.series) {
        for (const auto& [protocol, means] : by_protocol) {
            std::string series;
            for (std::size_t t = 0; t < means.size(); ++t) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%zu %.6f\n", t + 1, means[t]);
                series += buf;
            }
            write_text(csv_path + "." + metric + "." + protocol + ".dat", series);
        }
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Deterministic MANET simulator: hop-count AODV versus a "
                 "Euclidean-distance route metric"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string csv_path;
    std::string trace_path;
    std::size_t seeds = 1;

    CLI::App* simulate = app.add_subcommand("simulate", "Run one seeded scenario");
    simulate->add_option("config", config_path, "scenario file")->required();
    simulate->add_option("--set", overrides, "override a config key, key=value");
    simulate->add_option("--csv", csv_path, "write metric rows here (default stdout)");
    simulate->add_option("--trace", trace_path, "write the event trace here");

    CLI::App* cmp = app.add_subcommand(
        "compare", "Run baseline and variant over a seed sweep, identical seeds per pair");
    cmp->add_option("config", config_path, "scenario file")->required();
    cmp->add_option("--seeds", seeds, "number of consecutive seeds")
        ->check(CLI::PositiveNumber);
    cmp->add_option("--csv", csv_path,
                    "write the summary here, plus .runs.csv and per-metric .dat series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) {
            return do_simulate(config_path, overrides, csv_path, trace_path);
        }
        return do_compare(config_path, seeds, csv_path);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace manet::cli
