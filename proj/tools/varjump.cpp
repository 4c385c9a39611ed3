// varjump: runs one verification experiment described by a config file and
// writes CSV/JSON/SVG reports.
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "varjump/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "varjump: empirical checks of jump/variation functionals and rough-kernel operator families"};
    std::string experiment, config_path, out_dir, formats;
    long seed = -1;
    app.add_option("experiment", experiment, "experiment name (see --list)")->required(false);
    app.add_option("--config", config_path, "config file (sectioned key = value text)");
    app.add_option("--seed", seed, "override the master seed");
    app.add_option("--out", out_dir, "override the output directory");
    app.add_option("--format", formats, "comma-separated subset of csv,json,svg");
    bool list = false;
    app.add_flag("--list", list, "list experiment names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    if (list) {
        for (const auto& name : varjump::experiment_names()) std::puts(name.c_str());
        std::puts("\nkernel specs: one | sin | cos2 | hilbert | twolevel:a=1.5,arc=0.5pi |");
        std::puts("  atom:c=0,r=0.25pi | gs:alpha=2[,nodes=N]");
        std::puts("the gs kernel is a lacunary near-critical density saturating the");
        std::puts("Grafakos-Stefanov (log|xi|)^{-(1+alpha)} Fourier decay along the ray e_1");
        return 0;
    }

    std::string text;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot read config '%s'\n", config_path.c_str());
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    varjump::ParsedConfig parsed = varjump::parse_config(text);
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) {
            if (e.line > 0)
                std::fprintf(stderr, "%s:%d: %s\n", config_path.c_str(), e.line, e.message.c_str());
            else
                std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.message.c_str());
            if (e.column > 0) std::fprintf(stderr, "  (at position %d)\n", e.column);
        }
        return 2;
    }
    varjump::ExperimentConfig cfg = parsed.config;
    if (!experiment.empty()) cfg.experiment = experiment;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!formats.empty()) {
        cfg.formats.clear();
        std::stringstream ss(formats);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.formats.push_back(item);
    }
    if (cfg.experiment.empty()) {
        std::fprintf(stderr, "error: no experiment given (positional argument or [experiment] name)\n");
        return 2;
    }
    bool known = false;
    for (const auto& n : varjump::experiment_names()) known = known || n == cfg.experiment;
    if (!known) {
        std::fprintf(stderr, "error: unknown experiment '%s' (--list shows the choices)\n",
                     cfg.experiment.c_str());
        return 2;
    }

    try {
        const varjump::ExperimentReport report = varjump::run_experiment(cfg);
        const auto files = varjump::emit_report(report, cfg.out_dir, cfg.formats);
        for (const auto& v : report.verdicts)
            std::printf("%s %s: %s\n", v.pass ? "[PASS]" : "[FAIL]", v.name.c_str(), v.detail.c_str());
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        std::printf("%s: %zu cases in %.2f s\n", cfg.experiment.c_str(), report.rows.size(),
                    report.wall_seconds);
        return report.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s (experiment %s)\n", e.what(), cfg.experiment.c_str());
        return 2;
    }
}
