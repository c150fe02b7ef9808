#pragma once

// Command-line front end: run, plot, exact, points.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rqmc/rqmc.hpp"

namespace rqmc::cli {

inline void print_points(const PointSet& ps, std::ostream& out) {
    std::string line;
    for (std::size_t i = 0; i < ps.n; ++i) {
        line.clear();
        for (std::size_t j = 0; j < ps.d; ++j) {
            if (j) line += ',';
            line += format_real(ps(i, j));
        }
        line += '\n';
        out << line;
    }
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"Randomized QMC median-of-means vs mean-of-means experiments", "rqmc"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string pointset = "lattice";
    std::string csv_out = "results.csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool independent = false;
    auto* run = app.add_subcommand("run", "Run the error-convergence sweep and write a results CSV");
    run->add_option("--pointset", pointset, "Point set kind")->check(CLI::IsMember({"lattice", "dnb2"}))->capture_default_str();
    run->add_option("--dims", cfg.dims, "Comma-separated dimensions")->delimiter(',')->capture_default_str();
    run->add_option("--log2n-min", cfg.log2n_min, "Smallest log2 sample size")->capture_default_str();
    run->add_option("--log2n-max", cfg.log2n_max, "Largest log2 sample size")->capture_default_str();
    run->add_option("--replicates", cfg.replicates, "Replicates R per trial")->capture_default_str();
    run->add_option("--trials", cfg.trials, "Trials T per cell")->capture_default_str();
    run->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
    run->add_option("--out", csv_out, "Output CSV path")->capture_default_str();
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_flag("--independent-replicates", independent,
                  "Draw separate replicate sets for the mean-of-means pipeline");

    std::string csv_in;
    std::string outdir = "plots";
    auto* plot = app.add_subcommand("plot", "Render comparison and difference SVGs from a results CSV");
    plot->add_option("--in", csv_in, "Results CSV")->required();
    plot->add_option("--outdir", outdir, "Output directory")->capture_default_str();

    std::size_t exact_dim = 0;
    auto* exact = app.add_subcommand("exact", "Print the exact Keister integral for a dimension");
    exact->add_option("--dim", exact_dim, "Dimension (1-16)")->required();

    std::string pts_kind = "lattice";
    std::size_t pts_dim = 2;
    unsigned pts_log2n = 4;
    std::uint64_t pts_seed = cfg.master_seed;
    std::string directions;
    auto* points = app.add_subcommand("points", "Dump one randomized point set as CSV");
    points->add_option("--pointset", pts_kind, "Point set kind")->check(CLI::IsMember({"lattice", "dnb2"}))->capture_default_str();
    points->add_option("--dim", pts_dim, "Dimension")->capture_default_str();
    points->add_option("--log2n", pts_log2n, "log2 of the point count")->capture_default_str();
    points->add_option("--seed", pts_seed, "Seed")->capture_default_str();
    points->add_option("--directions", directions, "Direction-number table for dnb2 (default: built-in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) {
            cfg.pointset_kind = parse_pointset_kind(pointset);
            cfg.paired = !independent;
            const auto rows = run_experiment(cfg, RunOptions{threads});
            write_csv(rows, csv_out);
        } else if (*plot) {
            const auto files = emit_plots(read_csv(csv_in), outdir);
            for (const auto& f : files) out << f.string() << '\n';
        } else if (*exact) {
            const auto v = keister_exact(exact_dim);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.15g", v.value);
            out << buf << '\n';
        } else if (*points) {
            Cell cell{pts_dim, parse_pointset_kind(pts_kind), pts_log2n};
            cell.validate();
            SplitMix64 rng(pts_seed);
            if (cell.kind == PointSetKind::digital_net) {
                const DirectionTable table =
                    directions.empty() ? default_direction_table() : load_direction_table(directions);
                print_points(net_points(draw_random_net(cell.log2n, cell.dim, rng, table)), out);
            } else {
                print_points(draw_point_set(cell, rng), out);
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace rqmc::cli
