#pragma once

// Experiment sweep, result rows and CSV persistence.

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rqmc/estimators.hpp"
#include "rqmc/integrands.hpp"

namespace rqmc {

struct ResultRow {
    PointSetKind pointset_kind = PointSetKind::lattice;
    std::size_t dim = 0;
    unsigned log2n = 0;
    std::size_t replicates = 0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    double F = 0.0;
    double F_prime = 0.0;
    double S = 0.0;
    double abs_E = 0.0;
    double abs_E_prime = 0.0;
    double diff = 0.0;  // abs_E_prime - abs_E; positive when the median wins

    bool operator==(const ResultRow&) const = default;
};

/// An integrand on the unit cube together with its exact integral.
struct Problem {
    std::function<double(std::span<const double>)> f;
    double exact = 0.0;
};

using ProblemFactory = std::function<Problem(std::size_t dim)>;

inline Problem keister_problem(std::size_t d) {
    return Problem{KeisterIntegrand(d), keister_exact(d).value};
}

struct RunOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

class cell_failure : public std::runtime_error {
public:
    cell_failure(const Cell& cell, const std::string& what)
        : std::runtime_error("cell " + describe(cell) + " failed: " + what), cell_(cell) {}
    const Cell& cell() const noexcept { return cell_; }

private:
    Cell cell_;
};

/// Runs every (dim, log2n) cell for the configured point-set kind.
///
/// Work is split into (cell, trial) tasks on a pool of worker threads; each
/// task writes into its own slot and trials are folded in index order
/// afterwards, so the rows do not depend on the thread count. Rows come back
/// sorted by (dim, log2n); duplicate dimensions are collapsed.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const RunOptions& options = {},
                                             const ProblemFactory& factory = keister_problem) {
    config.validate();
    std::vector<std::size_t> dims = config.dims;
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    std::vector<Problem> problems;
    problems.reserve(dims.size());
    for (auto d : dims) {
        problems.push_back(factory(d));
    }

    struct CellJob {
        Cell cell;
        std::size_t problem;
        SeedPath path;
    };
    std::vector<CellJob> cells;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        for (unsigned m = config.log2n_min; m <= config.log2n_max; ++m) {
            Cell c{dims[p], config.pointset_kind, m};
            cells.push_back({c, p, cell_seed_path(config.master_seed, c)});
        }
    }

    const std::size_t T = config.trials;
    std::vector<TrialAggregates> slots(cells.size() * T);
    // Largest cells first to keep the pool busy at the end.
    std::vector<std::size_t> order(slots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = cells[a / T].cell;
        const auto& cb = cells[b / T].cell;
        return ca.n() * ca.dim > cb.n() * cb.dim;
    });

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::optional<cell_failure> first_error;

    auto worker = [&] {
        for (;;) {
            if (failed.load()) return;
            const std::size_t k = next.fetch_add(1);
            if (k >= order.size()) return;
            const std::size_t slot = order[k];
            const auto& job = cells[slot / T];
            try {
                slots[slot] = run_seeded_trial(job.cell, config.replicates, problems[job.problem].f, job.path,
                                               slot % T, config.paired);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error.emplace(job.cell, e.what());
                failed.store(true);
                return;
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, order.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (first_error) {
        throw *first_error;
    }

    std::vector<ResultRow> rows;
    rows.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& job = cells[c];
        const CellResult r = finalize_cell(job.cell, std::span(slots).subspan(c * T, T), problems[job.problem].exact);
        rows.push_back(ResultRow{config.pointset_kind, job.cell.dim, job.cell.log2n, config.replicates, T,
                                 config.master_seed, r.F, r.F_prime, r.S, r.abs_E, r.abs_E_prime,
                                 r.abs_E_prime - r.abs_E});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* csv_header = "pointset,dim,log2n,replicates,trials,seed,F,Fprime,S,absE,absEprime,diff";

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_csv(const std::vector<ResultRow>& rows) {
    std::string out = csv_header;
    out += '\n';
    for (const auto& r : rows) {
        out += to_string(r.pointset_kind);
        out += ',' + std::to_string(r.dim) + ',' + std::to_string(r.log2n) + ',' + std::to_string(r.replicates) +
               ',' + std::to_string(r.trials) + ',' + std::to_string(r.master_seed);
        for (double x : {r.F, r.F_prime, r.S, r.abs_E, r.abs_E_prime, r.diff}) {
            out += ',' + format_real(x);
        }
        out += '\n';
    }
    return out;
}

/// Writes header plus one line per row. Refuses an empty row list without
/// touching the destination.
inline void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& destination) {
    if (rows.empty()) {
        throw std::invalid_argument("write_csv: no rows to write to " + destination.string());
    }
    const std::string text = format_csv(rows);
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_csv: cannot open " + destination.string() + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) {
        throw std::runtime_error("write_csv: write failed for " + destination.string());
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline double parse_real(const std::string& s, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::invalid_argument("csv line " + std::to_string(line) + ": bad real '" + s + "'");
    }
    return v;
}

inline std::uint64_t parse_uint(const std::string& s, std::size_t line) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return std::stoull(s);
}

}  // namespace detail

inline std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw std::invalid_argument("csv: missing or unexpected header");
    }
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 12) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected 12 fields");
        }
        ResultRow r;
        r.pointset_kind = parse_pointset_kind(f[0]);
        r.dim = detail::parse_uint(f[1], line_no);
        r.log2n = static_cast<unsigned>(detail::parse_uint(f[2], line_no));
        r.replicates = detail::parse_uint(f[3], line_no);
        r.trials = detail::parse_uint(f[4], line_no);
        r.master_seed = detail::parse_uint(f[5], line_no);
        r.F = detail::parse_real(f[6], line_no);
        r.F_prime = detail::parse_real(f[7], line_no);
        r.S = detail::parse_real(f[8], line_no);
        r.abs_E = detail::parse_real(f[9], line_no);
        r.abs_E_prime = detail::parse_real(f[10], line_no);
        r.diff = detail::parse_real(f[11], line_no);
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_csv: cannot open " + path.string());
    }
    return read_csv(in);
}

}  // namespace rqmc
