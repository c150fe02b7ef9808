#pragma once

// Median-of-means and mean-of-means estimation.
//
// One trial draws R randomized point sets and forms the replicate estimates
// I_1..I_R; A is their median and A' their mean. A cell repeats T trials and
// reports F = mean(A_t), F' = mean(A'_t) and the errors E = S - F, E' = S - F'.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqmc/pointsets.hpp"
#include "rqmc/random.hpp"

namespace rqmc {

enum class PointSetKind { lattice, digital_net };

inline std::string to_string(PointSetKind kind) { return kind == PointSetKind::lattice ? "lattice" : "dnb2"; }

inline PointSetKind parse_pointset_kind(const std::string& s) {
    if (s == "lattice") return PointSetKind::lattice;
    if (s == "dnb2") return PointSetKind::digital_net;
    throw std::invalid_argument("unknown point set kind '" + s + "' (expected lattice or dnb2)");
}

/// One (dimension, point-set kind, sample size) combination.
struct Cell {
    std::size_t dim = 0;
    PointSetKind kind = PointSetKind::lattice;
    unsigned log2n = 0;

    std::uint64_t n() const noexcept { return std::uint64_t{1} << log2n; }

    void validate() const {
        if (dim < 1) throw std::invalid_argument("cell: dimension must be >= 1");
        if (log2n < 1 || log2n > 32) throw std::invalid_argument("cell: log2n must lie in [1, 32]");
    }
};

inline std::string describe(const Cell& c) {
    return "(" + to_string(c.kind) + ", d=" + std::to_string(c.dim) + ", log2n=" + std::to_string(c.log2n) + ")";
}

/// Sweep configuration. Defaults are the published experiment settings.
struct ExperimentConfig {
    std::vector<std::size_t> dims{2, 3, 5, 8};
    PointSetKind pointset_kind = PointSetKind::lattice;
    unsigned log2n_min = 8;
    unsigned log2n_max = 19;
    std::size_t replicates = 11;
    std::size_t trials = 25;
    std::uint64_t master_seed = 20240101;
    // When false the mean-of-means pipeline uses its own replicate sets.
    bool paired = true;

    void validate() const {
        if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (dims.empty()) throw std::invalid_argument("at least one dimension is required");
        for (auto d : dims) {
            if (d < 1) throw std::invalid_argument("every dimension must be >= 1");
        }
        if (log2n_min > log2n_max) {
            throw std::invalid_argument("log2n range is empty: min " + std::to_string(log2n_min) + " > max " +
                                        std::to_string(log2n_max));
        }
        if (log2n_min < 1 || log2n_max > 32) {
            throw std::invalid_argument("log2n range must lie within [1, 32]");
        }
    }
};

struct TrialResult {
    std::vector<double> replicate_estimates;
    double median_aggregate = 0.0;  // A
    double mean_aggregate = 0.0;    // A'
};

struct CellResult {
    std::size_t dim = 0;
    PointSetKind kind = PointSetKind::lattice;
    std::uint64_t n = 0;
    double F = 0.0;
    double F_prime = 0.0;
    double S = 0.0;
    double E = 0.0;
    double E_prime = 0.0;
    double abs_E = 0.0;
    double abs_E_prime = 0.0;

    bool operator==(const CellResult&) const = default;
};

/// Clamps a coordinate into [2^-53, 1 - 2^-53] so the Gaussian transform stays finite.
constexpr double clamp_unit(double x) noexcept {
    constexpr double lo = 0x1.0p-53;
    constexpr double hi = 1.0 - 0x1.0p-53;
    return x < lo ? lo : (x > hi ? hi : x);
}

/// Equal-weight estimate (1/n) sum_i f(clamp(x_i)), summed in index order.
template <class F>
double replicate_estimate(const PointSet& points, const F& f) {
    if (points.n == 0 || points.d == 0) {
        throw std::invalid_argument("replicate_estimate: empty point set");
    }
    std::vector<double> u(points.d);
    double sum = 0.0;
    for (std::size_t i = 0; i < points.n; ++i) {
        const auto x = points.point(i);
        std::transform(x.begin(), x.end(), u.begin(), clamp_unit);
        try {
            sum += f(std::span<const double>(u));
        } catch (const std::domain_error& e) {
            throw std::domain_error("integrand domain error at point " + std::to_string(i) + ": " + e.what());
        }
    }
    return sum / static_cast<double>(points.n);
}

/// Odd length: middle order statistic. Even length: midpoint of the two middle ones.
inline double median(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty list");
    }
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Arithmetic mean, accumulated in index order.
inline double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty list");
    }
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

inline TrialResult aggregate_trial(std::vector<double> estimates) {
    TrialResult t;
    t.median_aggregate = median(estimates);
    t.mean_aggregate = mean(estimates);
    t.replicate_estimates = std::move(estimates);
    return t;
}

/// Runs R replicates produced by `sampler(rng)` and aggregates them.
template <class Sampler, class Rng>
TrialResult run_trial_with(std::size_t R, Sampler&& sampler, Rng& rng) {
    if (R < 1) {
        throw std::invalid_argument("run_trial: replicates must be >= 1");
    }
    std::vector<double> estimates;
    estimates.reserve(R);
    for (std::size_t r = 0; r < R; ++r) {
        estimates.push_back(sampler(rng));
    }
    return aggregate_trial(std::move(estimates));
}

/// Freshly randomized point set for a cell, drawn from rng.
template <class Rng>
PointSet draw_point_set(const Cell& cell, Rng& rng) {
    cell.validate();
    if (cell.kind == PointSetKind::lattice) {
        return lattice_points(draw_random_lattice(cell.n(), cell.dim, rng));
    }
    return net_points(draw_random_net(cell.log2n, cell.dim, rng));
}

/// One trial: R independently randomized generators drawn in sequence from rng.
/// A and A' come from the same replicate list.
template <class F, class Rng>
TrialResult run_trial(const Cell& cell, std::size_t R, const F& f, Rng& rng) {
    cell.validate();
    return run_trial_with(
        R, [&](Rng& g) { return replicate_estimate(draw_point_set(cell, g), f); }, rng);
}

struct TrialAggregates {
    double A = 0.0;
    double A_prime = 0.0;
};

/// Trial t of a cell whose seed path is `cell_path`. The trial generator is
/// derived from (cell_path, trial t); the independent mean-of-means set, when
/// unpaired, from (cell_path, trial t, purpose 1).
template <class F>
TrialAggregates run_seeded_trial(const Cell& cell, std::size_t R, const F& f, const SeedPath& cell_path,
                                 std::size_t t, bool paired = true) {
    const SeedPath trial_path = cell_path.with(SeedTag::trial, t);
    auto rng = make_rng(trial_path);
    const TrialResult main = run_trial(cell, R, f, rng);
    if (paired) {
        return {main.median_aggregate, main.mean_aggregate};
    }
    auto mean_rng = make_rng(trial_path.with(SeedTag::purpose, 1));
    const TrialResult other = run_trial(cell, R, f, mean_rng);
    return {main.median_aggregate, other.mean_aggregate};
}

/// Seed path of a cell under a master seed.
inline SeedPath cell_seed_path(std::uint64_t master_seed, const Cell& cell) {
    return SeedPath(master_seed, {{SeedTag::pointset, static_cast<std::uint64_t>(cell.kind)},
                                  {SeedTag::dim, cell.dim},
                                  {SeedTag::log2n, cell.log2n}});
}

/// Folds per-trial aggregates into F, F' and the errors against S.
inline CellResult finalize_cell(const Cell& cell, std::span<const TrialAggregates> trials, double S) {
    if (trials.empty()) {
        throw std::invalid_argument("finalize_cell: no trials");
    }
    double sum_a = 0.0, sum_a_prime = 0.0;
    for (const auto& t : trials) {
        sum_a += t.A;
        sum_a_prime += t.A_prime;
    }
    CellResult c;
    c.dim = cell.dim;
    c.kind = cell.kind;
    c.n = cell.n();
    c.F = sum_a / static_cast<double>(trials.size());
    c.F_prime = sum_a_prime / static_cast<double>(trials.size());
    c.S = S;
    c.E = S - c.F;
    c.E_prime = S - c.F_prime;
    c.abs_E = std::abs(c.E);
    c.abs_E_prime = std::abs(c.E_prime);
    return c;
}

/// T trials of one cell, each seeded from (cell_path, trial index).
template <class F>
CellResult run_cell(const Cell& cell, std::size_t R, std::size_t T, const F& f, double S, const SeedPath& cell_path,
                    bool paired = true) {
    if (T < 1) {
        throw std::invalid_argument("run_cell: trials must be >= 1");
    }
    std::vector<TrialAggregates> trials;
    trials.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        trials.push_back(run_seeded_trial(cell, R, f, cell_path, t, paired));
    }
    return finalize_cell(cell, trials, S);
}

}  // namespace rqmc
