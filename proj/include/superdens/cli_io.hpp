#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superdens/estimator.hpp"

namespace superdens {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Whole-string decimal parse. Throws DataError on anything else.
double parse_double(std::string_view text);

/// One value per line, shortest round-trip decimal.
void write_samples(std::ostream& out, std::span<const double> values);

/// Reads one value per line. Blank lines and lines starting with '#' are
/// skipped. Throws DataError naming the offending line.
std::vector<double> read_samples(std::istream& in);

/// Model file: a JSON document holding the method, basis description,
/// coefficients, solver configuration and fit report. Doubles are written in
/// shortest round-trip form, so read(write(e)) evaluates bit-identically.
void write_model(std::ostream& out, const DensityEstimate& est);
DensityEstimate read_model(std::istream& in);

struct PlotOptions {
    std::size_t rows = 512;
    std::optional<Source> truth;
    /// Defaults to the hull of the estimate's basis.
    std::optional<Domain> domain;
};

/// Header line, then `rows` lines of x, pdf and (optionally) the true density
/// at the midpoints of `rows` equal cells.
void write_plot_grid(std::ostream& out, const DensityEstimate& est, const PlotOptions& options);

/// Header line, then piece_index, lo, hi, sample_count per piece.
void write_partition(std::ostream& out, const DomainPartition& part);

struct BenchOptions {
    Source source = Source::Exponential;
    Method method = Method::Bezier;
    std::vector<std::size_t> sample_sizes;
    std::vector<std::uint64_t> seeds;
    SolverConfig config;
};

/// One fit per (m, seed) cell. status is "ok", "budget" (stopped by
/// max_outer), "data_error" or "solver_error"; failed cells carry NaN metrics.
struct BenchRow {
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double l1 = 0.0;
    double loglik = 0.0;
    std::size_t iterations = 0;
    std::string status;
};

/// Cells run in parallel; rows come back ordered by m, then seed.
std::vector<BenchRow> run_bench(const BenchOptions& options);

/// Domain on which a fit is compared with the truth: the basis hull,
/// widened to the finite part of the source's support.
Domain comparison_domain(const DensityEstimate& est, Source source);

void write_bench(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace superdens
