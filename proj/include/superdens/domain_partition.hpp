#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace superdens {

/// Spacings t(i) = x(i+1) - x(i) of sorted samples. During partitioning an
/// accepted cut is marked kIndicator and a rejected candidate is zeroed.
struct GapArray {
    static constexpr double kIndicator = -1.0;
    std::vector<double> t;
};

/// Samples [first, last] (inclusive indices into the sorted set) and the
/// interval they span.
struct PieceRange {
    std::size_t first = 0;
    std::size_t last = 0;
    double lo = 0.0;
    double hi = 0.0;

    std::size_t sample_count() const { return last - first + 1; }
};

struct DomainPartition {
    std::vector<PieceRange> pieces;
    /// Accepted cut indices i0, in acceptance order; the cut removes (x(i0), x(i0+1)).
    std::vector<std::size_t> cut_indices;
    /// Removed intervals in ascending order.
    std::vector<std::pair<double, double>> removed_gaps;
};

GapArray gaps(std::span<const double> sorted_samples);

/// max(30, ceil(sample_count / 6)).
std::size_t default_min_piece_size(std::size_t sample_count);

inline constexpr double kDefaultMinGapRatio = 25.0;  // matches SolverConfig::min_gap_ratio

/// Larger of the median spacings on either side of gap i0, taking up to
/// `width` spacings per side from the segment [first, last].
double local_spacing(std::span<const double> t, std::size_t i0, std::size_t first, std::size_t last,
                     std::size_t width);

/// Largest-gap splitting. Repeatedly picks the largest unmarked gap (smallest
/// index on ties) and cuts there iff both sides of its segment keep at least
/// min_piece_size samples and the gap exceeds min_gap_ratio times the local
/// spacing (medians over min_piece_size - 1 neighbours per side). Stops when
/// no segment could still be cut or every gap has been marked.
DomainPartition partition(std::span<const double> sorted_samples, std::size_t min_piece_size,
                          double min_gap_ratio = kDefaultMinGapRatio);

}  // namespace superdens
