#include "superdens/domain_partition.hpp"

#include <algorithm>
#include <map>

#include "superdens/common.hpp"

namespace superdens {

GapArray gaps(std::span<const double> xs) {
    if (xs.size() < 2) throw InvalidArgument("gaps: need at least 2 samples");
    if (!std::is_sorted(xs.begin(), xs.end())) throw InvalidArgument("gaps: samples must be sorted");
    GapArray g;
    g.t.resize(xs.size() - 1);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) g.t[i] = xs[i + 1] - xs[i];
    return g;
}

std::size_t default_min_piece_size(std::size_t sample_count) {
    return std::max<std::size_t>(30, (sample_count + 5) / 6);
}

double local_spacing(std::span<const double> t, std::size_t i0, std::size_t first, std::size_t last,
                     std::size_t width) {
    std::vector<double> side;
    const auto median = [&side] {
        if (side.empty()) return 0.0;
        auto mid = side.begin() + static_cast<std::ptrdiff_t>(side.size() / 2);
        std::nth_element(side.begin(), mid, side.end());
        double hi = *mid;
        if (side.size() % 2 == 1) return hi;
        return 0.5 * (hi + *std::max_element(side.begin(), mid));
    };
    for (std::size_t i = i0 > first + width ? i0 - width : first; i < i0; ++i) side.push_back(t[i]);
    const double left = median();
    side.clear();
    for (std::size_t i = i0 + 1; i < last && i <= i0 + width; ++i) side.push_back(t[i]);
    const double right = median();
    return std::max(left, right);
}

DomainPartition partition(std::span<const double> xs, std::size_t min_piece_size, double min_gap_ratio) {
    if (xs.empty()) throw InvalidArgument("partition: no samples");
    if (min_piece_size < 1) throw InvalidArgument("partition: min_piece_size must be >= 1");
    if (!(min_gap_ratio >= 0.0)) throw InvalidArgument("partition: min_gap_ratio must be >= 0");

    DomainPartition result;
    if (xs.size() == 1) {
        result.pieces.push_back({0, 0, xs.front(), xs.front()});
        return result;
    }

    GapArray g = gaps(xs);
    const std::vector<double> spacing = g.t;
    const std::size_t width = std::max<std::size_t>(1, min_piece_size - 1);
    std::vector<bool> marked(g.t.size(), false);
    // Segment start -> segment end (inclusive sample indices).
    std::map<std::size_t, std::size_t> segments{{0, xs.size() - 1}};

    const auto cuttable = [&](std::size_t first, std::size_t last) {
        return last - first + 1 >= 2 * min_piece_size;
    };

    for (;;) {
        // P5: nothing left that could ever be accepted.
        const bool any_cuttable = std::any_of(segments.begin(), segments.end(),
                                              [&](const auto& s) { return cuttable(s.first, s.second); });
        if (!any_cuttable) break;

        // P3: largest unmarked gap, smallest index on ties.
        std::size_t best = g.t.size();
        for (std::size_t i = 0; i < g.t.size(); ++i) {
            if (marked[i]) continue;
            if (best == g.t.size() || g.t[i] > g.t[best]) best = i;
        }
        // Exhausted, or only zero-width spacings remain: a cut there would not separate anything.
        if (best == g.t.size() || !(g.t[best] > 0.0)) break;

        // P4: size rule within the segment holding the gap.
        auto seg = std::prev(segments.upper_bound(best));
        const std::size_t first = seg->first;
        const std::size_t last = seg->second;
        const std::size_t left = best - first + 1;
        const std::size_t right = last - best;
        marked[best] = true;
        const bool sized = left >= min_piece_size && right >= min_piece_size;
        if (sized && spacing[best] > min_gap_ratio * local_spacing(spacing, best, first, last, width)) {
            g.t[best] = GapArray::kIndicator;
            result.cut_indices.push_back(best);
            seg->second = best;
            segments.emplace(best + 1, last);
        } else {
            g.t[best] = 0.0;
        }
    }

    for (const auto& [first, last] : segments) result.pieces.push_back({first, last, xs[first], xs[last]});
    std::vector<std::size_t> sorted_cuts = result.cut_indices;
    std::sort(sorted_cuts.begin(), sorted_cuts.end());
    for (std::size_t i0 : sorted_cuts) result.removed_gaps.emplace_back(xs[i0], xs[i0 + 1]);
    return result;
}

}  // namespace superdens
