#include "superdens/window_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace superdens {

namespace {

constexpr std::size_t kDropped = std::numeric_limits<std::size_t>::max();

std::size_t local_count(const BasisPiece& piece) {
    if (piece.knots) return piece.knots->basis_count();
    return static_cast<std::size_t>(piece.degree_or_order) + 1;
}

void require_sorted(std::span<const double> xs) {
    if (!std::is_sorted(xs.begin(), xs.end())) throw InvalidArgument("samples must be sorted non-decreasing");
    for (double x : xs) {
        if (!std::isfinite(x)) throw InvalidArgument("samples must be finite");
    }
}

}  // namespace

WindowBasis::WindowBasis(Family family, std::vector<BasisPiece> pieces, std::vector<Window> windows)
    : family_(family), pieces_(std::move(pieces)), windows_(std::move(windows)) {
    if (pieces_.empty()) throw InvalidArgument("window basis needs at least one piece");
    if (windows_.empty()) throw DataError("degenerate basis: no windows retained");
    if (family_ != Family::PiecewiseBezier && pieces_.size() != 1) {
        throw InvalidArgument("only the piecewise Bezier family may have several pieces");
    }

    for (std::size_t p = 0; p < pieces_.size(); ++p) {
        const auto& piece = pieces_[p];
        const bool wants_knots = family_ == Family::BSpline;
        if (wants_knots != piece.knots.has_value()) {
            throw InvalidArgument("knot vector presence does not match the basis family");
        }
        if (piece.knots) {
            const auto& kv = *piece.knots;
            if (kv.order < 1 || kv.order != piece.degree_or_order) throw InvalidArgument("bad B-spline order");
            if (kv.knots.size() < static_cast<std::size_t>(kv.order) + 1) throw InvalidArgument("too few knots");
            if (!std::is_sorted(kv.knots.begin(), kv.knots.end())) throw InvalidArgument("knots must be sorted");
            if (kv.knots.front() != piece.domain.lo() || kv.knots.back() != piece.domain.hi()) {
                throw InvalidArgument("B-spline domain must span the knot vector");
            }
        } else if (piece.degree_or_order < 0) {
            throw InvalidArgument("Bezier degree must be >= 0");
        }
        if (p > 0 && pieces_[p - 1].domain.hi() > piece.domain.lo()) {
            throw InvalidArgument("basis pieces must be ordered and non-overlapping");
        }
    }

    local_to_window_.resize(pieces_.size());
    for (std::size_t p = 0; p < pieces_.size(); ++p) local_to_window_[p].assign(local_count(pieces_[p]), kDropped);
    for (std::size_t w = 0; w < windows_.size(); ++w) {
        const auto& win = windows_[w];
        if (win.piece >= pieces_.size() || win.local >= local_to_window_[win.piece].size()) {
            throw InvalidArgument("window refers to a nonexistent basis function");
        }
        if (local_to_window_[win.piece][win.local] != kDropped) throw InvalidArgument("duplicate window");
        if (!(win.area > 0.0) || !(win.normalizer > 0.0)) throw InvalidArgument("window area must be positive");
        local_to_window_[win.piece][win.local] = w;
    }
}

Domain WindowBasis::hull() const { return {pieces_.front().domain.lo(), pieces_.back().domain.hi()}; }

double WindowBasis::raw_eval(const BasisPiece& piece, std::size_t local, double x) const {
    if (!piece.domain.contains(x)) return 0.0;
    if (piece.knots) return bspline_eval(local, *piece.knots, x);
    const double t = std::clamp((x - piece.domain.lo()) / piece.domain.width(), 0.0, 1.0);
    return bezier_eval(static_cast<int>(local), piece.degree_or_order, t);
}

double WindowBasis::eval(std::size_t w, double x) const {
    const auto& win = windows_.at(w);
    return win.normalizer * raw_eval(pieces_[win.piece], win.local, x);
}

void WindowBasis::eval_all(double x, std::span<double> out) const {
    if (out.size() != windows_.size()) throw InvalidArgument("eval_all: output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
        const auto& piece = pieces_[p];
        if (!piece.domain.contains(x)) continue;
        const auto& map = local_to_window_[p];
        if (piece.knots) {
            // Only N_{i,k} with t_i <= x <= t_{i+k} can be nonzero.
            const auto& t = piece.knots->knots;
            const auto k = static_cast<std::size_t>(piece.knots->order);
            const auto lb = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), x) - t.begin());
            const auto ub = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
            const std::size_t first = lb > k ? lb - k : 0;
            const std::size_t last = std::min(map.size(), ub);
            for (std::size_t i = first; i < last; ++i) {
                if (map[i] == kDropped) continue;
                out[map[i]] = windows_[map[i]].normalizer * bspline_eval(i, *piece.knots, x);
            }
        } else {
            const int n = piece.degree_or_order;
            const double t = std::clamp((x - piece.domain.lo()) / piece.domain.width(), 0.0, 1.0);
            for (std::size_t i = 0; i < map.size(); ++i) {
                if (map[i] == kDropped) continue;
                out[map[i]] = windows_[map[i]].normalizer * bezier_eval(static_cast<int>(i), n, t);
            }
        }
    }
}

double binomial(int n, int i) {
    if (n < 0 || i < 0 || i > n) throw InvalidArgument("binomial: index out of range");
    const int kk = std::min(i, n - i);
    double c = 1.0;
    for (int j = 1; j <= kk; ++j) c = c * static_cast<double>(n - kk + j) / static_cast<double>(j);
    return c;
}

double bezier_eval(int i, int n, double t) {
    if (n < 0 || i < 0 || i > n) throw InvalidArgument("bezier_eval: index out of range");
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("bezier_eval: t must lie in [0, 1]");
    return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

namespace {

WindowBasis bezier_pieces(Family family, std::span<const Domain> domains, int degree) {
    if (degree < 1) throw InvalidArgument("Bezier degree must be >= 1");
    if (domains.empty()) throw InvalidArgument("need at least one domain");

    std::vector<BasisPiece> pieces;
    std::vector<Window> windows;
    for (std::size_t p = 0; p < domains.size(); ++p) {
        pieces.push_back({domains[p], degree, std::nullopt});
        const double normalizer = static_cast<double>(degree + 1) / domains[p].width();
        for (int i = 0; i <= degree; ++i) {
            windows.push_back({p, static_cast<std::size_t>(i), 1.0 / normalizer, normalizer});
        }
    }
    return {family, std::move(pieces), std::move(windows)};
}

}  // namespace

WindowBasis make_bezier_basis(const Domain& domain, int degree) {
    return bezier_pieces(Family::Bezier, std::span<const Domain>(&domain, 1), degree);
}

WindowBasis make_piecewise_bezier_basis(std::span<const Domain> domains, int degree) {
    return bezier_pieces(Family::PiecewiseBezier, domains, degree);
}

namespace {

KnotVector knots_with_ends(std::span<const double> xs, int order, double lo, double hi) {
    if (order < 1) throw InvalidArgument("B-spline order must be >= 1");
    require_sorted(xs);
    const auto k = static_cast<std::size_t>(order);
    if (xs.size() < k + 1) {
        throw InvalidArgument("too few samples for B-spline order " + std::to_string(order) + ": need at least " +
                              std::to_string(k + 1));
    }
    const std::size_t m = xs.size() - 1;
    const std::size_t n = m;
    KnotVector kv;
    kv.order = order;
    kv.knots.resize(n + k + 1);
    for (std::size_t i = 0; i < kv.knots.size(); ++i) {
        if (i < k) {
            kv.knots[i] = lo;
        } else if (i <= n) {
            kv.knots[i] = xs[i - k + 1];
        } else {
            kv.knots[i] = hi;
        }
    }
    if (!std::is_sorted(kv.knots.begin(), kv.knots.end())) {
        throw InvalidArgument("boundary knots must enclose the interior knots");
    }
    return kv;
}

}  // namespace

KnotVector make_bspline_knots(std::span<const double> xs, int order) {
    if (order < 1) throw InvalidArgument("B-spline order must be >= 1");
    if (xs.size() < static_cast<std::size_t>(order) + 1) {
        throw InvalidArgument("too few samples for B-spline order " + std::to_string(order));
    }
    const std::size_t m = xs.size() - 1;
    const std::size_t last = std::min(m - static_cast<std::size_t>(order) + 2, m);
    return knots_with_ends(xs, order, xs.front(), xs[last]);
}

KnotVector make_bspline_knots(std::span<const double> xs, int order, const Domain& boundary) {
    return knots_with_ends(xs, order, boundary.lo(), boundary.hi());
}

double bspline_eval(std::size_t i, const KnotVector& kv, double x) {
    const auto& t = kv.knots;
    const auto k = static_cast<std::size_t>(kv.order);
    if (kv.order < 1 || i >= kv.basis_count()) throw InvalidArgument("bspline_eval: index out of range");
    if (x < t[i] || x > t[i + k]) return 0.0;

    const double t_last = t.back();
    double vals[64] = {};
    std::vector<double> heap;
    double* n = vals;
    if (k > 64) {
        heap.resize(k);
        n = heap.data();
    }
    for (std::size_t j = 0; j < k; ++j) {
        const double a = t[i + j];
        const double b = t[i + j + 1];
        const bool inside = a <= x && x < b;
        const bool right_end = x == t_last && a < b && b == t_last;
        n[j] = (inside || right_end) ? 1.0 : 0.0;
    }
    for (std::size_t d = 2; d <= k; ++d) {
        for (std::size_t j = 0; j + d <= k; ++j) {
            const std::size_t g = i + j;
            const double left_den = t[g + d - 1] - t[g];
            const double right_den = t[g + d] - t[g + 1];
            const double left = left_den != 0.0 ? (x - t[g]) * n[j] / left_den : 0.0;
            const double right = right_den != 0.0 ? (t[g + d] - x) * n[j + 1] / right_den : 0.0;
            n[j] = left + right;
        }
    }
    return n[0];
}

double bspline_area(std::size_t i, const KnotVector& kv) {
    if (kv.order < 1 || i >= kv.basis_count()) throw InvalidArgument("bspline_area: index out of range");
    return (kv.knots[i + static_cast<std::size_t>(kv.order)] - kv.knots[i]) / kv.order;
}

Domain extended_range(std::span<const double> xs, double fraction) {
    if (xs.empty()) throw InvalidArgument("extended_range: no samples");
    if (!(fraction >= 0.0)) throw InvalidArgument("extension fraction must be >= 0");
    require_sorted(xs);
    const double w = xs.back() - xs.front();
    if (!(w > 0.0)) throw DataError("degenerate basis: all samples are equal");
    return {xs.front() - fraction * w, xs.back() + fraction * w};
}

WindowBasis make_bspline_basis(std::span<const double> xs, int order, double extension_fraction, double area_floor) {
    if (order < 1) throw InvalidArgument("B-spline order must be >= 1");
    if (xs.size() < static_cast<std::size_t>(order) + 1) {
        throw InvalidArgument("too few samples for B-spline order " + std::to_string(order) + ": need at least " +
                              std::to_string(order + 1));
    }
    const Domain domain = extended_range(xs, extension_fraction);
    KnotVector kv = make_bspline_knots(xs, order, domain);

    const double floor = area_floor * domain.width();
    std::vector<Window> windows;
    for (std::size_t i = 0; i < kv.basis_count(); ++i) {
        const double area = bspline_area(i, kv);
        if (area >= floor && area > 0.0) windows.push_back({0, i, area, 1.0 / area});
    }
    if (windows.empty()) throw DataError("degenerate basis: every B-spline window has zero area");

    std::vector<BasisPiece> pieces{{domain, order, std::move(kv)}};
    return {Family::BSpline, std::move(pieces), std::move(windows)};
}

std::vector<std::size_t> coverage_check(const WindowBasis& basis, std::span<const double> samples) {
    std::vector<std::size_t> uncovered;
    std::vector<double> phi(basis.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        basis.eval_all(samples[j], phi);
        if (std::none_of(phi.begin(), phi.end(), [](double v) { return v > 0.0; })) uncovered.push_back(j);
    }
    return uncovered;
}

}  // namespace superdens
