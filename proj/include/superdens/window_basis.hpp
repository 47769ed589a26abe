#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "superdens/common.hpp"

namespace superdens {

/// Knot sequence t_0 <= ... <= t_{n+k} for n+1 B-splines of order k.
struct KnotVector {
    std::vector<double> knots;
    int order = 1;

    std::size_t basis_count() const { return knots.size() - static_cast<std::size_t>(order); }
};

enum class Family { Bezier, BSpline, PiecewiseBezier };

/// One polynomial family on one interval. Bezier pieces carry a degree,
/// B-spline pieces an order plus their knots.
struct BasisPiece {
    Domain domain;
    int degree_or_order = 0;
    std::optional<KnotVector> knots;
};

/// A retained window: local basis index `local` of piece `piece`, with raw
/// area p and normalizer 1/p.
struct Window {
    std::size_t piece = 0;
    std::size_t local = 0;
    double area = 0.0;
    double normalizer = 0.0;
};

/// Immutable family of unit-area nonnegative window functions.
class WindowBasis {
public:
    /// Validates the description; used both by the builders below and by the
    /// model reader.
    WindowBasis(Family family, std::vector<BasisPiece> pieces, std::vector<Window> windows);

    Family family() const { return family_; }
    const std::vector<BasisPiece>& pieces() const { return pieces_; }
    const std::vector<Window>& windows() const { return windows_; }
    std::size_t size() const { return windows_.size(); }

    /// Smallest interval containing every piece.
    Domain hull() const;

    /// Normalized window value phi_w(x); zero off the window's piece.
    double eval(std::size_t w, double x) const;

    /// Writes phi_w(x) for every window into out (size() entries).
    void eval_all(double x, std::span<double> out) const;

private:
    Family family_;
    std::vector<BasisPiece> pieces_;
    std::vector<Window> windows_;
    // piece -> local index -> window index, or npos when dropped.
    std::vector<std::vector<std::size_t>> local_to_window_;

    double raw_eval(const BasisPiece& piece, std::size_t local, double x) const;
};

/// Binomial coefficient C(n, i) by multiplicative recurrence in floating point.
double binomial(int n, int i);

/// Bernstein polynomial C(n,i) t^i (1-t)^(n-i) for t in [0, 1].
double bezier_eval(int i, int n, double t);

/// n+1 normalized Bernstein windows on `domain`; phi_i has constant normalizer (n+1)/width.
WindowBasis make_bezier_basis(const Domain& domain, int degree);

/// Degree-`degree` Bezier windows on each piece, concatenated into one basis.
WindowBasis make_piecewise_bezier_basis(std::span<const Domain> pieces, int degree);

/// Knots taken from m+1 sorted samples with n = m:
///   t_i = x_0 for i < k, t_i = x_{i-k+1} for k <= i <= n, t_i = x_{n-k+2} for i > n.
/// The last source index is clamped to m (only reachable when k = 1).
KnotVector make_bspline_knots(std::span<const double> sorted_samples, int order);

/// Same interior knots, but the k leading and k trailing knots are replaced by
/// the endpoints of `boundary`.
KnotVector make_bspline_knots(std::span<const double> sorted_samples, int order, const Domain& boundary);

/// Cox-de Boor N_{i,k}(x) with 0/0 = 0. The last nonempty order-1 span is
/// closed on the right so the final knot is covered.
double bspline_eval(std::size_t i, const KnotVector& knots, double x);

/// Integral of N_{i,k}: (t_{i+k} - t_i) / k.
double bspline_area(std::size_t i, const KnotVector& knots);

/// [x_min - f*w, x_max + f*w] with w = x_max - x_min.
Domain extended_range(std::span<const double> sorted_samples, double fraction);

/// Order-k B-spline windows with knots from the samples and boundary knots on
/// the extended range. Windows with area < area_floor * width are dropped.
WindowBasis make_bspline_basis(std::span<const double> sorted_samples, int order, double extension_fraction,
                               double area_floor);

/// Indices j for which every window vanishes at samples[j].
std::vector<std::size_t> coverage_check(const WindowBasis& basis, std::span<const double> samples);

}  // namespace superdens
