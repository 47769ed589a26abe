#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace superdens {

/// Bad input or violated precondition. Maps to the CLI's usage exit code.
using InvalidArgument = std::invalid_argument;

/// The data cannot support the requested fit (degenerate basis, uncovered
/// samples, unreadable files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iteration ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed interval [lo, hi] with lo < hi.
class Domain {
public:
    Domain() = default;
    Domain(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo < hi)) {
            throw InvalidArgument("degenerate domain: lo must be < hi (got [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "])");
        }
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }

    friend bool operator==(const Domain&, const Domain&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
};

enum class Method { Bezier, BSpline, PiecewiseBezier };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

/// Which kernel implementation the solver drives. Both produce bitwise
/// identical results; see kernels.hpp.
enum class Exec { Serial, Parallel };

/// Outer-loop schedule. None applies the geometric-mean rescale every
/// iteration; Squarem extrapolates along two consecutive rescale steps in
/// log-v space and falls back to the plain step when the likelihood drops.
enum class Acceleration { None, Squarem };

const char* to_string(Acceleration a);
Acceleration acceleration_from_string(const std::string& name);

struct SolverConfig {
    double r = 1.0;
    double eps_outer = 1e-8;
    /// Inner tolerance. Unset means 1e-9 * m.
    std::optional<double> delta_inner;
    std::size_t max_outer = 200;
    std::size_t max_inner_updates = 1'000'000;
    /// Unset means max(30, ceil(sample_count / 6)).
    std::optional<std::size_t> min_piece_size;
    /// A gap is cut only if it exceeds this multiple of the local spacing.
    double min_gap_ratio = 25.0;
    /// Windows whose raw area is below area_floor * domain width are dropped.
    double area_floor = 1e-12;
    /// Endpoint extension as a fraction of the sample range. Unset means
    /// 0.05 for B-splines and 0 for the Bezier families.
    std::optional<double> extension_fraction;
    Acceleration acceleration = Acceleration::Squarem;
    int bezier_degree = 10;
    int bspline_order = 12;
    Exec exec = Exec::Parallel;

    double delta_for(std::size_t m) const { return delta_inner ? *delta_inner : 1e-9 * static_cast<double>(m); }
    std::size_t min_piece_size_for(std::size_t sample_count) const;
    double extension_for(Method method) const;

    /// Throws InvalidArgument when a tolerance or budget is out of range.
    void validate() const;
};

}  // namespace superdens
