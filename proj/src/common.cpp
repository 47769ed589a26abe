#include "superdens/common.hpp"

#include <algorithm>
#include <cmath>

#include "superdens/domain_partition.hpp"

namespace superdens {

const char* to_string(Method m) {
    switch (m) {
        case Method::Bezier: return "bezier";
        case Method::BSpline: return "bspline";
        case Method::PiecewiseBezier: return "pbezier";
    }
    return "bezier";
}

Method method_from_string(const std::string& name) {
    if (name == "bezier") return Method::Bezier;
    if (name == "bspline") return Method::BSpline;
    if (name == "pbezier") return Method::PiecewiseBezier;
    throw InvalidArgument("unknown method '" + name + "' (expected bezier, bspline or pbezier)");
}

const char* to_string(Acceleration a) { return a == Acceleration::None ? "none" : "squarem"; }

Acceleration acceleration_from_string(const std::string& name) {
    if (name == "none") return Acceleration::None;
    if (name == "squarem") return Acceleration::Squarem;
    throw InvalidArgument("unknown acceleration '" + name + "' (expected none or squarem)");
}

std::size_t SolverConfig::min_piece_size_for(std::size_t sample_count) const {
    return min_piece_size ? *min_piece_size : default_min_piece_size(sample_count);
}

double SolverConfig::extension_for(Method method) const {
    if (extension_fraction) return *extension_fraction;
    return method == Method::BSpline ? 0.05 : 0.0;
}

void SolverConfig::validate() const {
    const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(r)) throw InvalidArgument("r must be > 0");
    if (!positive(eps_outer)) throw InvalidArgument("eps must be > 0");
    if (delta_inner && !positive(*delta_inner)) throw InvalidArgument("delta must be > 0");
    if (max_outer < 1) throw InvalidArgument("max_outer must be >= 1");
    if (max_inner_updates < 1) throw InvalidArgument("max_inner_updates must be >= 1");
    if (min_piece_size && *min_piece_size < 1) throw InvalidArgument("min_piece_size must be >= 1");
    if (!(min_gap_ratio >= 0.0) || !std::isfinite(min_gap_ratio)) throw InvalidArgument("min_gap_ratio must be >= 0");
    if (!(area_floor >= 0.0)) throw InvalidArgument("area_floor must be >= 0");
    if (extension_fraction && (!(*extension_fraction >= 0.0) || !std::isfinite(*extension_fraction))) {
        throw InvalidArgument("extension fraction must be >= 0");
    }
    if (bezier_degree < 1) throw InvalidArgument("Bezier degree must be >= 1");
    if (bspline_order < 1) throw InvalidArgument("B-spline order must be >= 1");
}

}  // namespace superdens
