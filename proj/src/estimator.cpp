#include "superdens/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace superdens {

namespace {
constexpr double kGapExtensionShare = 0.25;
}  // namespace

DensityEstimate::DensityEstimate(Method method, WindowBasis basis, std::vector<double> coefficients,
                                 FitReport report, SolverConfig config)
    : method_(method),
      basis_(std::move(basis)),
      coefficients_(std::move(coefficients)),
      report_(std::move(report)),
      config_(std::move(config)) {
    if (coefficients_.size() != basis_.size()) throw InvalidArgument("one coefficient per window is required");
    for (double c : coefficients_) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("coefficients must be finite and nonnegative");
    }
}

double DensityEstimate::pdf(double x) const {
    const auto& pieces = basis_.pieces();
    if (std::none_of(pieces.begin(), pieces.end(), [x](const BasisPiece& p) { return p.domain.contains(x); })) {
        return 0.0;
    }
    thread_local std::vector<double> phi;
    phi.resize(basis_.size());
    basis_.eval_all(x, phi);
    double f = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) f += coefficients_[i] * phi[i];
    return f;
}

double DensityEstimate::mass() const { return std::accumulate(coefficients_.begin(), coefficients_.end(), 0.0); }

std::vector<double> DensityEstimate::piece_masses() const {
    std::vector<double> masses(basis_.pieces().size(), 0.0);
    for (std::size_t i = 0; i < coefficients_.size(); ++i) masses[basis_.windows()[i].piece] += coefficients_[i];
    return masses;
}

WindowBasis build_basis(std::span<const double> xs, Method method, const SolverConfig& config) {
    config.validate();
    if (xs.size() < 2) throw InvalidArgument("fit needs at least 2 samples");
    switch (method) {
        case Method::Bezier:
            return make_bezier_basis(extended_range(xs, config.extension_for(method)), config.bezier_degree);
        case Method::BSpline:
            return make_bspline_basis(xs, config.bspline_order, config.extension_for(method), config.area_floor);
        case Method::PiecewiseBezier: {
            const auto part = partition(xs, config.min_piece_size_for(xs.size()), config.min_gap_ratio);
            // Each piece is extended like the single-piece range, but by no more
            // than a quarter of a neighbouring removed gap.
            std::vector<Domain> domains;
            const auto& pieces = part.pieces;
            for (std::size_t p = 0; p < pieces.size(); ++p) {
                const auto& piece = pieces[p];
                if (!(piece.lo < piece.hi)) {
                    throw DataError("degenerate basis: partition piece [" + std::to_string(piece.lo) + ", " +
                                    std::to_string(piece.hi) + "] has zero width");
                }
                const double ext = config.extension_for(method) * (piece.hi - piece.lo);
                const double below = p > 0 ? std::min(ext, kGapExtensionShare * (piece.lo - pieces[p - 1].hi)) : ext;
                const double above =
                    p + 1 < pieces.size() ? std::min(ext, kGapExtensionShare * (pieces[p + 1].lo - piece.hi)) : ext;
                domains.emplace_back(piece.lo - below, piece.hi + above);
            }
            return make_piecewise_bezier_basis(domains, config.bezier_degree);
        }
    }
    throw InvalidArgument("unknown method");
}

DensityEstimate fit(std::span<const double> xs, Method method, const SolverConfig& config) {
    WindowBasis basis = build_basis(xs, method, config);
    FitResult result = outer_fit(basis, xs, config);
    return {method, std::move(basis), std::move(result.coefficients), std::move(result.report), config};
}

LogLikelihood log_likelihood(const Pdf& pdf, std::span<const double> xs) {
    LogLikelihood out;
    for (double x : xs) {
        const double f = pdf(x);
        if (f > 0.0) {
            out.value += std::log(f);
        } else {
            ++out.zero_density_samples;
        }
    }
    if (out.zero_density_samples > 0) out.value = -std::numeric_limits<double>::infinity();
    return out;
}

LogLikelihood log_likelihood(const DensityEstimate& est, std::span<const double> xs) {
    return log_likelihood([&](double x) { return est.pdf(x); }, xs);
}

double quadrature(const Pdf& f, const Domain& domain, std::size_t panels) {
    if (panels < 2 || panels % 2 != 0) throw InvalidArgument("quadrature: panels must be even and >= 2");
    const double h = domain.width() / static_cast<double>(panels);
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < panels; ++i) {
        const double x = domain.lo() + static_cast<double>(i) * h;
        (i % 2 ? odd : even) += f(x);
    }
    return h / 3.0 * (f(domain.lo()) + 4.0 * odd + 2.0 * even + f(domain.hi()));
}

double integrate(const DensityEstimate& est, std::size_t panels) {
    double total = 0.0;
    for (const auto& piece : est.basis().pieces()) {
        total += quadrature([&](double x) { return est.pdf(x); }, piece.domain, panels);
    }
    return total;
}

double l1_distance(const Pdf& f, const Pdf& g, const Domain& domain, std::size_t panels) {
    return quadrature([&](double x) { return std::abs(f(x) - g(x)); }, domain, panels);
}

double l1_error(const DensityEstimate& est, const Pdf& truth, const Domain& domain, std::size_t panels) {
    return l1_distance([&](double x) { return est.pdf(x); }, truth, domain, panels);
}

KlSanity kl_sanity(const Pdf& f, const Pdf& g, std::span<const double> draws) {
    KlSanity out;
    for (double x : draws) {
        const double fx = f(x);
        const double gx = g(x);
        if (!(fx > 0.0 && gx > 0.0)) continue;
        out.mean_log_f += std::log(fx);
        out.mean_log_g += std::log(gx);
        ++out.used;
    }
    if (out.used > 0) {
        out.mean_log_f /= static_cast<double>(out.used);
        out.mean_log_g /= static_cast<double>(out.used);
    }
    out.separation = out.mean_log_f - out.mean_log_g;
    return out;
}

KlSanity kl_sanity(const Pdf& f, const Pdf& g, const std::function<SampleSet(std::size_t)>& sampler, std::size_t m) {
    const SampleSet draws = sampler(m);
    return kl_sanity(f, g, draws.values());
}

}  // namespace superdens
