#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "superdens/common.hpp"
#include "superdens/domain_partition.hpp"
#include "superdens/likelihood_solver.hpp"
#include "superdens/sample_lab.hpp"
#include "superdens/window_basis.hpp"

namespace superdens {

/// Fitted density f(x) = sum_i c_i phi_i(x) over unit-area windows.
class DensityEstimate {
public:
    DensityEstimate(Method method, WindowBasis basis, std::vector<double> coefficients, FitReport report,
                    SolverConfig config);

    Method method() const { return method_; }
    const WindowBasis& basis() const { return basis_; }
    const std::vector<double>& coefficients() const { return coefficients_; }
    const FitReport& report() const { return report_; }
    const SolverConfig& config() const { return config_; }

    /// Zero outside every basis piece.
    double pdf(double x) const;

    /// sum_i c_i, which is the total mass of the estimate.
    double mass() const;

    /// Coefficient mass carried by each basis piece.
    std::vector<double> piece_masses() const;

private:
    Method method_;
    WindowBasis basis_;
    std::vector<double> coefficients_;
    FitReport report_;
    SolverConfig config_;
};

/// Builds the basis for `method`, then runs the outer/inner solver.
///   Bezier          one degree-d basis on the extended sample range
///   BSpline         order-k windows with knots at the samples
///   PiecewiseBezier one degree-d basis per partition piece, fitted jointly
DensityEstimate fit(std::span<const double> sorted_samples, Method method, const SolverConfig& config);

/// The basis fit() would use, without solving.
WindowBasis build_basis(std::span<const double> sorted_samples, Method method, const SolverConfig& config);

struct LogLikelihood {
    double value = 0.0;                ///< -inf when some sample has zero density
    std::size_t zero_density_samples = 0;
    bool finite() const { return zero_density_samples == 0; }
};

LogLikelihood log_likelihood(const Pdf& pdf, std::span<const double> samples);
LogLikelihood log_likelihood(const DensityEstimate& est, std::span<const double> samples);

/// Composite Simpson rule; panels must be even and >= 2.
double quadrature(const Pdf& f, const Domain& domain, std::size_t panels);

/// Integral of the estimate, piece by piece.
double integrate(const DensityEstimate& est, std::size_t panels = 1 << 14);

/// Integral of |f - g| over domain.
double l1_distance(const Pdf& f, const Pdf& g, const Domain& domain, std::size_t panels = 1 << 14);
double l1_error(const DensityEstimate& est, const Pdf& truth, const Domain& domain, std::size_t panels = 1 << 14);

struct KlSanity {
    double mean_log_f = 0.0;
    double mean_log_g = 0.0;
    double separation = 0.0;  ///< mean_log_f - mean_log_g
    std::size_t used = 0;     ///< draws where f and g are both positive
};

/// Empirical (1/m) sum log f(X) vs (1/m) sum log g(X) over draws X ~ f.
/// Positive separation is expected for large m; small m may flip the sign.
KlSanity kl_sanity(const Pdf& f, const Pdf& g, std::span<const double> draws_from_f);
KlSanity kl_sanity(const Pdf& f, const Pdf& g, const std::function<SampleSet(std::size_t)>& sampler, std::size_t m);

}  // namespace superdens
