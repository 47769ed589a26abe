#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superdens/common.hpp"
#include "superdens/kernels.hpp"
#include "superdens/window_basis.hpp"

namespace superdens {

/// Solution state of the system alpha_k * sum_j D_kj alpha_j = 1, k = 1..m.
struct AlphaState {
    std::vector<double> alpha;
    std::vector<double> residuals;  ///< E_k = |alpha_k (D alpha)_k - 1|
    double total_residual = 0.0;    ///< E = sum_k E_k
    std::size_t updates = 0;
    bool converged = false;
};

struct ResidualSummary {
    std::vector<double> residuals;
    double total = 0.0;
};

enum class Termination { EpsilonTest, Budget };

const char* to_string(Termination t);

struct FitReport {
    std::size_t outer_iterations = 0;
    std::size_t inner_updates_total = 0;
    double final_inner_residual = 0.0;
    double final_uv_sum = 0.0;
    std::vector<double> uv_trace;
    std::vector<double> inner_residual_trace;
    std::vector<double> loglik_trace;
    Termination terminated_by = Termination::Budget;
};

/// Inner non-convergence inside outer_fit, with the report up to the failure.
class SolverFailure : public ConvergenceError {
public:
    SolverFailure(const std::string& what, FitReport report);
    const FitReport& report() const { return report_; }

private:
    FitReport report_;
};

struct FitResult {
    std::vector<double> coefficients;  ///< c_i = u_i v_i
    std::vector<double> u;
    std::vector<double> v;
    FitReport report;
};

struct InnerOptions {
    double delta = 1e-9;
    std::size_t max_updates = 1'000'000;
    Exec exec = Exec::Parallel;
};

/// Called after each coordinate update with the updated index and the full alpha.
using InnerObserver = std::function<void(std::size_t k, std::span<const double> alpha)>;

/// b(i, j) = v_i phi_i(x_j). Throws DataError when some sample column is all zero.
DenseMatrix build_design(const WindowBasis& basis, std::span<const double> v, std::span<const double> samples,
                         Exec exec = Exec::Parallel);

/// D(i, j) = (r/m) b_i . b_j over the window components.
DenseMatrix build_gram(const DenseMatrix& b, double r, Exec exec = Exec::Parallel);

ResidualSummary compute_residual(const DenseMatrix& d, std::span<const double> alpha);

/// Greedy coordinate solver: repeatedly zeroes the largest residual E_k by
/// taking the positive root of D_kk a^2 + s a - 1 = 0 with
/// s = sum_{j != k} D_kj alpha_j. Starts from alpha = sqrt(1 / (max(D) m))
/// unless `warm` is given. Returns with converged = false when the update
/// budget runs out.
AlphaState inner_solve(const DenseMatrix& d, const InnerOptions& options, std::span<const double> warm = {},
                       const InnerObserver& observer = {});

/// u_k = (r/m) sum_j alpha_j b(k, j).
std::vector<double> recover_u(std::span<const double> alpha, const DenseMatrix& b, double r);

/// v'_i = theta sqrt(u_i v_i) with theta chosen so that sum v'_i^2 = r.
std::vector<double> rescale_v(std::span<const double> u, std::span<const double> v, double r);

/// Outer alternation: v starts at sqrt(r/n); each round solves for u on the
/// sphere sum u^2 = r, stops once sum u v + eps >= r, otherwise rescales v
/// (see Acceleration). Every inner solve counts as one outer iteration.
/// Throws ConvergenceError if an inner solve exhausts its budget and
/// DataError if the basis does not cover the samples.
FitResult outer_fit(const WindowBasis& basis, std::span<const double> samples, const SolverConfig& config);

}  // namespace superdens
