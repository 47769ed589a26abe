#include "superdens/likelihood_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace superdens {

const char* to_string(Termination t) { return t == Termination::EpsilonTest ? "epsilon_test" : "budget"; }

SolverFailure::SolverFailure(const std::string& what, FitReport report)
    : ConvergenceError(what), report_(std::move(report)) {}

DenseMatrix build_design(const WindowBasis& basis, std::span<const double> v, std::span<const double> samples,
                         Exec exec) {
    DenseMatrix b;
    kernels::design(exec, basis, v, samples, b);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        bool positive = false;
        for (std::size_t i = 0; i < b.rows() && !positive; ++i) positive = b(i, j) > 0.0;
        if (!positive) {
            std::ostringstream msg;
            msg << "design matrix column " << j << " (x = " << samples[j]
                << ") is zero: no window with positive weight covers this sample";
            throw DataError(msg.str());
        }
    }
    return b;
}

DenseMatrix build_gram(const DenseMatrix& b, double r, Exec exec) {
    if (b.cols() == 0) throw InvalidArgument("build_gram: no samples");
    DenseMatrix d;
    kernels::gram(exec, b, r / static_cast<double>(b.cols()), d);
    return d;
}

ResidualSummary compute_residual(const DenseMatrix& d, std::span<const double> alpha) {
    if (d.rows() != d.cols() || alpha.size() != d.rows()) throw InvalidArgument("compute_residual: size mismatch");
    ResidualSummary out;
    out.residuals.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const auto row = d.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < alpha.size(); ++j) s += row[j] * alpha[j];
        out.residuals[i] = std::abs(alpha[i] * s - 1.0);
        out.total += out.residuals[i];
    }
    return out;
}

namespace {

// Positive root of dkk a^2 + s a - 1 = 0 for s >= 0, written as
// 2 / (s + sqrt(s^2 + 4 dkk)) to avoid cancellation when s^2 >> dkk.
double coordinate_root(const DenseMatrix& d, std::size_t k, std::span<const double> alpha) {
    const auto row = d.row(k);
    long double s = 0.0L;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j != k) s += static_cast<long double>(row[j]) * alpha[j];
    }
    const long double dkk = row[k];
    return static_cast<double>(2.0L / (s + std::sqrt(s * s + 4.0L * dkk)));
}

}  // namespace

AlphaState inner_solve(const DenseMatrix& d, const InnerOptions& opt, std::span<const double> warm,
                       const InnerObserver& observer) {
    const std::size_t m = d.rows();
    if (m == 0 || d.cols() != m) throw InvalidArgument("inner_solve: D must be square and non-empty");
    if (!(opt.delta > 0.0)) throw InvalidArgument("inner_solve: delta must be > 0");

    double dmax = 0.0;
    for (double x : d.data()) dmax = std::max(dmax, x);
    for (std::size_t k = 0; k < m; ++k) {
        if (!(d(k, k) > 0.0)) throw InvalidArgument("inner_solve: D has a zero diagonal entry at " + std::to_string(k));
    }

    AlphaState st;
    if (!warm.empty()) {
        if (warm.size() != m) throw InvalidArgument("inner_solve: warm start has wrong length");
        if (!std::all_of(warm.begin(), warm.end(), [](double a) { return a > 0.0; })) {
            throw InvalidArgument("inner_solve: warm start must be positive");
        }
        st.alpha.assign(warm.begin(), warm.end());
    } else {
        st.alpha.assign(m, std::sqrt(1.0 / (dmax * static_cast<double>(m))));
    }

    std::vector<double> s(m);
    st.residuals.assign(m, 0.0);
    const auto refresh = [&] {
        kernels::matvec(opt.exec, d, st.alpha, s);
        return kernels::sweep(opt.exec, d, 0, 0.0, st.alpha, s, st.residuals);
    };

    // The running (D alpha) is updated incrementally; resync it periodically
    // and always before accepting convergence.
    const std::size_t resync_every = std::max<std::size_t>(m, 64);
    auto sw = refresh();
    bool fresh = true;
    std::size_t since_resync = 0;
    for (;;) {
        if (sw.total <= opt.delta) {
            if (fresh) {
                st.converged = true;
                break;
            }
            sw = refresh();
            fresh = true;
            since_resync = 0;
            continue;
        }
        if (st.updates >= opt.max_updates) {
            if (!fresh) sw = refresh();
            st.converged = sw.total <= opt.delta;
            break;
        }

        const std::size_t k = sw.argmax;
        const double next = coordinate_root(d, k, st.alpha);
        const double delta = next - st.alpha[k];
        st.alpha[k] = next;
        ++st.updates;
        if (observer) observer(k, st.alpha);

        if (++since_resync >= resync_every) {
            sw = refresh();
            fresh = true;
            since_resync = 0;
        } else {
            sw = kernels::sweep(opt.exec, d, k, delta, st.alpha, s, st.residuals);
            fresh = false;
        }
    }
    st.total_residual = sw.total;
    return st;
}

std::vector<double> recover_u(std::span<const double> alpha, const DenseMatrix& b, double r) {
    if (alpha.size() != b.cols()) throw InvalidArgument("recover_u: alpha length must equal the sample count");
    const double scale = r / static_cast<double>(b.cols());
    std::vector<double> u(b.rows());
    for (std::size_t k = 0; k < b.rows(); ++k) {
        const auto row = b.row(k);
        double sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) sum += alpha[j] * row[j];
        u[k] = scale * sum;
    }
    return u;
}

std::vector<double> rescale_v(std::span<const double> u, std::span<const double> v, double r) {
    if (u.size() != v.size()) throw InvalidArgument("rescale_v: u and v differ in length");
    double uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) throw InvalidArgument("rescale_v: u and v must be nonnegative");
        uv += u[i] * v[i];
    }
    if (!(uv > 0.0)) throw DataError("rescale_v: sum u_i v_i is zero, all mass lost");
    const double theta = std::sqrt(r / uv);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = theta * std::sqrt(u[i] * v[i]);
    return out;
}

namespace {

struct Evaluation {
    std::vector<double> u;
    double uv = 0.0;
    double loglik = 0.0;
};

constexpr double kInitialStepMax = 64.0;
constexpr double kStepGrowth = 8.0;
constexpr double kStepShrink = 2.0;

struct Extrapolation {
    std::vector<double> v;
    bool hit_step_limit = false;
};

// SQUAREM-type step on x = log v through three consecutive iterates, taken
// per component: x' = x0 - 2 s r + s^2 d with s = -|r/d| clamped to
// [-step_max, -1]. Components that are zero in any iterate keep their latest
// value. Slowly decaying components get long steps while converged ones stay put.
std::optional<Extrapolation> extrapolate(const std::vector<double>& v0, const std::vector<double>& v1,
                                         const std::vector<double>& v2, double r, double step_max) {
    const std::size_t n = v0.size();
    Extrapolation out;
    out.v.resize(n);
    double norm2 = 0.0;
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (v0[i] > 0.0 && v1[i] > 0.0 && v2[i] > 0.0) {
            const double x0 = std::log(v0[i]);
            const double x1 = std::log(v1[i]);
            const double x2 = std::log(v2[i]);
            const double rr = x1 - x0;
            const double dd = x2 - 2.0 * x1 + x0;
            double step = dd != 0.0 ? -std::abs(rr / dd) : -step_max;
            if (step <= -step_max) {
                step = -step_max;
                out.hit_step_limit = true;
            }
            step = std::min(step, -1.0);
            moved = moved || rr != 0.0;
            out.v[i] = std::exp(x0 - 2.0 * step * rr + step * step * dd);
        } else {
            out.v[i] = v2[i];
        }
        norm2 += out.v[i] * out.v[i];
    }
    if (!moved || !(norm2 > 0.0) || !std::isfinite(norm2)) return std::nullopt;
    const double theta = std::sqrt(r / norm2);
    for (double& x : out.v) x *= theta;
    return out;
}

}  // namespace

FitResult outer_fit(const WindowBasis& basis, std::span<const double> samples, const SolverConfig& config) {
    config.validate();
    const std::size_t m = samples.size();
    const std::size_t n = basis.size();
    if (m == 0) throw InvalidArgument("outer_fit: no samples");

    if (const auto uncovered = coverage_check(basis, samples); !uncovered.empty()) {
        std::ostringstream msg;
        msg << "coverage failure: " << uncovered.size() << " sample(s) lie where every window vanishes (first x = "
            << samples[uncovered.front()] << ")";
        throw DataError(msg.str());
    }

    const double r = config.r;
    const InnerOptions inner_opt{config.delta_for(m), config.max_inner_updates, config.exec};

    FitResult out;
    FitReport& rep = out.report;
    std::vector<double> alpha;

    // One outer iteration: solve for u given v and record the traces.
    const auto evaluate = [&](const std::vector<double>& v) {
        const DenseMatrix b = build_design(basis, v, samples, config.exec);
        const DenseMatrix d = build_gram(b, r, config.exec);
        AlphaState inner = inner_solve(d, inner_opt, alpha);
        ++rep.outer_iterations;
        rep.inner_updates_total += inner.updates;
        rep.final_inner_residual = inner.total_residual;
        if (!inner.converged) {
            std::ostringstream msg;
            msg << "inner solver did not reach E <= " << inner_opt.delta << " within " << inner_opt.max_updates
                << " updates at outer iteration " << rep.outer_iterations << " (final E = " << inner.total_residual
                << ")";
            throw SolverFailure(msg.str(), rep);
        }

        Evaluation e;
        e.u = recover_u(inner.alpha, b, r);
        // Put u exactly on the sphere sum u^2 = r; the correction is O(E/m).
        const double norm2 = std::inner_product(e.u.begin(), e.u.end(), e.u.begin(), 0.0);
        const double fix = std::sqrt(r / norm2);
        for (double& ui : e.u) ui *= fix;

        e.uv = std::inner_product(e.u.begin(), e.u.end(), v.begin(), 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            double f = 0.0;
            for (std::size_t i = 0; i < n; ++i) f += e.u[i] * b(i, j);
            e.loglik += std::log(f);
        }
        rep.uv_trace.push_back(e.uv);
        rep.inner_residual_trace.push_back(inner.total_residual);
        rep.loglik_trace.push_back(e.loglik);
        rep.final_uv_sum = e.uv;
        alpha = std::move(inner.alpha);
        return e;
    };
    const auto done = [&](const Evaluation& e) { return e.uv + config.eps_outer >= r; };
    const auto budget_left = [&] { return rep.outer_iterations < config.max_outer; };

    std::vector<double> v(n, std::sqrt(r / static_cast<double>(n)));
    Evaluation e = evaluate(v);
    double step_max = kInitialStepMax;
    while (!done(e) && budget_left()) {
        std::vector<double> v1 = rescale_v(e.u, v, r);
        Evaluation e1 = evaluate(v1);
        if (config.acceleration == Acceleration::None || done(e1) || !budget_left()) {
            v = std::move(v1);
            e = std::move(e1);
            continue;
        }

        std::vector<double> v2 = rescale_v(e1.u, v1, r);
        auto jump = extrapolate(v, v1, v2, r, step_max);
        if (jump) {
            Evaluation ej = evaluate(jump->v);
            if (ej.loglik >= e1.loglik) {
                if (jump->hit_step_limit) step_max *= kStepGrowth;
                v = std::move(jump->v);
                e = std::move(ej);
                continue;
            }
            step_max = std::max(1.0, step_max / kStepShrink);
        }
        v = std::move(v2);
        e = evaluate(v);
    }
    rep.terminated_by = done(e) ? Termination::EpsilonTest : Termination::Budget;

    out.coefficients.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.coefficients[i] = e.u[i] * v[i];
    out.u = std::move(e.u);
    out.v = std::move(v);
    return out;
}

}  // namespace superdens
