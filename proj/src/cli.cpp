#include "superdens/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "superdens/cli_io.hpp"

namespace superdens {

namespace {

struct FitFlags {
    std::string method = "bezier";
    std::optional<int> degree;
    std::optional<int> order;
    std::optional<double> r;
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<std::size_t> min_piece;
    std::optional<double> min_gap_ratio;
    std::optional<double> extend;
    std::optional<std::size_t> max_outer;
    std::string accel = "squarem";

    void add_to(CLI::App& app) {
        app.add_option("--method", method, "bezier | bspline | pbezier")->check(CLI::IsMember({"bezier", "bspline", "pbezier"}));
        app.add_option("--degree", degree, "Bezier degree (default 10)");
        app.add_option("--order", order, "B-spline order (default 12)");
        app.add_option("--r", r, "constraint radius (default 1)");
        app.add_option("--eps", eps, "outer tolerance (default 1e-8)");
        app.add_option("--delta", delta, "inner tolerance (default 1e-9 * m)");
        app.add_option("--min-piece", min_piece, "minimum samples per partition piece");
        app.add_option("--min-gap-ratio", min_gap_ratio, "gap / local spacing needed for a cut (default 25)");
        app.add_option("--extend", extend, "endpoint extension fraction (default 0.05 bspline, 0 bezier/pbezier)");
        app.add_option("--max-outer", max_outer, "outer iteration budget (default 200)");
        app.add_option("--accel", accel, "outer schedule: squarem | none")->check(CLI::IsMember({"squarem", "none"}));
    }

    SolverConfig config() const {
        SolverConfig c;
        if (degree) c.bezier_degree = *degree;
        if (order) c.bspline_order = *order;
        if (r) c.r = *r;
        if (eps) c.eps_outer = *eps;
        if (delta) c.delta_inner = *delta;
        c.min_piece_size = min_piece;
        if (min_gap_ratio) c.min_gap_ratio = *min_gap_ratio;
        if (extend) c.extension_fraction = *extend;
        if (max_outer) c.max_outer = *max_outer;
        c.acceleration = acceleration_from_string(accel);
        c.validate();
        return c;
    }
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path);
    return in;
}

// Writes to `path`, or to `fallback` when path is empty or "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(fallback);
        return;
    }
    std::ostringstream buf;
    body(buf);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write " + path);
    file << buf.str();
    if (!file.flush()) throw DataError("error writing " + path);
}

std::vector<double> load_samples(const std::string& path) {
    auto in = open_in(path);
    auto values = read_samples(in);
    if (values.empty()) throw DataError(path + " holds no samples");
    return SampleSet(std::move(values), 0, Source::File).values();
}

void dump_report(std::ostream& err, const FitReport& rep) {
    err << "fit report: outer_iterations=" << rep.outer_iterations << " inner_updates=" << rep.inner_updates_total
        << " final_E=" << format_double(rep.final_inner_residual) << " final_uv=" << format_double(rep.final_uv_sum)
        << " terminated_by=" << to_string(rep.terminated_by) << '\n';
    for (std::size_t k = 0; k < rep.uv_trace.size(); ++k) {
        err << "  k=" << k + 1 << " uv=" << format_double(rep.uv_trace[k])
            << " E=" << format_double(rep.inner_residual_trace[k]) << " loglik=" << format_double(rep.loglik_trace[k])
            << '\n';
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maximum-likelihood density estimation with normalized spline windows", "superdens"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw a reference sample");
    std::string dist;
    std::size_t m = 0;
    std::uint64_t seed = 1;
    std::string out_path;
    sample->add_option("--dist", dist, "exponential | bimodal | trimodal")->required();
    sample->add_option("--m", m, "sample size")->required();
    sample->add_option("--seed", seed, "generator seed (default 1)");
    sample->add_option("--out", out_path, "output file (default stdout)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a density to a sample file");
    std::string in_path;
    std::string model_path;
    FitFlags flags;
    fit_cmd->add_option("--in", in_path, "sample file")->required();
    fit_cmd->add_option("--out", model_path, "model file")->required();
    flags.add_to(*fit_cmd);

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "tabulate a fitted density");
    std::string truth;
    std::size_t rows = 512;
    std::optional<double> lo;
    std::optional<double> hi;
    std::string plot_model;
    std::string plot_out;
    plot->add_option("--model", plot_model, "model file")->required();
    plot->add_option("--truth", truth, "add the exact density of this distribution");
    plot->add_option("--rows", rows, "grid rows (default 512)");
    plot->add_option("--lo", lo, "grid start (default: model domain)");
    plot->add_option("--hi", hi, "grid end (default: model domain)");
    plot->add_option("--out", plot_out, "output file (default stdout)");

    // partition
    auto* part_cmd = app.add_subcommand("partition", "split a sample at large gaps");
    std::string part_in;
    std::string part_out;
    std::optional<std::size_t> part_min;
    double part_ratio = kDefaultMinGapRatio;
    part_cmd->add_option("--in", part_in, "sample file")->required();
    part_cmd->add_option("--min-piece", part_min, "minimum samples per piece (default max(30, ceil(m/6)))");
    part_cmd->add_option("--min-gap-ratio", part_ratio, "gap / local spacing needed for a cut (default 25)");
    part_cmd->add_option("--out", part_out, "output file (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "fit many generated samples and tabulate errors");
    std::string bench_dist;
    std::vector<std::size_t> sizes;
    std::size_t n_seeds = 20;
    std::uint64_t first_seed = 1;
    std::string bench_out;
    FitFlags bench_flags;
    bench->add_option("--dist", bench_dist, "exponential | bimodal | trimodal")->required();
    bench->add_option("--m", sizes, "sample sizes, comma separated")->required()->delimiter(',');
    bench->add_option("--seeds", n_seeds, "number of seeds per size (default 20)");
    bench->add_option("--first-seed", first_seed, "first seed (default 1)");
    bench->add_option("--out", bench_out, "output file (default stdout)");
    bench_flags.add_to(*bench);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        for (auto* sub : app.get_subcommands()) err << sub->help();
        return kExitUsage;
    }

    std::optional<FitReport> failed_report;
    try {
        if (*sample) {
            if (m < 1) throw InvalidArgument("--m must be >= 1");
            const Source src = source_from_string(dist);
            if (src == Source::File) throw InvalidArgument("--dist must name a generated distribution");
            const SampleSet s = generate(src, m, seed);
            emit(out_path, out, [&](std::ostream& o) { write_samples(o, s.values()); });
        } else if (*fit_cmd) {
            const SolverConfig config = flags.config();
            const Method method = method_from_string(flags.method);
            const auto xs = load_samples(in_path);
            try {
                const DensityEstimate est = fit(xs, method, config);
                emit(model_path, out, [&](std::ostream& o) { write_model(o, est); });
                const auto& rep = est.report();
                out << to_string(method) << "\twindows=" << est.basis().size() << "\tpieces=" << est.basis().pieces().size()
                    << "\touter=" << rep.outer_iterations << "\tuv=" << format_double(rep.final_uv_sum)
                    << "\tloglik=" << format_double(log_likelihood(est, xs).value) << '\n';
                if (rep.terminated_by != Termination::EpsilonTest) {
                    err << "warning: outer budget of " << config.max_outer
                        << " iterations exhausted before the epsilon test passed\n";
                }
            } catch (const SolverFailure& e) {
                failed_report = e.report();
                throw;
            }
        } else if (*plot) {
            std::optional<Source> truth_src;
            if (!truth.empty()) {
                truth_src = source_from_string(truth);
                if (*truth_src == Source::File) throw InvalidArgument("--truth must name a generated distribution");
            }
            auto in = open_in(plot_model);
            const DensityEstimate est = read_model(in);
            PlotOptions opt;
            opt.rows = rows;
            opt.truth = truth_src;
            if (lo || hi) opt.domain = Domain(lo.value_or(est.basis().hull().lo()), hi.value_or(est.basis().hull().hi()));
            emit(plot_out, out, [&](std::ostream& o) { write_plot_grid(o, est, opt); });
        } else if (*part_cmd) {
            const auto xs = load_samples(part_in);
            const std::size_t min_piece = part_min ? *part_min : default_min_piece_size(xs.size());
            const DomainPartition p = partition(xs, min_piece, part_ratio);
            emit(part_out, out, [&](std::ostream& o) { write_partition(o, p); });
        } else if (*bench) {
            BenchOptions opt;
            opt.source = source_from_string(bench_dist);
            opt.method = method_from_string(bench_flags.method);
            opt.sample_sizes = sizes;
            if (n_seeds < 1) throw InvalidArgument("--seeds must be >= 1");
            for (std::size_t i = 0; i < n_seeds; ++i) opt.seeds.push_back(first_seed + i);
            opt.config = bench_flags.config();
            for (std::size_t size : sizes) {
                if (size < 2) throw InvalidArgument("every --m must be >= 2");
            }
            const auto result = run_bench(opt);
            emit(bench_out, out, [&](std::ostream& o) { write_bench(o, result); });
        }
    } catch (const InvalidArgument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const ConvergenceError& e) {
        err << "solver error: " << e.what() << '\n';
        if (failed_report) dump_report(err, *failed_report);
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace superdens
