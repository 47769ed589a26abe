#include "superdens/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace superdens {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

double parse_double(std::string_view text) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last || first == last) {
        throw DataError("not a number: '" + std::string(text) + "'");
    }
    return x;
}

void write_samples(std::ostream& out, std::span<const double> values) {
    for (double x : values) out << format_double(x) << '\n';
}

std::vector<double> read_samples(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        double x = 0.0;
        try {
            x = parse_double(std::string_view(line).substr(b, e - b + 1));
        } catch (const DataError& err) {
            throw DataError("sample line " + std::to_string(lineno) + ": " + err.what());
        }
        if (!std::isfinite(x)) throw DataError("sample line " + std::to_string(lineno) + ": value is not finite");
        values.push_back(x);
    }
    return values;
}

// ---------------------------------------------------------------------------
// Model file

namespace {

constexpr const char* kFormatName = "superdens-model";
constexpr int kFormatVersion = 1;

// JSON has no inf/nan; those travel as strings.
json num(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

double get_num(const json& j) {
    if (j.is_string()) return parse_double(j.get<std::string>());
    if (!j.is_number()) throw DataError("model file: expected a number");
    return j.get<double>();
}

json nums(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

std::vector<double> get_nums(const json& j) {
    if (!j.is_array()) throw DataError("model file: expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(get_num(x));
    return out;
}

Family family_of(Method m) {
    switch (m) {
        case Method::Bezier: return Family::Bezier;
        case Method::BSpline: return Family::BSpline;
        case Method::PiecewiseBezier: return Family::PiecewiseBezier;
    }
    throw InvalidArgument("unknown method");
}

json config_to_json(const SolverConfig& c) {
    json j;
    j["r"] = num(c.r);
    j["eps_outer"] = num(c.eps_outer);
    j["delta_inner"] = c.delta_inner ? num(*c.delta_inner) : json(nullptr);
    j["max_outer"] = c.max_outer;
    j["max_inner_updates"] = c.max_inner_updates;
    j["min_piece_size"] = c.min_piece_size ? json(*c.min_piece_size) : json(nullptr);
    j["min_gap_ratio"] = num(c.min_gap_ratio);
    j["area_floor"] = num(c.area_floor);
    j["extension_fraction"] = c.extension_fraction ? num(*c.extension_fraction) : json(nullptr);
    j["acceleration"] = to_string(c.acceleration);
    j["bezier_degree"] = c.bezier_degree;
    j["bspline_order"] = c.bspline_order;
    return j;
}

SolverConfig config_from_json(const json& j) {
    SolverConfig c;
    c.r = get_num(j.at("r"));
    c.eps_outer = get_num(j.at("eps_outer"));
    if (!j.at("delta_inner").is_null()) c.delta_inner = get_num(j.at("delta_inner"));
    c.max_outer = j.at("max_outer").get<std::size_t>();
    c.max_inner_updates = j.at("max_inner_updates").get<std::size_t>();
    if (!j.at("min_piece_size").is_null()) c.min_piece_size = j.at("min_piece_size").get<std::size_t>();
    c.min_gap_ratio = get_num(j.at("min_gap_ratio"));
    c.area_floor = get_num(j.at("area_floor"));
    if (!j.at("extension_fraction").is_null()) c.extension_fraction = get_num(j.at("extension_fraction"));
    c.acceleration = acceleration_from_string(j.at("acceleration").get<std::string>());
    c.bezier_degree = j.at("bezier_degree").get<int>();
    c.bspline_order = j.at("bspline_order").get<int>();
    return c;
}

json report_to_json(const FitReport& r) {
    json j;
    j["outer_iterations"] = r.outer_iterations;
    j["inner_updates_total"] = r.inner_updates_total;
    j["final_inner_residual"] = num(r.final_inner_residual);
    j["final_uv_sum"] = num(r.final_uv_sum);
    j["terminated_by"] = to_string(r.terminated_by);
    j["uv_trace"] = nums(r.uv_trace);
    j["inner_residual_trace"] = nums(r.inner_residual_trace);
    j["loglik_trace"] = nums(r.loglik_trace);
    return j;
}

FitReport report_from_json(const json& j) {
    FitReport r;
    r.outer_iterations = j.at("outer_iterations").get<std::size_t>();
    r.inner_updates_total = j.at("inner_updates_total").get<std::size_t>();
    r.final_inner_residual = get_num(j.at("final_inner_residual"));
    r.final_uv_sum = get_num(j.at("final_uv_sum"));
    const auto term = j.at("terminated_by").get<std::string>();
    if (term == "epsilon_test") {
        r.terminated_by = Termination::EpsilonTest;
    } else if (term == "budget") {
        r.terminated_by = Termination::Budget;
    } else {
        throw DataError("model file: unknown termination '" + term + "'");
    }
    r.uv_trace = get_nums(j.at("uv_trace"));
    r.inner_residual_trace = get_nums(j.at("inner_residual_trace"));
    r.loglik_trace = get_nums(j.at("loglik_trace"));
    return r;
}

}  // namespace

void write_model(std::ostream& out, const DensityEstimate& est) {
    const auto& basis = est.basis();
    json j;
    j["format"] = kFormatName;
    j["version"] = kFormatVersion;
    j["method"] = to_string(est.method());

    json pieces = json::array();
    for (const auto& p : basis.pieces()) {
        json jp;
        jp["lo"] = num(p.domain.lo());
        jp["hi"] = num(p.domain.hi());
        jp["degree_or_order"] = p.degree_or_order;
        if (p.knots) jp["knots"] = nums(p.knots->knots);
        pieces.push_back(std::move(jp));
    }
    j["pieces"] = std::move(pieces);

    json windows = json::array();
    for (const auto& w : basis.windows()) {
        windows.push_back({{"piece", w.piece}, {"local", w.local}, {"area", num(w.area)}, {"normalizer", num(w.normalizer)}});
    }
    j["windows"] = std::move(windows);
    j["coefficients"] = nums(est.coefficients());
    j["config"] = config_to_json(est.config());
    j["report"] = report_to_json(est.report());
    out << j.dump(1) << '\n';
}

DensityEstimate read_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format") != kFormatName) throw DataError("not a model file");
        if (j.at("version") != kFormatVersion) throw DataError("unsupported model file version");
        const Method method = method_from_string(j.at("method").get<std::string>());

        std::vector<BasisPiece> pieces;
        for (const auto& jp : j.at("pieces")) {
            BasisPiece p{Domain(get_num(jp.at("lo")), get_num(jp.at("hi"))), jp.at("degree_or_order").get<int>(), {}};
            if (jp.contains("knots")) p.knots = KnotVector{get_nums(jp.at("knots")), p.degree_or_order};
            pieces.push_back(std::move(p));
        }
        std::vector<Window> windows;
        for (const auto& jw : j.at("windows")) {
            windows.push_back({jw.at("piece").get<std::size_t>(), jw.at("local").get<std::size_t>(),
                               get_num(jw.at("area")), get_num(jw.at("normalizer"))});
        }
        WindowBasis basis(family_of(method), std::move(pieces), std::move(windows));
        return {method, std::move(basis), get_nums(j.at("coefficients")), report_from_json(j.at("report")),
                config_from_json(j.at("config"))};
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("inconsistent model file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// TSV outputs

void write_plot_grid(std::ostream& out, const DensityEstimate& est, const PlotOptions& options) {
    if (options.rows < 1) throw InvalidArgument("plot grid needs at least one row");
    const Domain dom = options.domain.value_or(est.basis().hull());
    const Pdf truth = options.truth ? true_pdf(*options.truth) : Pdf{};
    const double h = dom.width() / static_cast<double>(options.rows);
    out << "x\tpdf\ttruth\n";
    for (std::size_t i = 0; i < options.rows; ++i) {
        const double x = dom.lo() + (static_cast<double>(i) + 0.5) * h;
        out << format_double(x) << '\t' << format_double(est.pdf(x)) << '\t';
        if (truth) out << format_double(truth(x));
        out << '\n';
    }
}

void write_partition(std::ostream& out, const DomainPartition& part) {
    out << "piece_index\tlo\thi\tsample_count\n";
    for (std::size_t i = 0; i < part.pieces.size(); ++i) {
        const auto& p = part.pieces[i];
        out << i << '\t' << format_double(p.lo) << '\t' << format_double(p.hi) << '\t' << p.sample_count() << '\n';
    }
}

Domain comparison_domain(const DensityEstimate& est, Source source) {
    const Domain hull = est.basis().hull();
    const auto [slo, shi] = support(source);
    return {std::min(hull.lo(), slo), std::isfinite(shi) ? std::max(hull.hi(), shi) : hull.hi()};
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
    if (options.source == Source::File) throw InvalidArgument("bench needs a generated distribution");
    if (options.sample_sizes.empty() || options.seeds.empty()) throw InvalidArgument("bench needs sizes and seeds");
    options.config.validate();

    const std::size_t n_seeds = options.seeds.size();
    std::vector<BenchRow> rows(options.sample_sizes.size() * n_seeds);
    const Pdf truth = true_pdf(options.source);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SolverConfig config = options.config;
    // Cells already run concurrently; keep each fit on one thread.
    config.exec = Exec::Serial;

    const auto cells = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
        BenchRow& row = rows[static_cast<std::size_t>(c)];
        row.m = options.sample_sizes[static_cast<std::size_t>(c) / n_seeds];
        row.seed = options.seeds[static_cast<std::size_t>(c) % n_seeds];
        row.l1 = row.loglik = nan;
        try {
            const SampleSet s = generate(options.source, row.m, row.seed);
            const DensityEstimate est = fit(s.values(), options.method, config);
            row.l1 = l1_error(est, truth, comparison_domain(est, options.source));
            row.loglik = log_likelihood(est, s.values()).value;
            row.iterations = est.report().outer_iterations;
            row.status = est.report().terminated_by == Termination::EpsilonTest ? "ok" : "budget";
        } catch (const ConvergenceError&) {
            row.status = "solver_error";
        } catch (const std::exception&) {
            row.status = "data_error";
        }
    }
    return rows;
}

void write_bench(std::ostream& out, std::span<const BenchRow> rows) {
    out << "m\tseed\tL1\tloglik\titerations\tstatus\n";
    for (const auto& r : rows) {
        out << r.m << '\t' << r.seed << '\t' << format_double(r.l1) << '\t' << format_double(r.loglik) << '\t'
            << r.iterations << '\t' << r.status << '\n';
    }
}

}  // namespace superdens
