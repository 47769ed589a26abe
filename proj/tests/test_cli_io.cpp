#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "superdens/cli.hpp"
#include "superdens/cli_io.hpp"

using namespace superdens;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("superdens_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            cells.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 4.9e-324, 1.7976931348623157e308, -2.5}) {
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isnan(parse_double("nan")));
    CHECK(parse_double("+2.5") == 2.5);
    CHECK(parse_double("1e3") == 1000.0);
    CHECK_THROWS_AS(parse_double(""), DataError);
    CHECK_THROWS_AS(parse_double("1.0x"), DataError);
    CHECK_THROWS_AS(parse_double(" 1"), DataError);
}

TEST_CASE("sample files") {
    std::stringstream io;
    const std::vector<double> xs{0.1, 2.0, 1e-17, 3.25};
    write_samples(io, xs);
    CHECK(read_samples(io) == xs);

    std::istringstream with_comments("# header\n1.5\n\n  2.5  \r\n# tail\n");
    CHECK(read_samples(with_comments) == std::vector<double>{1.5, 2.5});

    std::istringstream bad("1.0\nabc\n");
    try {
        read_samples(bad);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream inf("1.0\ninf\n");
    CHECK_THROWS_AS(read_samples(inf), DataError);
}

TEST_CASE("model files round-trip bit for bit") {
    for (Method method : {Method::Bezier, Method::BSpline, Method::PiecewiseBezier}) {
        CAPTURE(to_string(method));
        const auto s = gen_bimodal(150, 4);
        const auto est = fit(s.values(), method, SolverConfig{});
        std::stringstream io;
        write_model(io, est);
        const auto back = read_model(io);
        CHECK(back.method() == method);
        CHECK(back.coefficients() == est.coefficients());
        CHECK(back.basis().size() == est.basis().size());
        CHECK(back.report().outer_iterations == est.report().outer_iterations);
        CHECK(back.report().loglik_trace == est.report().loglik_trace);
        CHECK(back.config().bezier_degree == est.config().bezier_degree);
        CHECK(back.config().delta_inner == est.config().delta_inner);
        const Domain hull = est.basis().hull();
        for (int i = 0; i < 1000; ++i) {
            const double x = hull.lo() - 0.1 + (hull.width() + 0.2) * i / 999.0;
            if (back.pdf(x) != est.pdf(x)) FAIL("pdf differs at x = " << x);
        }
    }
}

TEST_CASE("malformed model files are data errors") {
    std::istringstream junk("{not json");
    CHECK_THROWS_AS(read_model(junk), DataError);
    std::istringstream wrong(R"({"format":"something-else","version":1})");
    CHECK_THROWS_AS(read_model(wrong), DataError);
    std::istringstream missing(R"({"format":"superdens-model","version":1})");
    CHECK_THROWS_AS(read_model(missing), DataError);
}

TEST_CASE("command line workflow") {
    const fs::path dir = scratch_dir();
    const std::string samples = (dir / "bi.txt").string();
    const std::string model = (dir / "bi.json").string();

    SUBCASE("sample is deterministic") {
        auto a = cli({"sample", "--dist", "bimodal", "--m", "180", "--seed", "3"});
        auto b = cli({"sample", "--dist", "bimodal", "--m", "180", "--seed", "3"});
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 180);
    }

    SUBCASE("fit, plotdata and partition") {
        REQUIRE(cli({"sample", "--dist", "bimodal", "--m", "180", "--out", samples}).code == kExitOk);
        const auto f = cli({"fit", "--in", samples, "--out", model, "--method", "pbezier"});
        REQUIRE(f.code == kExitOk);
        CHECK(f.out.find("pieces=2") != std::string::npos);

        const auto p = cli({"plotdata", "--model", model, "--truth", "bimodal"});
        REQUIRE(p.code == kExitOk);
        const auto rows = tsv(p.out);
        REQUIRE(rows.size() == 513);
        CHECK(rows[0] == std::vector<std::string>{"x", "pdf", "truth"});
        double prev = -1e300;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double x = parse_double(rows[i][0]);
            CHECK(x > prev);
            prev = x;
            if (std::abs(x - 2.5) < 0.01) CHECK(parse_double(rows[i][2]) == 0.0);
        }
        const auto wide = tsv(cli({"plotdata", "--model", model, "--lo", "0", "--hi", "4"}).out);
        CHECK(wide.size() == 513);

        const auto plain = cli({"plotdata", "--model", model, "--rows", "4", "--lo", "0", "--hi", "4"});
        const auto prow = tsv(plain.out);
        REQUIRE(prow.size() == 5);
        CHECK(prow[1][0] == "0.5");
        CHECK(prow[1][2].empty());

        const auto part = cli({"partition", "--in", samples});
        REQUIRE(part.code == kExitOk);
        const auto pr = tsv(part.out);
        REQUIRE(pr.size() == 3);
        CHECK(pr[0] == std::vector<std::string>{"piece_index", "lo", "hi", "sample_count"});
        CHECK(std::stoul(pr[1][3]) + std::stoul(pr[2][3]) == 180);
    }

    SUBCASE("plot grid integrates to the coefficient mass") {
        REQUIRE(cli({"sample", "--dist", "exponential", "--m", "180", "--out", samples}).code == kExitOk);
        REQUIRE(cli({"fit", "--in", samples, "--out", model}).code == kExitOk);
        std::ifstream mf(model);
        const auto est = read_model(mf);
        const auto rows = tsv(cli({"plotdata", "--model", model}).out);
        REQUIRE(rows.size() == 513);
        const double h = est.basis().hull().width() / 512.0;
        double riemann = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) riemann += parse_double(rows[i][1]) * h;
        CHECK(std::abs(riemann - est.mass()) <= 1e-3);
    }

    SUBCASE("bench is deterministic") {
        const std::vector<std::string> args{"bench", "--dist", "exponential", "--m", "30,60", "--seeds", "3"};
        const auto a = cli(args);
        const auto b = cli(args);
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        const auto rows = tsv(a.out);
        REQUIRE(rows.size() == 7);
        CHECK(rows[0] == std::vector<std::string>{"m", "seed", "L1", "loglik", "iterations", "status"});
        CHECK(rows[1][0] == "30");
        CHECK(rows[1][1] == "1");
        CHECK(rows[6][0] == "60");
        CHECK(rows[6][1] == "3");
    }

    SUBCASE("exit codes") {
        CHECK(cli({}).code == kExitUsage);
        CHECK(cli({"sample", "--dist", "bimodal", "--m", "0"}).code == kExitUsage);
        CHECK(cli({"sample", "--dist", "gamma", "--m", "10"}).code == kExitUsage);
        CHECK(cli({"fit", "--in", samples}).code == kExitUsage);
        CHECK(cli({"fit", "--in", (dir / "missing.txt").string(), "--out", model}).code == kExitData);

        REQUIRE(cli({"sample", "--dist", "exponential", "--m", "8", "--out", samples}).code == kExitOk);
        CHECK(cli({"fit", "--in", samples, "--out", model, "--method", "bspline"}).code == kExitUsage);
        CHECK(cli({"fit", "--in", samples, "--out", model, "--eps", "-1"}).code == kExitUsage);

        {
            std::ofstream bad(samples);
            bad << "1.0\nfoo\n";
        }
        const auto d = cli({"fit", "--in", samples, "--out", model});
        CHECK(d.code == kExitData);
        CHECK(d.err.find("line 2") != std::string::npos);

        REQUIRE(cli({"sample", "--dist", "exponential", "--m", "30", "--out", samples}).code == kExitOk);
        const auto s = cli({"fit", "--in", samples, "--out", model, "--delta", "1e-30"});
        CHECK(s.code == kExitSolver);
        CHECK(s.err.find("fit report") != std::string::npos);
    }

    fs::remove_all(dir);
}
