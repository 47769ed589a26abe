#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "superdens/estimator.hpp"

using namespace superdens;

namespace {

DensityEstimate single_window() {
    const std::vector<double> xs{0.0, 2.0};
    auto basis = make_bspline_basis(xs, 1, 0.0, 1e-12);
    return {Method::BSpline, std::move(basis), {1.0}, FitReport{}, SolverConfig{}};
}

}  // namespace

TEST_CASE("pdf of a hand-built estimate") {
    const auto est = single_window();
    CHECK(est.pdf(1.0) == 0.5);
    CHECK(est.pdf(0.0) == 0.5);
    CHECK(est.pdf(2.0) == 0.5);
    CHECK(est.pdf(-0.1) == 0.0);
    CHECK(est.pdf(2.5) == 0.0);
    CHECK(est.mass() == 1.0);
    CHECK_THROWS_AS(DensityEstimate(Method::BSpline, est.basis(), {-1.0}, FitReport{}, SolverConfig{}), InvalidArgument);
}

TEST_CASE("log likelihood") {
    const auto est = single_window();
    const std::vector<double> xs{0.5, 1.0, 1.5};
    const auto ll = log_likelihood(est, xs);
    CHECK(ll.finite());
    CHECK(ll.value == doctest::Approx(3.0 * std::log(0.5)).epsilon(1e-15));
    CHECK(ll.value == doctest::Approx(oracle::log_of_product([&](double x) { return est.pdf(x); }, xs)));

    const auto bad = log_likelihood(est, std::vector<double>{1.0, 3.0});
    CHECK_FALSE(bad.finite());
    CHECK(bad.zero_density_samples == 1);
    CHECK(std::isinf(bad.value));

    const auto s = gen_exponential(3, 9);
    const Pdf truth = true_pdf(Source::Exponential);
    CHECK(log_likelihood(truth, s.values()).value ==
          doctest::Approx(oracle::log_of_product(truth, s.values())).epsilon(1e-14));
}

TEST_CASE("quadrature and l1") {
    const Domain unit(0.0, 1.0);
    CHECK(quadrature([](double x) { return x; }, unit, 2) == 0.5);
    CHECK(quadrature([](double x) { return x * x * x; }, unit, 8) == doctest::Approx(0.25).epsilon(1e-15));
    const auto basis = make_bezier_basis(unit, 10);
    for (std::size_t w = 0; w < basis.size(); ++w) {
        const double raw = quadrature([&](double x) { return basis.eval(w, x) / 11.0; }, unit, 1 << 12);
        CHECK(raw == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(quadrature([](double) { return 1.0; }, unit, 3), InvalidArgument);

    const Pdf f = true_pdf(Source::Bimodal);
    CHECK(l1_distance(f, f, Domain(0.0, 5.0)) == 0.0);
    const Pdf disjoint = [](double x) { return x >= 5.0 && x <= 6.0 ? 1.0 : 0.0; };
    CHECK(l1_distance(f, disjoint, Domain(0.0, 7.0)) == doctest::Approx(2.0).epsilon(1e-3));
    const Pdf uniform = [](double x) { return x >= 0.0 && x <= 4.0 ? 0.25 : 0.0; };
    // |2/3 - 1/4| + |1/3 - 1/4| + 2 * 1/4 = 1.
    CHECK(l1_distance(f, uniform, Domain(0.0, 4.0)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("kl sanity") {
    const Pdf f = true_pdf(Source::Exponential);
    const auto same = kl_sanity(f, f, gen_exponential(1000, 3).values());
    CHECK(same.separation == 0.0);
    CHECK(same.used == 1000);
    const Pdf g = [](double x) { return x >= 0.0 ? 2.0 * std::exp(-2.0 * x) : 0.0; };
    const auto sep = kl_sanity(f, g, [](std::size_t m) { return gen_exponential(m, 5); }, 10000);
    // E[log f - log g] under Exp(1) = 1 - log 2.
    CHECK(sep.separation == doctest::Approx(1.0 - std::log(2.0)).epsilon(0.1));
}

TEST_CASE("default bases") {
    const auto s = gen_exponential(30, 1);
    const SolverConfig cfg;
    CHECK(build_basis(s.values(), Method::Bezier, cfg).size() == 11);
    const auto bs = build_basis(s.values(), Method::BSpline, cfg);
    CHECK(bs.size() > 11);
    CHECK(bs.hull().lo() < s.values().front());
    CHECK_THROWS_AS(build_basis(std::vector<double>{1.0}, Method::Bezier, cfg), InvalidArgument);
    CHECK_THROWS_AS(build_basis(std::vector<double>{0.0, 1.0, 2.0}, Method::BSpline, cfg), InvalidArgument);
}

TEST_CASE("piecewise fit on a bimodal sample") {
    const auto s = gen_bimodal(180, 1);
    const auto est = fit(s.values(), Method::PiecewiseBezier, SolverConfig{});
    REQUIRE(est.basis().pieces().size() == 2);
    CHECK(est.basis().size() == 22);
    const auto masses = est.piece_masses();
    CHECK(masses[0] > 0.0);
    CHECK(masses[1] > 0.0);
    CHECK(est.pdf(2.5) == 0.0);
    CHECK(masses[0] == doctest::Approx(2.0 / 3.0).epsilon(0.15));
}

TEST_CASE("estimator invariants") {
    for (Source src : {Source::Exponential, Source::Bimodal, Source::Trimodal}) {
        for (Method method : {Method::Bezier, Method::BSpline, Method::PiecewiseBezier}) {
            CAPTURE(to_string(src));
            CAPTURE(to_string(method));
            const auto s = generate(src, 120, 17);
            const auto est = fit(s.values(), method, SolverConfig{});
            CHECK(est.mass() <= 1.0 + 1e-12);
            CHECK(est.mass() >= 1.0 - 1e-6);
            CHECK(integrate(est) == doctest::Approx(est.mass()).epsilon(1e-6));
            const Domain hull = est.basis().hull();
            for (int i = 0; i <= 1000; ++i) {
                CHECK(est.pdf(hull.lo() + hull.width() * i / 1000.0) >= 0.0);
            }
            CHECK(est.pdf(hull.lo() - 1.0) == 0.0);
            CHECK(est.pdf(hull.hi() + 1.0) == 0.0);

            const auto& pieces = est.basis().pieces();
            for (std::size_t p = 1; p < pieces.size(); ++p) {
                const double mid = 0.5 * (pieces[p - 1].domain.hi() + pieces[p].domain.lo());
                CHECK(est.pdf(mid) == 0.0);
            }

            // The fit beats the flat density on the same hull.
            const auto ll = log_likelihood(est, s.values());
            CHECK(ll.value >= -static_cast<double>(s.size()) * std::log(hull.width()));

            const auto again = fit(s.values(), method, SolverConfig{});
            CHECK(again.coefficients() == est.coefficients());
        }
    }
}
