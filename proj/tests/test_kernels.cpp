#include <vector>

#include "doctest.h"
#include "superdens/kernels.hpp"
#include "superdens/sample_lab.hpp"
#include "superdens/window_basis.hpp"

using namespace superdens;

namespace {

struct Fixture {
    WindowBasis basis;
    std::vector<double> xs;
    std::vector<double> v;
};

Fixture make_fixture(std::size_t m) {
    const auto s = gen_trimodal(m, 42);
    auto basis = make_bezier_basis(extended_range(s.values(), 0.05), 10);
    std::vector<double> v(basis.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.2 + 0.05 * static_cast<double>(i);
    return {std::move(basis), s.values(), v};
}

}  // namespace

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
    for (std::size_t m : {7, 300, 1500}) {
        CAPTURE(m);
        const auto fx = make_fixture(m);
        DenseMatrix b_ser;
        DenseMatrix b_omp;
        kernels::serial::design(fx.basis, fx.v, fx.xs, b_ser);
        kernels::omp::design(fx.basis, fx.v, fx.xs, b_omp);
        CHECK(b_ser == b_omp);

        DenseMatrix d_ser;
        DenseMatrix d_omp;
        kernels::serial::gram(b_ser, 1.0, d_ser);
        kernels::omp::gram(b_ser, 1.0, d_omp);
        CHECK(d_ser == d_omp);

        std::vector<double> alpha(m);
        for (std::size_t j = 0; j < m; ++j) alpha[j] = 1.0 + 0.001 * static_cast<double>(j % 17);
        std::vector<double> s_ser(m);
        std::vector<double> s_omp(m);
        kernels::serial::matvec(d_ser, alpha, s_ser);
        kernels::omp::matvec(d_ser, alpha, s_omp);
        CHECK(s_ser == s_omp);

        std::vector<double> e_ser(m);
        std::vector<double> e_omp(m);
        for (std::size_t k : {std::size_t{0}, m / 2, m - 1}) {
            const auto r1 = kernels::serial::sweep(d_ser, k, 0.125, alpha, s_ser, e_ser);
            const auto r2 = kernels::omp::sweep(d_ser, k, 0.125, alpha, s_omp, e_omp);
            CHECK(r1.total == r2.total);
            CHECK(r1.argmax == r2.argmax);
            CHECK(s_ser == s_omp);
            CHECK(e_ser == e_omp);
        }
    }
}

TEST_CASE("sweep reports the first of equal maxima") {
    const std::size_t m = 2000;
    DenseMatrix d(m, m, 0.0);
    std::vector<double> alpha(m, 1.0);
    std::vector<double> s(m, 1.0);
    s[600] = 3.0;
    s[1700] = 3.0;
    std::vector<double> e(m);
    const auto r1 = kernels::serial::sweep(d, 0, 0.0, alpha, s, e);
    const auto r2 = kernels::omp::sweep(d, 0, 0.0, alpha, s, e);
    CHECK(r1.argmax == 600);
    CHECK(r2.argmax == 600);
    CHECK(r1.total == 4.0);
    CHECK(r2.total == 4.0);
}

TEST_CASE("gram of the design is the scaled cross product") {
    const auto fx = make_fixture(40);
    DenseMatrix b;
    kernels::serial::design(fx.basis, fx.v, fx.xs, b);
    DenseMatrix d;
    kernels::serial::gram(b, 0.5, d);
    for (std::size_t i = 0; i < 40; i += 7) {
        for (std::size_t j = 0; j < 40; j += 5) {
            long double want = 0.0L;
            for (std::size_t k = 0; k < b.rows(); ++k) want += static_cast<long double>(b(k, i)) * b(k, j);
            CHECK(d(i, j) == doctest::Approx(static_cast<double>(0.5L * want)).epsilon(1e-13));
        }
    }
}
