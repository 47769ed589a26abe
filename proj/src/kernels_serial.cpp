#include <cmath>

#include "superdens/kernels.hpp"
#include "superdens/window_basis.hpp"

namespace superdens::kernels::serial {

void design(const WindowBasis& basis, std::span<const double> v, std::span<const double> x, DenseMatrix& b) {
    const std::size_t n = basis.size();
    if (v.size() != n) throw InvalidArgument("design: v has wrong length");
    b = DenseMatrix(n, x.size());
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < x.size(); ++j) {
        basis.eval_all(x[j], phi);
        for (std::size_t i = 0; i < n; ++i) b(i, j) = v[i] * phi[i];
    }
}

void gram(const DenseMatrix& b, double scale, DenseMatrix& d) {
    const std::size_t n = b.rows();
    const std::size_t m = b.cols();
    DenseMatrix bt(m, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < m; ++j) bt(j, k) = b(k, j);

    d = DenseMatrix(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto bi = bt.row(i);
        for (std::size_t j = i; j < m; ++j) {
            const auto bj = bt.row(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += bi[k] * bj[k];
            d(i, j) = d(j, i) = scale * sum;
        }
    }
}

void matvec(const DenseMatrix& d, std::span<const double> a, std::span<double> s) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const auto row = d.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * a[j];
        s[i] = sum;
    }
}

SweepResult sweep(const DenseMatrix& d, std::size_t k, double delta, std::span<const double> alpha,
                  std::span<double> s, std::span<double> e) {
    const std::size_t m = s.size();
    const auto col = d.row(k);  // symmetric: row k == column k
    SweepResult out;
    double best = -1.0;
    for (std::size_t start = 0; start < m; start += kReduceBlock) {
        const std::size_t stop = std::min(m, start + kReduceBlock);
        double block = 0.0;
        for (std::size_t i = start; i < stop; ++i) {
            if (delta != 0.0) s[i] += delta * col[i];
            e[i] = std::abs(alpha[i] * s[i] - 1.0);
            block += e[i];
            if (e[i] > best) {
                best = e[i];
                out.argmax = i;
            }
        }
        out.total += block;
    }
    return out;
}

}  // namespace superdens::kernels::serial
