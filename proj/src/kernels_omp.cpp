#include <omp.h>

#include <cmath>

#include "superdens/kernels.hpp"
#include "superdens/window_basis.hpp"

namespace superdens::kernels::omp {

void design(const WindowBasis& basis, std::span<const double> v, std::span<const double> x, DenseMatrix& b) {
    const std::size_t n = basis.size();
    if (v.size() != n) throw InvalidArgument("design: v has wrong length");
    b = DenseMatrix(n, x.size());
    const auto m = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel if (x.size() >= kParallelThreshold / 8)
    {
        std::vector<double> phi(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t j = 0; j < m; ++j) {
            basis.eval_all(x[j], phi);
            for (std::size_t i = 0; i < n; ++i) b(i, j) = v[i] * phi[i];
        }
    }
}

void gram(const DenseMatrix& b, double scale, DenseMatrix& d) {
    const std::size_t n = b.rows();
    const std::size_t m = b.cols();
    DenseMatrix bt(m, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < m; ++j) bt(j, k) = b(k, j);

    d = DenseMatrix(m, m);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 16) if (m >= kParallelThreshold / 4)
    for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
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
    const auto rows = static_cast<std::ptrdiff_t>(d.rows());
#pragma omp parallel for schedule(static) if (d.rows() >= kParallelThreshold / 4)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
        const auto row = d.row(static_cast<std::size_t>(ii));
        double sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) sum += row[j] * a[j];
        s[static_cast<std::size_t>(ii)] = sum;
    }
}

SweepResult sweep(const DenseMatrix& d, std::size_t k, double delta, std::span<const double> alpha,
                  std::span<double> s, std::span<double> e) {
    const std::size_t m = s.size();
    if (m < kParallelThreshold) return serial::sweep(d, k, delta, alpha, s, e);

    const auto col = d.row(k);
    const std::size_t blocks = (m + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> block_sum(blocks);
    std::vector<std::size_t> block_arg(blocks);
    const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < nb; ++bb) {
        const auto blk = static_cast<std::size_t>(bb);
        const std::size_t start = blk * kReduceBlock;
        const std::size_t stop = std::min(m, start + kReduceBlock);
        double sum = 0.0;
        double best = -1.0;
        std::size_t arg = start;
        for (std::size_t i = start; i < stop; ++i) {
            if (delta != 0.0) s[i] += delta * col[i];
            e[i] = std::abs(alpha[i] * s[i] - 1.0);
            sum += e[i];
            if (e[i] > best) {
                best = e[i];
                arg = i;
            }
        }
        block_sum[blk] = sum;
        block_arg[blk] = arg;
    }

    SweepResult out;
    out.argmax = block_arg[0];
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        out.total += block_sum[blk];
        if (e[block_arg[blk]] > e[out.argmax]) out.argmax = block_arg[blk];
    }
    return out;
}

}  // namespace superdens::kernels::omp
