#pragma once

// Data-parallel inner loops of the likelihood solver. Every kernel has a
// plain serial reference in `serial::` and an OpenMP version in `omp::`.
// Reductions are taken over fixed-size blocks and combined in block order,
// so both versions return bitwise identical results for any thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "superdens/common.hpp"

namespace superdens {

class WindowBasis;

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const { return data_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace kernels {

/// Block length for deterministic reductions.
inline constexpr std::size_t kReduceBlock = 256;
/// Below this many rows the OpenMP kernels run on one thread.
inline constexpr std::size_t kParallelThreshold = 1024;

/// Result of one residual sweep.
struct SweepResult {
    double total = 0.0;       ///< E = sum_i E_i
    std::size_t argmax = 0;   ///< largest E_i, smallest index on ties
};

namespace serial {

/// b(i, j) = v_i * phi_i(x_j); n windows by m samples.
void design(const WindowBasis& basis, std::span<const double> v, std::span<const double> x, DenseMatrix& b);

/// D(i, j) = scale * sum_k b(k, i) b(k, j); m by m.
void gram(const DenseMatrix& b, double scale, DenseMatrix& d);

/// s_i = sum_j D(i, j) a_j.
void matvec(const DenseMatrix& d, std::span<const double> a, std::span<double> s);

/// Adds delta * D(i, k) to s_i for every i, then refreshes
/// e_i = |alpha_i s_i - 1|. Pass delta = 0 for a pure refresh.
SweepResult sweep(const DenseMatrix& d, std::size_t k, double delta, std::span<const double> alpha,
                  std::span<double> s, std::span<double> e);

}  // namespace serial

namespace omp {

void design(const WindowBasis& basis, std::span<const double> v, std::span<const double> x, DenseMatrix& b);
void gram(const DenseMatrix& b, double scale, DenseMatrix& d);
void matvec(const DenseMatrix& d, std::span<const double> a, std::span<double> s);
SweepResult sweep(const DenseMatrix& d, std::size_t k, double delta, std::span<const double> alpha,
                  std::span<double> s, std::span<double> e);

}  // namespace omp

inline void design(Exec ex, const WindowBasis& basis, std::span<const double> v, std::span<const double> x,
                   DenseMatrix& b) {
    ex == Exec::Serial ? serial::design(basis, v, x, b) : omp::design(basis, v, x, b);
}
inline void gram(Exec ex, const DenseMatrix& b, double scale, DenseMatrix& d) {
    ex == Exec::Serial ? serial::gram(b, scale, d) : omp::gram(b, scale, d);
}
inline void matvec(Exec ex, const DenseMatrix& d, std::span<const double> a, std::span<double> s) {
    ex == Exec::Serial ? serial::matvec(d, a, s) : omp::matvec(d, a, s);
}
inline SweepResult sweep(Exec ex, const DenseMatrix& d, std::size_t k, double delta, std::span<const double> alpha,
                         std::span<double> s, std::span<double> e) {
    return ex == Exec::Serial ? serial::sweep(d, k, delta, alpha, s, e) : omp::sweep(d, k, delta, alpha, s, e);
}

}  // namespace kernels
}  // namespace superdens
