#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tarmac {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void append_row(std::span<const double> values);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SymmetricEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // row i is the unit eigenvector for values[i]
};

// Cyclic Jacobi rotations; `a` must be square and symmetric.
SymmetricEigen symmetric_eigen(const Matrix& a);

// Solves (A + jitter·I) x = b for symmetric positive semi-definite A by
// Cholesky factorization. Throws FitError if the factorization breaks down.
std::vector<double> solve_spd(Matrix a, std::vector<double> b, double jitter = 0.0);

}  // namespace tarmac
