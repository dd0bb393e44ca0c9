#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nestspec {

/// Dense row-major matrix. Minimal by intent: only what the fitting code and
/// eigensolver need.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }

    static Matrix identity(std::size_t n);

    bool all_finite() const;

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const Matrix& a, std::span<const double> x);
/// a' * x for a with rows() == x.size().
std::vector<double> multiply_transposed(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double max_abs(std::span<const double> x);

/// Dense symmetric real matrix with full storage. Construction enforces
/// symmetry: near-symmetric inputs (floating-point Gram products) are
/// symmetrized as (A + A')/2, anything worse is rejected.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t dim);

    /// Symmetrize `a` or throw InputError when max |A - A'| > 1e-12 * max|A|.
    static SymmetricMatrix from_dense(const Matrix& a);
    static SymmetricMatrix identity(std::size_t n);
    static SymmetricMatrix diagonal(std::span<const double> d);

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    /// Sets entries (i, j) and (j, i) together so symmetry cannot drift.
    void set(std::size_t i, std::size_t j, double v) {
        data_[i * dim_ + j] = v;
        data_[j * dim_ + i] = v;
    }

    Matrix dense() const;
    bool all_finite() const;
    double max_abs_entry() const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Strictly increasing 0-based column indices selecting a nested model out of
/// a saturated design (or a principal submatrix out of a symmetric matrix).
class ColumnSubset {
public:
    ColumnSubset(std::vector<std::size_t> indices, std::size_t parent_dim);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t parent_dim() const { return parent_dim_; }
    std::size_t size() const { return indices_.size(); }

    /// True when the subset leaves at least one index out.
    bool proper() const { return indices_.size() < parent_dim_; }

    /// {0, 1, ..., count-1} against `parent_dim`.
    static ColumnSubset leading(std::size_t count, std::size_t parent_dim);

    bool contained_in(const ColumnSubset& other) const;

private:
    std::vector<std::size_t> indices_;
    std::size_t parent_dim_;
};

/// X' X assembled symmetrically (upper triangle computed, mirrored exactly).
SymmetricMatrix gram(const Matrix& x);
/// X' diag(w) X, same assembly discipline.
SymmetricMatrix weighted_gram(const Matrix& x, std::span<const double> w);

}  // namespace nestspec
