#include "nestspec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nestspec/errors.hpp"

namespace nestspec {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputError("matrix multiply: inner dimensions disagree");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> multiply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InputError("matrix-vector multiply: dimensions disagree");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> multiply_transposed(const Matrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) throw InputError("transposed multiply: dimensions disagree");
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {
    if (dim == 0) throw InputError("symmetric matrix dimension must be at least 1");
}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& a) {
    if (a.rows() != a.cols()) throw InputError("symmetric matrix must be square");
    if (!a.all_finite()) throw InputError("symmetric matrix entries must be finite");
    const std::size_t n = a.rows();

    double scale = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
            if (j > i) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
        }
    if (asym > 1e-12 * std::max(scale, 1e-300))
        throw InputError("matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                         " exceeds 1e-12 of scale " + std::to_string(scale) + ")");

    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.set(i, i, a(i, i));
        for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    }
    return s;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
    SymmetricMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
    SymmetricMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

Matrix SymmetricMatrix::dense() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

bool SymmetricMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

double SymmetricMatrix::max_abs_entry() const { return max_abs(data_); }

ColumnSubset::ColumnSubset(std::vector<std::size_t> indices, std::size_t parent_dim)
    : indices_(std::move(indices)), parent_dim_(parent_dim) {
    if (indices_.empty()) throw InputError("column subset must be nonempty");
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] >= parent_dim_)
            throw InputError("column subset index " + std::to_string(indices_[k]) +
                             " out of range for dimension " + std::to_string(parent_dim_));
        if (k > 0 && indices_[k] <= indices_[k - 1])
            throw InputError("column subset indices must be strictly increasing (no duplicates)");
    }
}

ColumnSubset ColumnSubset::leading(std::size_t count, std::size_t parent_dim) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    return ColumnSubset(std::move(idx), parent_dim);
}

bool ColumnSubset::contained_in(const ColumnSubset& other) const {
    if (parent_dim_ != other.parent_dim_) return false;
    return std::includes(other.indices_.begin(), other.indices_.end(),
                         indices_.begin(), indices_.end());
}

SymmetricMatrix gram(const Matrix& x) {
    const std::size_t p = x.cols();
    SymmetricMatrix g(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < x.rows(); ++t) s += x(t, i) * x(t, j);
            g.set(i, j, s);
        }
    }
    return g;
}

SymmetricMatrix weighted_gram(const Matrix& x, std::span<const double> w) {
    if (w.size() != x.rows()) throw InputError("weighted gram: weight length must match rows");
    const std::size_t p = x.cols();
    SymmetricMatrix g(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < x.rows(); ++t) s += w[t] * x(t, i) * x(t, j);
            g.set(i, j, s);
        }
    }
    return g;
}

}  // namespace nestspec
