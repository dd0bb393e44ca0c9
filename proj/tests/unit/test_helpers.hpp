#pragma once

#include <cmath>
#include <vector>

#include "nestspec/linear_model.hpp"
#include "nestspec/matrix.hpp"
#include "nestspec/random.hpp"

namespace test_helpers {

using namespace nestspec;

inline SymmetricMatrix symmetric_from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return SymmetricMatrix::from_dense(m);
}

inline Matrix matrix_from_rows(std::size_t rows, std::size_t cols,
                               std::initializer_list<double> values) {
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (double v : values) {
        m(k / cols, k % cols) = v;
        ++k;
    }
    return m;
}

inline SymmetricMatrix random_symmetric(Rng& rng, std::size_t dim, double scale = 1.0) {
    SymmetricMatrix a(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) a.set(i, j, scale * rng.normal());
    return a;
}

inline DesignMatrix random_design(Rng& rng, std::size_t n, std::size_t p) {
    Matrix x(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) x(i, j) = rng.normal();
    return DesignMatrix(std::move(x));
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

inline double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

}  // namespace test_helpers
