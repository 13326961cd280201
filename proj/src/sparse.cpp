#include "entlaser/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entlaser/runtime.hpp"

namespace entlaser {

SparseMatrix::SparseMatrix(std::int64_t rows, std::int64_t cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::int64_t rows, std::int64_t cols,
                                         std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m(rows, cols);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());

    for (std::size_t i = 0; i < triplets.size();) {
        const std::int64_t r = triplets[i].row;
        const std::int64_t c = triplets[i].col;
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::invalid_argument("SparseMatrix::from_triplets: index out of range");
        cplx v = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
            v += triplets[i++].value;
        if (v != cplx(0.0)) {
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<std::int64_t>(m.values_.size());
    }
    // fill gaps for empty rows
    for (std::size_t r = 1; r < m.row_ptr_.size(); ++r)
        m.row_ptr_[r] = std::max(m.row_ptr_[r], m.row_ptr_[r - 1]);
    return m;
}

SparseMatrix SparseMatrix::identity(std::int64_t n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
}

Eigen::VectorXcd SparseMatrix::apply(const Eigen::VectorXcd& x) const {
    return runtime::parallel_enabled() ? apply_parallel(x) : apply_serial(x);
}

Eigen::VectorXcd SparseMatrix::apply_serial(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    Eigen::VectorXcd y(rows_);
    for (std::int64_t r = 0; r < rows_; ++r) {
        cplx acc = 0.0;
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * x[col_idx_[k]];
        y[r] = acc;
    }
    return y;
}

Eigen::VectorXcd SparseMatrix::apply_parallel(const Eigen::VectorXcd& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    Eigen::VectorXcd y(rows_);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows_; ++r) {
        cplx acc = 0.0;
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * x[col_idx_[k]];
        y[r] = acc;
    }
    return y;
}

Eigen::MatrixXcd SparseMatrix::apply_dense(const Eigen::MatrixXcd& x) const {
    if (x.rows() != cols_) throw std::invalid_argument("SparseMatrix::apply_dense: size mismatch");
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(rows_, x.cols());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            y.row(r) += values_[k] * x.row(col_idx_[k]);
    return y;
}

SparseMatrix SparseMatrix::adjoint() const {
    std::vector<Triplet> t;
    t.reserve(values_.size());
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({col_idx_[k], r, std::conj(values_[k])});
    return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(cplx factor) const {
    SparseMatrix m = *this;
    for (auto& v : m.values_) v *= factor;
    return m;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SparseMatrix::operator+: shape mismatch");
    std::vector<Triplet> t;
    t.reserve(values_.size() + other.values_.size());
    for (std::int64_t r = 0; r < rows_; ++r) {
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.push_back({r, col_idx_[k], values_[k]});
        for (std::int64_t k = other.row_ptr_[r]; k < other.row_ptr_[r + 1]; ++k)
            t.push_back({r, other.col_idx_[k], other.values_[k]});
    }
    return from_triplets(rows_, cols_, std::move(t));
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& other) const {
    return *this + other.scaled(-1.0);
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows_)
        throw std::invalid_argument("SparseMatrix::operator*: shape mismatch");
    SparseMatrix m(rows_, other.cols_);

    // row-at-a-time gather with a dense accumulator over columns
    std::vector<cplx> acc(static_cast<std::size_t>(other.cols_), 0.0);
    std::vector<std::int64_t> marker(static_cast<std::size_t>(other.cols_), -1);
    std::vector<std::int64_t> touched;
    for (std::int64_t r = 0; r < rows_; ++r) {
        touched.clear();
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const cplx a = values_[k];
            const std::int64_t mid = col_idx_[k];
            for (std::int64_t j = other.row_ptr_[mid]; j < other.row_ptr_[mid + 1]; ++j) {
                const std::int64_t c = other.col_idx_[j];
                if (marker[c] != r) {
                    marker[c] = r;
                    acc[c] = 0.0;
                    touched.push_back(c);
                }
                acc[c] += a * other.values_[j];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int64_t c : touched) {
            if (acc[c] != cplx(0.0)) {
                m.col_idx_.push_back(c);
                m.values_.push_back(acc[c]);
            }
        }
        m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<std::int64_t>(m.values_.size());
    }
    return m;
}

double SparseMatrix::hermiticity_error() const {
    const SparseMatrix diff = *this - adjoint();
    double err = 0.0;
    for (const auto& v : diff.values_) err = std::max(err, std::abs(v));
    return err;
}

Eigen::MatrixXcd SparseMatrix::to_dense() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (std::int64_t r = 0; r < rows_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            d(r, col_idx_[k]) += values_[k];
    return d;
}

cplx SparseMatrix::coeff(std::int64_t row, std::int64_t col) const {
    for (std::int64_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (col_idx_[k] == col) return values_[k];
    return 0.0;
}

}  // namespace entlaser
