#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace entlaser {

using cplx = std::complex<double>;

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx value;
};

/// Compressed-sparse-row complex matrix for truncated Fock-space operators.
/// Assembled from coordinate lists, then compressed; supports the sparse
/// algebra needed for operator construction (sum, scalar, product, adjoint)
/// and a matrix-vector product with serial and OpenMP variants.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::int64_t rows, std::int64_t cols);

    static SparseMatrix from_triplets(std::int64_t rows, std::int64_t cols,
                                      std::vector<Triplet> triplets);
    static SparseMatrix identity(std::int64_t n);

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    // y = A x. Dispatches on the runtime parallel switch.
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply_serial(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd apply_parallel(const Eigen::VectorXcd& x) const;

    // B = A X for dense X (column blocks), serial.
    Eigen::MatrixXcd apply_dense(const Eigen::MatrixXcd& x) const;

    SparseMatrix adjoint() const;
    SparseMatrix scaled(cplx factor) const;

    SparseMatrix operator+(const SparseMatrix& other) const;
    SparseMatrix operator-(const SparseMatrix& other) const;
    SparseMatrix operator*(const SparseMatrix& other) const;

    /// max |A_ij - conj(A_ji)| over stored entries.
    double hermiticity_error() const;

    Eigen::MatrixXcd to_dense() const;

    cplx coeff(std::int64_t row, std::int64_t col) const;

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int64_t>& col_idx() const { return col_idx_; }
    const std::vector<cplx>& values() const { return values_; }

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int64_t> col_idx_;
    std::vector<cplx> values_;
};

}  // namespace entlaser
