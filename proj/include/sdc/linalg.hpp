/// @file linalg.hpp
/// @brief Compressed-row sparse matrices, a direct sparse LU for the
/// saddle-point systems and a dense Gaussian-elimination reference solver.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdc {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

/// CSR storage. Column indices are strictly increasing within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols);

  /// Duplicates are summed; explicit zeros produced by summation are kept so
  /// the sparsity pattern does not depend on cancellation.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  static CsrMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return row_ptr_; }
  const std::vector<std::size_t>& column_indices() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry lookup by binary search; 0 when structurally absent.
  double operator()(std::size_t i, std::size_t j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_add(std::span<const double> x, std::span<double> y, double scale = 1.0) const;
  std::vector<double> operator*(std::span<const double> x) const;
  void multiply_transpose_add(std::span<const double> x, std::span<double> y,
                              double scale = 1.0) const;
  double quadratic_form(std::span<const double> x) const;
  double bilinear_form(std::span<const double> x, std::span<const double> y) const;

  CsrMatrix transposed() const;
  CsrMatrix scaled(double s) const;
  double max_abs() const;
  DenseMatrix to_dense() const;
  std::vector<Triplet> triplets() const;

  /// Coordinate text: `row col value` per line, sorted by (row, col).
  void write_coordinate(std::ostream& os) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// a*A + b*B for matrices of equal shape.
CsrMatrix add(const CsrMatrix& A, double a, const CsrMatrix& B, double b);

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x);

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  /// Row/column of the original matrix at which elimination broke down.
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Sparse LU with threshold partial pivoting. Immutable once built; solve()
/// may be called concurrently with distinct right-hand sides.
class SparseLU {
 public:
  /// Relative pivot floor: |pivot| < pivot_tolerance * max|A| is singular.
  static constexpr double pivot_tolerance = 1e-14;

  explicit SparseLU(const CsrMatrix& A);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;

  std::size_t size() const { return n_; }
  std::vector<double> solve(std::span<const double> b) const;
  double min_abs_pivot() const { return min_pivot_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t n_ = 0;
  double min_pivot_ = 0.0;
};

SparseLU factorize(const CsrMatrix& A);

/// Gaussian elimination with partial pivoting; n <= 2000.
std::vector<double> dense_solve(DenseMatrix A, std::vector<double> b);

double norm2(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);

}  // namespace sdc
