#include "sdc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <type_traits>
#include <ostream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace sdc {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
  for (const Triplet& t : entries)
    if (t.row >= rows || t.col >= cols) throw std::out_of_range("CsrMatrix: triplet out of range");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (k < entries.size() && entries[k].row == r) {
      const std::size_t c = entries[k].col;
      double v = 0.0;
      while (k < entries.size() && entries[k].row == r && entries[k].col == c) v += entries[k++].value;
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  return m;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

double CsrMatrix::operator()(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(x, y);
}

void CsrMatrix::multiply_add(std::span<const double> x, std::span<double> y, double scale) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("CsrMatrix::multiply: shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] += scale * s;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void CsrMatrix::multiply_transpose_add(std::span<const double> x, std::span<double> y,
                                       double scale) const {
  if (x.size() != rows_ || y.size() != cols_)
    throw std::invalid_argument("CsrMatrix::multiply_transpose: shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      y[col_idx_[k]] += scale * values_[k] * x[r];
}

double CsrMatrix::quadratic_form(std::span<const double> x) const { return bilinear_form(x, x); }

double CsrMatrix::bilinear_form(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != rows_ || y.size() != cols_)
    throw std::invalid_argument("CsrMatrix::bilinear_form: shape mismatch");
  double s = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += x[r] * values_[k] * y[col_idx_[k]];
  return s;
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({col_idx_[k], r, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

CsrMatrix CsrMatrix::scaled(double s) const {
  CsrMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, col_idx_[k]) += values_[k];
  return d;
}

std::vector<Triplet> CsrMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({r, col_idx_[k], values_[k]});
  return t;
}

void CsrMatrix::write_coordinate(std::ostream& os) const {
  const auto precision = os.precision(17);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      os << r << ' ' << col_idx_[k] << ' ' << values_[k] << '\n';
  os.precision(precision);
}

CsrMatrix add(const CsrMatrix& A, double a, const CsrMatrix& B, double b) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("add: shape mismatch");
  auto ta = A.triplets();
  for (Triplet& t : ta) t.value *= a;
  for (Triplet t : B.triplets()) {
    t.value *= b;
    ta.push_back(t);
  }
  return CsrMatrix::from_triplets(A.rows(), A.cols(), std::move(ta));
}

std::vector<double> spmv(const CsrMatrix& A, std::span<const double> x) { return A * x; }

struct SparseLU::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLU::SparseLU(const CsrMatrix& A) : impl_(std::make_unique<Impl>()), n_(A.rows()) {
  if (A.rows() != A.cols()) throw std::invalid_argument("factorize: matrix must be square");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A.nnz());
  for (const Triplet& e : A.triplets())
    t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
  Eigen::SparseMatrix<double, Eigen::ColMajor> m(static_cast<int>(n_), static_cast<int>(n_));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();

  auto& lu = impl_->lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  const auto& perm = lu.colsPermutation().indices();
  auto original_column = [&](Eigen::Index j) {
    for (Eigen::Index k = 0; k < perm.size(); ++k)
      if (perm(k) == j) return static_cast<std::size_t>(k);
    return static_cast<std::size_t>(j);
  };
  if (lu.info() != Eigen::Success) {
    // Eigen reports the 1-based failing column at the end of the message.
    const std::string msg = lu.lastErrorMessage();
    std::size_t col = 0;
    const auto pos = msg.find_last_not_of("0123456789");
    if (pos != std::string::npos && pos + 1 < msg.size()) col = std::stoul(msg.substr(pos + 1));
    const std::size_t idx = original_column(static_cast<Eigen::Index>(col > 0 ? col - 1 : 0));
    throw SingularMatrixError(idx, "factorize: zero pivot at column " + std::to_string(idx));
  }

  // The diagonal of U lives in the supernodes of the L storage.
  const double scale = A.max_abs();
  min_pivot_ = std::numeric_limits<double>::infinity();
  using Supernodal = std::remove_cvref_t<decltype(lu.matrixL().m_mapL)>;
  const auto& L = lu.matrixL().m_mapL;
  for (Eigen::Index j = 0; j < L.cols(); ++j) {
    double pivot = 0.0;
    for (typename Supernodal::InnerIterator it(L, j); it; ++it)
      if (it.index() == j) {
        pivot = std::abs(it.value());
        break;
      }
    if (pivot < pivot_tolerance * scale) {
      const std::size_t idx = original_column(j);
      throw SingularMatrixError(idx, "factorize: pivot " + std::to_string(pivot) +
                                         " below tolerance at column " + std::to_string(idx));
    }
    min_pivot_ = std::min(min_pivot_, pivot);
  }
}

SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU&&) noexcept = default;
SparseLU& SparseLU::operator=(SparseLU&&) noexcept = default;

std::vector<double> SparseLU::solve(std::span<const double> b) const {
  if (b.size() != n_) throw std::invalid_argument("SparseLU::solve: size mismatch");
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

SparseLU factorize(const CsrMatrix& A) { return SparseLU(A); }

std::vector<double> dense_solve(DenseMatrix A, std::vector<double> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("dense_solve: shape mismatch");
  if (n > 2000) throw std::invalid_argument("dense_solve: n > 2000");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(A(i, j)));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (std::abs(A(p, k)) < SparseLU::pivot_tolerance * scale || A(p, k) == 0.0)
      throw SingularMatrixError(k, "dense_solve: singular at column " + std::to_string(k));
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
    x[k] = s / A(k, k);
  }
  return x;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sdc
