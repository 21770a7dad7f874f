#include <gtest/gtest.h>

#include <random>

#include "sdc/linalg.hpp"

using namespace sdc;

TEST(Spmv, IdentityAndZero) {
  const std::vector<double> x{1.5, -2.0, 3.25};
  EXPECT_EQ(spmv(CsrMatrix::identity(3), x), x);
  const auto y = spmv(CsrMatrix(3, 3), x);
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(Spmv, RandomMatchesDense) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if ((i + 2 * j) % 3) t.push_back({i, j, U(rng)});
  const CsrMatrix A = CsrMatrix::from_triplets(5, 5, t);
  const DenseMatrix D = A.to_dense();
  std::vector<double> x(5);
  for (double& v : x) v = U(rng);
  const auto y = spmv(A, x);
  for (std::size_t i = 0; i < 5; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 5; ++j) s += D(i, j) * x[j];
    EXPECT_NEAR(y[i], s, 1e-14);
  }
}

TEST(Spmv, DuplicateTripletsAreSummed) {
  const CsrMatrix A = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 4.0}});
  EXPECT_EQ(A(0, 0), 3.0);
  EXPECT_EQ(A.nnz(), 2u);
}

TEST(Factorize, Diagonal) {
  const CsrMatrix A = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {1, 1, 4.0}});
  const auto x = factorize(A).solve(std::vector<double>{2.0, 8.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 2.0, 1e-15);
}

TEST(Factorize, SaddlePoint) {
  const CsrMatrix A = CsrMatrix::from_triplets(
      3, 3, {{0, 0, 1}, {0, 2, 1}, {1, 1, 1}, {1, 2, 1}, {2, 0, 1}, {2, 1, 1}});
  const auto x = factorize(A).solve(std::vector<double>{2, 3, 3});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 2.0, 1e-14);
  EXPECT_NEAR(x[2], 1.0, 1e-14);
}

TEST(Factorize, SingularThrows) {
  const CsrMatrix A = CsrMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
  EXPECT_THROW(factorize(A), SingularMatrixError);
  DenseMatrix D(2, 2);
  D(0, 0) = D(0, 1) = D(1, 0) = D(1, 1) = 1.0;
  EXPECT_THROW(dense_solve(D, {1.0, 1.0}), SingularMatrixError);
}

TEST(Factorize, MatchesDenseOn500Unknowns) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<std::size_t> J(0, 499);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 500; ++i) {
    t.push_back({i, i, 5.0});
    for (int k = 0; k < 5; ++k) t.push_back({i, J(rng), U(rng)});
  }
  const CsrMatrix A = CsrMatrix::from_triplets(500, 500, t);
  std::vector<double> b(500);
  for (double& v : b) v = U(rng);
  const auto x = factorize(A).solve(b);
  const auto y = dense_solve(A.to_dense(), b);
  std::vector<double> d(500);
  for (std::size_t i = 0; i < 500; ++i) d[i] = x[i] - y[i];
  EXPECT_LE(norm2(d) / norm2(y), 1e-9);
  const auto r = spmv(A, x);
  for (std::size_t i = 0; i < 500; ++i) d[i] = r[i] - b[i];
  EXPECT_LE(norm2(d) / norm2(b), 1e-12);
}

TEST(Csr, TransposeAndAdd) {
  const CsrMatrix A = CsrMatrix::from_triplets(2, 3, {{0, 1, 2.0}, {1, 2, -1.0}});
  const CsrMatrix T = A.transposed();
  EXPECT_EQ(T.rows(), 3u);
  EXPECT_EQ(T(1, 0), 2.0);
  EXPECT_EQ(T(2, 1), -1.0);
  const CsrMatrix S = add(A, 2.0, A, -1.0);
  EXPECT_EQ(S(0, 1), 2.0);
}
