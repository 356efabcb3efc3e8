#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "salscp/coo_io.hpp"
#include "salscp/errors.hpp"
#include "salscp/kernels.hpp"
#include "salscp/shape.hpp"
#include "salscp/tensor.hpp"

using namespace salscp;

TEST(Shape, RejectsInvalidDims) {
  EXPECT_THROW(Shape({4}), std::invalid_argument);
  EXPECT_THROW(Shape({3, 0, 2}), std::invalid_argument);
  const std::size_t big = std::numeric_limits<std::size_t>::max() / 2;
  EXPECT_THROW(Shape({big, 3}), std::invalid_argument);
}

TEST(Shape, ColumnMajorIndexing) {
  const Shape s{2, 3, 4};
  EXPECT_EQ(s.size(), 24u);
  EXPECT_EQ(s.stride(0), 1u);
  EXPECT_EQ(s.stride(1), 2u);
  EXPECT_EQ(s.stride(2), 6u);
  const std::size_t idx[] = {1, 2, 3};
  EXPECT_EQ(s.linear_index(idx), 1u + 2u * 2u + 3u * 6u);
  std::size_t back[3];
  s.multi_index(s.linear_index(idx), back);
  EXPECT_EQ(back[0], 1u);
  EXPECT_EQ(back[1], 2u);
  EXPECT_EQ(back[2], 3u);
  const std::size_t bad[] = {2, 0, 0};
  EXPECT_THROW((void)s.linear_index(bad), std::out_of_range);
  EXPECT_THROW(s.check_mode(3), std::out_of_range);
}

TEST(Matrix, ValidatesValues) {
  EXPECT_THROW(Matrix(2, 2, std::vector<double>{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(Matrix(1, 1, std::vector<double>{std::nan("")}), std::invalid_argument);
  const Matrix m{{1, 2}, {3, 4}};
  EXPECT_EQ(m(1, 0), 3.0);
}

TEST(DenseTensor, ValidatesValues) {
  EXPECT_THROW(DenseTensor(Shape{2, 2}, std::vector<double>(3)), std::invalid_argument);
  EXPECT_THROW(DenseTensor(Shape{1, 1}, std::vector<double>{INFINITY}), std::invalid_argument);
}

TEST(FrobeniusNorm, Examples) {
  EXPECT_EQ(frobenius_norm(DenseTensor(Shape{3, 4})), 0.0);
  EXPECT_EQ(frobenius_norm(SparseTensor(Shape{3, 4})), 0.0);
  EXPECT_DOUBLE_EQ(frobenius_norm(Matrix{{3, 0}, {0, 4}}), 5.0);

  oracle::Rng rng(1);
  const DenseTensor t = rng.dense(Shape{4, 5, 6});
  double acc = 0.0;
  for (double v : t.values()) acc += v * v;
  EXPECT_NEAR(frobenius_norm(t), std::sqrt(acc), 1e-12 * std::sqrt(acc));
  EXPECT_NEAR(frobenius_norm(SparseTensor::from_dense(t)), std::sqrt(acc), 1e-12 * std::sqrt(acc));
}

TEST(Unfold, MatrixModes) {
  oracle::Rng rng(2);
  const DenseTensor t = rng.dense(Shape{3, 5});
  const Matrix a0 = unfold(t, 0);
  const Matrix a1 = unfold(t, 1);
  ASSERT_EQ(a0.rows(), 3u);
  ASSERT_EQ(a1.rows(), 5u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(a0(i, j), t[i + 3 * j]);
      EXPECT_EQ(a1(j, i), t[i + 3 * j]);
    }
}

TEST(Unfold, TwoByTwoByTwoExample) {
  DenseTensor t(Shape{2, 2, 2});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) t[i + 2 * j + 4 * k] = static_cast<double>(i + 2 * j + 4 * k);
  const Matrix u = unfold(t, 0);
  ASSERT_EQ(u.rows(), 2u);
  ASSERT_EQ(u.cols(), 4u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(u(i, j + 2 * k), static_cast<double>(i + 2 * j + 4 * k));
}

TEST(Unfold, MatchesIndexFormulaAndPreservesNorm) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = rng.shape(rng.index(2, 4), 5);
    const DenseTensor t = rng.dense(s);
    const SparseTensor st = SparseTensor::from_dense(t);
    for (std::size_t m = 0; m < s.order(); ++m) {
      const Matrix u = unfold(t, m);
      EXPECT_EQ(u, oracle::unfold(t, m));
      EXPECT_EQ(unfold(st, m).to_dense(), u);
      EXPECT_NEAR(frobenius_norm(u), frobenius_norm(t), 1e-12 * frobenius_norm(t));
    }
    EXPECT_THROW(unfold(t, s.order()), std::out_of_range);
  }
}

TEST(KhatriRao, Examples) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(khatri_rao(a, b), (Matrix{{0, 2}, {1, 0}, {0, 4}, {3, 0}}));
  const Matrix ones{{1, 1}};
  EXPECT_EQ(khatri_rao(ones, b), b);
  EXPECT_THROW(khatri_rao(a, Matrix(2, 3)), std::invalid_argument);

  oracle::Rng rng(4);
  const Matrix x = rng.matrix(3, 2);
  const Matrix y = rng.matrix(4, 2);
  const Matrix k = khatri_rao(x, y);
  for (std::size_t j = 0; j < 2; ++j) {
    double nk = 0, nx = 0, ny = 0;
    for (std::size_t i = 0; i < k.rows(); ++i) nk += k(i, j) * k(i, j);
    for (std::size_t i = 0; i < 3; ++i) nx += x(i, j) * x(i, j);
    for (std::size_t i = 0; i < 4; ++i) ny += y(i, j) * y(i, j);
    EXPECT_NEAR(std::sqrt(nk), std::sqrt(nx) * std::sqrt(ny), 1e-12 * std::sqrt(nk));
  }
}

TEST(KhatriRao, GramIdentity) {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = rng.index(1, 4);
    const Matrix a = rng.matrix(rng.index(1, 6), r);
    const Matrix b = rng.matrix(rng.index(1, 6), r);
    const Matrix k = khatri_rao(a, b);
    const Matrix lhs = oracle::matmul(oracle::transpose(k), k);
    const Matrix ga = oracle::matmul(oracle::transpose(a), a);
    const Matrix gb = oracle::matmul(oracle::transpose(b), b);
    Matrix rhs(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) rhs(i, j) = ga(i, j) * gb(i, j);
    EXPECT_LE(oracle::rel_diff(lhs, rhs), 1e-12);
  }
}

TEST(Hadamard, Examples) {
  oracle::Rng rng(6);
  const Matrix a = rng.matrix(3, 3);
  EXPECT_EQ(hadamard(a, Matrix(3, 3, 1.0)), a);
  EXPECT_EQ(hadamard(a, Matrix(3, 3, 0.0)), Matrix(3, 3, 0.0));
  const Matrix b = rng.matrix(3, 3);
  const Matrix h = hadamard(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), a(i, j) * b(i, j));
  EXPECT_THROW(hadamard(a, Matrix(3, 2)), std::invalid_argument);
}

TEST(Mttkrp, ZeroTensorGivesZero) {
  oracle::Rng rng(7);
  const Shape s{3, 4, 5};
  const auto m = rng.model(s, 2);
  for (std::size_t mode = 0; mode < 3; ++mode) {
    EXPECT_EQ(mttkrp(DenseTensor(s), m.factors(), mode), Matrix(s.dim(mode), 2));
    EXPECT_EQ(mttkrp(SparseTensor(s), m.factors(), mode), Matrix(s.dim(mode), 2));
  }
}

TEST(Mttkrp, MatrixCaseIsMatrixVectorProduct) {
  oracle::Rng rng(8);
  const DenseTensor x = rng.dense(Shape{4, 3});
  const Matrix a1 = rng.matrix(4, 1);
  const Matrix a2 = rng.matrix(3, 1);
  const std::vector<Matrix> f{a1, a2};
  const Matrix got = mttkrp(x, f, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 3; ++j) s += x[i + 4 * j] * a2(j, 0);
    EXPECT_NEAR(got(i, 0), s, 1e-14);
  }
}

TEST(Mttkrp, MatchesExplicitTheta) {
  oracle::Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s = rng.shape(rng.index(2, 4), 5);
    const std::size_t r = rng.index(1, 4);
    const auto m = rng.model(s, r);
    const std::vector<Matrix> f(m.factors().begin(), m.factors().end());
    const DenseTensor d = rng.dense(s);
    const SparseTensor sp = rng.sparse(s, 0.4);
    for (std::size_t mode = 0; mode < s.order(); ++mode) {
      const Matrix th = oracle::theta(f, mode);
      EXPECT_LE(oracle::rel_diff(mttkrp(d, f, mode), oracle::matmul(oracle::unfold(d, mode), th)), 1e-12);
      const Matrix sparse_ref = oracle::matmul(oracle::unfold(sp.to_dense(), mode), th);
      EXPECT_LE(oracle::rel_diff(mttkrp(sp, f, mode), sparse_ref), 1e-12);
      EXPECT_LE(oracle::rel_diff(mttkrp(sp, f, mode), mttkrp(sp.to_dense(), f, mode)), 1e-12);
    }
  }
}

TEST(Mttkrp, RejectsMismatchedFactors) {
  oracle::Rng rng(10);
  const DenseTensor x = rng.dense(Shape{3, 4, 5});
  std::vector<Matrix> f{rng.matrix(3, 2), rng.matrix(4, 2), rng.matrix(5, 3)};
  EXPECT_THROW(mttkrp(x, f, 0), std::invalid_argument);
  f[2] = rng.matrix(6, 2);
  EXPECT_THROW(mttkrp(x, f, 0), std::invalid_argument);
  f.pop_back();
  EXPECT_THROW(mttkrp(x, f, 0), std::invalid_argument);
}

TEST(SparseTensor, MergesDuplicatesAndDropsZeros) {
  const Shape s{3, 3};
  const std::size_t idx[] = {0, 0, 1, 2, 0, 0, 2, 2, 1, 2};
  const double vals[] = {1.0, 2.0, 3.0, 0.0, -2.0};
  const SparseTensor t = SparseTensor::from_coordinates(s, idx, vals);
  ASSERT_EQ(t.nnz(), 1u);
  EXPECT_EQ(t.offsets()[0], 0u);
  EXPECT_EQ(t.values()[0], 4.0);

  const std::size_t oob[] = {3, 0};
  const double one[] = {1.0};
  EXPECT_THROW(SparseTensor::from_coordinates(s, oob, one), std::out_of_range);
}

TEST(SparseTensor, DuplicateListEqualsDenseAccumulation) {
  oracle::Rng rng(11);
  const Shape s{4, 3, 5};
  std::vector<std::size_t> idx;
  std::vector<double> vals;
  DenseTensor acc(s);
  for (int e = 0; e < 200; ++e) {
    std::vector<std::size_t> i{rng.index(0, 3), rng.index(0, 2), rng.index(0, 4)};
    const double v = rng.uniform();
    idx.insert(idx.end(), i.begin(), i.end());
    vals.push_back(v);
    acc[oracle::encode(s, i)] += v;
  }
  const SparseTensor t = SparseTensor::from_coordinates(s, idx, vals);
  EXPECT_LE(oracle::rel_diff(t.to_dense().values(), acc.values()), 1e-15);
  for (std::size_t e = 0; e < t.nnz(); ++e) EXPECT_NE(t.values()[e], 0.0);
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t e = 0; e < t.nnz(); ++e)
      EXPECT_EQ(t.mode_indices(m)[e], oracle::decode(s, t.offsets()[e])[m]);
}

TEST(CooIo, RoundTrip) {
  oracle::Rng rng(12);
  const SparseTensor t = rng.sparse(Shape{3, 4, 2}, 0.5);
  std::stringstream ss;
  write_coo(ss, t);
  EXPECT_EQ(read_coo(ss), t);
}

TEST(CooIo, ParsesCommentsAndDuplicates) {
  std::istringstream in("# header comment\n3 2 2 2 3\n0 0 0 1.5\n\n# entry\n1 1 1 2e0\n0 0 0 0.5\n");
  const SparseTensor t = read_coo(in);
  EXPECT_EQ(t.nnz(), 2u);
  EXPECT_EQ(t.to_dense()[0], 2.0);
  EXPECT_EQ(t.to_dense()[7], 2.0);
}

TEST(CooIo, RejectsMalformedInput) {
  const char* bad[] = {
      "",                               // no header
      "3 2 2 2 1\n0 0 0\n",             // short entry
      "3 2 2 2 1\n0 0 2 1.0\n",         // out of bounds
      "3 2 2 2 2\n0 0 0 1.0\n",         // missing entry
      "3 2 2 2 1\n0 0 0 1.0\n1 1 1 1\n",  // trailing entry
      "3 2 2 2 1\n0 0 0 nan\n",         // non-finite
      "3 2 x 2 1\n0 0 0 1.0\n",         // bad dimension
      "1 2 1\n0 1.0\n",                 // order 1
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_coo(in), ParseError) << text;
  }
}

TEST(CooIo, ReadsDataFile) {
  const SparseTensor t = read_coo(std::filesystem::path(SALSCP_TEST_DATA_DIR) / "small.coo");
  EXPECT_EQ(t.shape(), (Shape{2, 3, 2}));
  EXPECT_EQ(t.nnz(), 4u);
}
