#include <gtest/gtest.h>

#include "nchardy/series.hpp"
#include "test_util.hpp"

using namespace nchardy;
using namespace nchardy::testing;

TEST(Word, DegreeLexOrder) {
  DegLex less;
  EXPECT_TRUE(less(Word(2), Word(2, {2})));
  EXPECT_TRUE(less(Word(2, {2}), Word(2, {1, 1})));
  EXPECT_TRUE(less(Word(2, {1, 2}), Word(2, {2, 1})));
  EXPECT_FALSE(less(Word(2, {2, 1}), Word(2, {2, 1})));
}

TEST(Word, ConcatAndReverse) {
  Word a(3, {1, 3});
  Word b(3, {2});
  EXPECT_EQ(a * b, Word(3, {1, 3, 2}));
  EXPECT_EQ(word_reverse(a * b), Word(3, {2, 3, 1}));
  EXPECT_EQ(Word(3).str(), "()");
}

TEST(Word, RejectsLettersOutsideAlphabet) {
  EXPECT_THROW(Word(2, {3}), DomainError);
  EXPECT_THROW(Word(2, {0}), DomainError);
  EXPECT_THROW(Word(2, {1}) * Word(3, {1}), AlphabetMismatch);
}

TEST(Series, ProductIsNoncommutative) {
  Series z1 = Series::variable(2, 1, 4);
  Series z2 = Series::variable(2, 2, 4);
  Series a = z1 * z2;
  Series b = z2 * z1;
  EXPECT_EQ(a.at(Word(2, {1, 2})), Complex(1));
  EXPECT_EQ(a.at(Word(2, {2, 1})), Complex(0));
  EXPECT_EQ(b.at(Word(2, {2, 1})), Complex(1));
}

TEST(Series, ProductTruncatesAtSmallerDegree) {
  Series f = Series::scalar(1, 1.0, 3) + Series::variable(1, 1, 3);
  Series g = Series::scalar(1, 1.0, 5) + Series::variable(1, 1, 5);
  Series h = f * g;
  EXPECT_EQ(h.maxDegree(), 3);
  // (1 + z)^2 = 1 + 2z + z^2
  EXPECT_EQ(h.at(Word(1, {1})), Complex(2));
  EXPECT_EQ(h.at(Word(1, {1, 1})), Complex(1));
  Series hh = series_mul(h, h);
  EXPECT_EQ(hh.at(Word(1, {1, 1, 1})), Complex(4));
  EXPECT_EQ(hh.degree(), 3);
}

TEST(Series, InverseOfOneMinusSumOfVariables) {
  // (1 - z1 - z2)^{-1} = sum over all words, every coefficient 1.
  const int n = 5;
  Series f = Series::scalar(2, 1.0, n) - Series::variable(2, 1, n) - Series::variable(2, 2, n);
  Series g = series_invert(f);
  FockBasis b(2, n);
  for (Index i = 0; i < b.dim(); ++i) EXPECT_NEAR(std::abs(g.at(b.word(i)) - Complex(1)), 0, 1e-15);
}

TEST(Series, InverseOfMatrixGeometricSeries) {
  std::mt19937_64 rng(1);
  CMatrix a = 0.4 * random_matrix(3, 3, rng);
  const int n = 6;
  Series f = Series::identity(1, 3, n);
  f.set(Word(1, {1}), -a);
  Series g = series_invert(f);
  CMatrix pw = CMatrix::Identity(3, 3);
  for (int k = 0; k <= n; ++k) {
    EXPECT_LT((g.coeff(Word(1, std::vector<int>(std::size_t(k), 1))) - pw).norm(), 1e-13);
    pw = pw * a;
  }
}

TEST(Series, InverseFailsOnSingularConstant) {
  Series z = Series::variable(1, 1, 4);
  EXPECT_THROW(series_invert(z), NotInvertible);
}

TEST(Series, InverseIsTwoSided) {
  std::mt19937_64 rng(2);
  Series f = random_series(2, 2, 2, 2, 6, 0.3, rng);
  f.set(Word(2), CMatrix::Identity(2, 2) + 0.1 * random_matrix(2, 2, rng));
  Series g = series_invert(f);
  Series id = Series::identity(2, 2, 6);
  EXPECT_LT(max_coeff_diff(f * g, id, 6), 1e-12);
  EXPECT_LT(max_coeff_diff(g * f, id, 6), 1e-12);
}

TEST(Series, AlphabetAndShapeChecks) {
  Series a = Series::variable(2, 1, 3);
  Series b = Series::variable(3, 1, 3);
  EXPECT_THROW(a + b, AlphabetMismatch);
  EXPECT_THROW(a * b, AlphabetMismatch);
  Series m(2, 2, 1, 3);
  EXPECT_THROW(m * m, ShapeMismatch);
  EXPECT_THROW(m.set(Word(2), CMatrix::Identity(2, 2)), ShapeMismatch);
}

TEST(Series, WordsBeyondMaxDegreeAreDropped) {
  Series f(1, 1, 1, 2);
  f.set(Word(1, {1, 1, 1}), CMatrix::Ones(1, 1));
  EXPECT_TRUE(f.isZero());
}

TEST(Series, PruneDropsRelativeRoundoff) {
  Series f(1, 1, 1, 3);
  f.set(Word(1), CMatrix::Constant(1, 1, 2.0));
  f.set(Word(1, {1}), CMatrix::Constant(1, 1, 1e-17));
  f.set(Word(1, {1, 1}), CMatrix::Constant(1, 1, 1e-10));
  f.prune();
  EXPECT_EQ(f.coeffs().size(), 2u);
  EXPECT_EQ(f.at(Word(1, {1})), Complex(0));
}

TEST(Series, RescaleMultipliesByPowerOfDegree) {
  Series f = Series::scalar(2, 1.0, 4) + Series::variable(2, 2, 4) + scalar_at(2, {1, 2, 1}, 2.0, 4);
  Series g = rescale(f, 0.5);
  EXPECT_EQ(g.at(Word(2)), Complex(1));
  EXPECT_EQ(g.at(Word(2, {2})), Complex(0.5));
  EXPECT_EQ(g.at(Word(2, {1, 2, 1})), Complex(0.25));
}

TEST(Series, DegreeOrderAndNorm) {
  Series f = scalar_at(2, {1}, Complex(3, 0), 5) + scalar_at(2, {2, 2, 1}, Complex(0, 4), 5);
  EXPECT_EQ(f.order(), 1);
  EXPECT_EQ(f.degree(), 3);
  EXPECT_DOUBLE_EQ(h2_norm(f), 5.0);
  EXPECT_EQ(Series(2, 1, 1, 5).degree(), -1);
}

TEST(Series, BlockOperations) {
  Series f = Series::variable(2, 1, 3);
  Series g = Series::variable(2, 2, 3);
  Series row = hcat(f, g);
  EXPECT_EQ(row.rows(), 1);
  EXPECT_EQ(row.cols(), 2);
  EXPECT_EQ(row.at(Word(2, {2}), 0, 1), Complex(1));
  EXPECT_EQ(entry(row, 0, 0).at(Word(2, {1})), Complex(1));
  EXPECT_EQ(column(row, 1).at(Word(2, {2})), Complex(1));
  Series c = coeff_adjoint(row);
  EXPECT_EQ(c.rows(), 2);
  EXPECT_EQ(c.cols(), 1);
}

TEST(SeriesProperty, ProductIsAssociativeAndDistributive) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    Series f = random_series(2, 2, 2, 2, 5, 1.0, rng);
    Series g = random_series(2, 2, 2, 3, 5, 1.0, rng);
    Series h = random_series(2, 2, 2, 2, 5, 1.0, rng);
    EXPECT_LT(max_coeff_diff((f * g) * h, f * (g * h), 5), 1e-12);
    EXPECT_LT(max_coeff_diff(f * (g + h), f * g + f * h, 5), 1e-12);
  }
}

TEST(SeriesProperty, InverseOfProductReversesOrder) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    Series f = random_series(3, 2, 2, 2, 4, 0.3, rng);
    Series g = random_series(3, 2, 2, 2, 4, 0.3, rng);
    f.set(Word(3), CMatrix::Identity(2, 2));
    g.set(Word(3), 2.0 * CMatrix::Identity(2, 2));
    EXPECT_LT(max_coeff_diff(series_invert(f * g), series_invert(g) * series_invert(f), 4), 1e-10);
  }
}

TEST(SeriesProperty, RescaleIsMultiplicative) {
  std::mt19937_64 rng(9);
  Series f = random_series(2, 1, 1, 3, 6, 1.0, rng);
  Series g = random_series(2, 1, 1, 3, 6, 1.0, rng);
  EXPECT_LT(max_coeff_diff(rescale(f * g, 0.7), rescale(f, 0.7) * rescale(g, 0.7), 6), 1e-12);
}
