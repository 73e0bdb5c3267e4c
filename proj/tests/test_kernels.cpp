#include <gtest/gtest.h>

#include "nchardy/factorization.hpp"
#include "nchardy/kernels.hpp"
#include "test_util.hpp"

using namespace nchardy;
using namespace nchardy::testing;

TEST(SzegoKernel, ScalarCaseIsGeometric) {
  const Complex w(0.3, 0.4);
  NcPoint z({CMatrix::Constant(1, 1, w)});
  CVector one = CVector::Ones(1);
  KernelVector k = szego_kernel(z, one, one, 10);
  Complex pw = 1;
  for (int j = 0; j <= 10; ++j) {
    Word wj(1, std::vector<int>(std::size_t(j), 1));
    EXPECT_LT(std::abs(k.series.at(wj) - std::conj(pw)), 1e-15);
    EXPECT_LT(std::abs(pairing(k.series, Series::monomial(wj, 1.0, 10)) - pw), 1e-15);
    pw *= w;
  }
}

TEST(SzegoKernel, PairingClosedFormMatchesSum) {
  // d = 1: <K_w, K_u> = 1 / (1 - w conj(u)).
  const Complex w(0.5, -0.2), u(-0.3, 0.6);
  NcPoint zw({CMatrix::Constant(1, 1, w)});
  NcPoint zu({CMatrix::Constant(1, 1, u)});
  CVector one = CVector::Ones(1);
  const Complex exact = 1.0 / (1.0 - w * std::conj(u));
  EXPECT_LT(std::abs(kernel_pairing(zw, one, one, zu, one, one) - exact), 1e-14);
  std::mt19937_64 rng(31);
  NcPoint a = random_point(2, 3, 0.6, rng);
  NcPoint b = random_point(2, 2, 0.5, rng);
  CVector y = random_vector(3, rng), v = random_vector(3, rng), x = random_vector(2, rng), uu = random_vector(2, rng);
  // Words of length > 40 contribute at most (0.6 * 0.5)^41 times the vector norms.
  const Complex full = kernel_pairing(a, y, v, b, x, uu);
  EXPECT_LT(std::abs(full - kernel_pairing(a, y, v, b, x, uu, 40)), 1e-12);
  const Complex summed = pairing(szego_kernel(a, y, v, 10).series, szego_kernel(b, x, uu, 10).series);
  EXPECT_LT(std::abs(kernel_pairing(a, y, v, b, x, uu, 10) - summed), 1e-12);
}

TEST(ModelKernel, VanishingThetaGivesSzegoKernel) {
  Series theta = Series::variable(2, 1, 6);
  NcPoint z = NcPoint::zero(2, 1);
  CVector one = CVector::Ones(1);
  KernelVector m = model_kernel(theta, z, one, one, 6);
  KernelVector k = szego_kernel(z, one, one, 6);
  EXPECT_LT(max_coeff_diff(m.series, k.series, 5), 1e-15);
}

TEST(ModelKernel, PairingFromValuesMatchesSeries) {
  std::mt19937_64 rng(32);
  // Row norms 0.3 leave a truncation error of order 0.09^12.
  const int n = 12;
  Series theta = commutator(n);
  NcPoint z = random_point(2, 2, 0.3, rng), w = random_point(2, 2, 0.3, rng);
  CVector y = random_vector(2, rng), v = random_vector(2, rng), x = random_vector(2, rng), u = random_vector(2, rng);
  KernelVector kz = model_kernel(theta, z, y, v, n);
  KernelVector kw = model_kernel(theta, w, x, u, n);
  const Complex fromValues = model_kernel_pairing(eval(theta, z), eval(theta, w), z, y, v, w, x, u);
  EXPECT_LT(std::abs(pairing(kz.series, kw.series) - fromValues), 1e-8);
}

TEST(ModelKernel, RejectsNonInner) {
  Series notInner = Series::monomial(Word(1, {1}), 0.5, 6);
  NcPoint z = NcPoint::zero(1, 1);
  CVector one = CVector::Ones(1);
  EXPECT_THROW(model_kernel(notInner, z, one, one, 6), DomainError);
}

TEST(Membership, ZeroOfVariable) {
  Series h = Series::variable(2, 1, 3);
  CVector one = CVector::Ones(1);
  EXPECT_TRUE(sing_membership(h, NcPoint::zero(2, 1), one, 1e-12).member);
  Series g = Series::scalar(2, 1.0, 3) - Series::variable(2, 1, 3);
  NcPoint p({CMatrix::Constant(1, 1, 0.5), CMatrix::Zero(1, 1)});
  Membership m = sing_membership(g, p, one, 1e-12);
  EXPECT_FALSE(m.member);
  EXPECT_NEAR(m.residual, 0.5, 1e-15);
}

TEST(Membership, ClosureUnderSumsAndSimilarities) {
  // H = z1 - 1/2: (Z, y) with y^* Z1 = y^*/2.
  Series h = Series::variable(2, 1, 2) - Series::scalar(2, 0.5, 2);
  std::mt19937_64 rng(33);
  auto make = [&](int n) {
    CMatrix s = CMatrix::Identity(n, n) + 0.1 * random_matrix(n, n, rng);
    CMatrix d = CMatrix::Zero(n, n);
    d(0, 0) = 0.5;
    for (int i = 1; i < n; ++i) d(i, i) = 0.2;
    CMatrix z1 = s.inverse() * d * s;
    CVector y = s.adjoint() * CVector::Unit(n, 0);
    CMatrix z2 = 0.1 * random_matrix(n, n, rng);
    return SingularityPair{NcPoint({z1, z2}), y};
  };
  SingularityPair a = make(2), b = make(3);
  ASSERT_TRUE(sing_membership(h, a.Z, a.y, 1e-10).member);
  ASSERT_TRUE(sing_membership(h, b.Z, b.y, 1e-10).member);
  SingularityPair sum = sing_closure_direct_sum(a, b, Complex(0.3, 0.7));
  EXPECT_TRUE(sing_membership(h, sum.Z, sum.y, 1e-10).member);
  CMatrix s = CMatrix::Identity(2, 2) + 0.1 * random_matrix(2, 2, rng);
  SingularityPair sim = sing_closure_similarity(a, s);
  EXPECT_TRUE(sing_membership(h, sim.Z, sim.y, 1e-10).member);
  // Transforming y by the inverse adjoint instead leaves the locus.
  CVector other = s.adjoint().inverse() * a.y;
  EXPECT_FALSE(sing_membership(h, sim.Z, other, 1e-10).member);
}

TEST(SingSpace, VacuumKernelSpansConstants) {
  CMatrix k = sing_space_complement({SingularityPair{NcPoint::zero(2, 1), CVector::Ones(1)}}, 2, 3);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(0, 0)), 1, 1e-15);
}

TEST(SingSpace, ComplementIsOrthogonalToRange) {
  // Theta = z (1 - z/2) vanishes at 0 only inside the disk.
  Series theta = Series::variable(1, 1, 8) * (Series::scalar(1, 1.0, 8) - Complex(0.5) * Series::variable(1, 1, 8));
  SingularityPair atZero{NcPoint::zero(1, 1), CVector::Ones(1)};
  SingularityPair elsewhere{NcPoint({CMatrix::Constant(1, 1, 2.0 / 3.0)}), CVector::Ones(1)};
  CMatrix k = sing_space_complement({atZero}, 1, 8);
  OperatorMatrix a = mult_operator(theta, FockBasis(1, 8));
  EXPECT_LT((k.adjoint() * a.entries.leftCols(window_columns(a, a.validDegree))).norm(), 1e-15);
  EXPECT_EQ(sing_space_complement({atZero, elsewhere}, 1, 8).cols(), 2);
}

TEST(Compression, StaysInLocus) {
  Series p = Series::variable(2, 1, 2) * Series::variable(2, 2, 2) - Series::scalar(2, 0.1, 2);
  std::mt19937_64 rng(34);
  // y^* Z1 = 0.2 y^* and y^* Z2 = 0.5 y^*, so y^* Z1 Z2 = 0.1 y^*.
  const int n = 4;
  CVector y = random_vector(n, rng);
  y /= y.norm();
  CMatrix r = 0.05 * random_matrix(n, n, rng);
  r -= y * (y.adjoint() * r);
  CMatrix z1 = 0.2 * CMatrix::Identity(n, n) + r;
  CMatrix z2 = 0.5 * CMatrix::Identity(n, n) + (CMatrix::Identity(n, n) - y * y.adjoint()) * 0.05 * random_matrix(n, n, rng);
  NcPoint z({z1, z2});
  ASSERT_TRUE(sing_membership(p, z, y, 1e-10).member);
  Compression c = compress_to_finite(z, y, p);
  EXPECT_LE(c.X.n, n);
  EXPECT_TRUE(sing_membership(p, c.X, c.x, 1e-10).member);
  EXPECT_NEAR(c.x.norm(), y.norm(), 1e-12);
}

TEST(ExtendedMembership, OrdinaryMembersAreExtendedMembers) {
  Series h = Series::variable(2, 1, 3);
  CVector one = CVector::Ones(1);
  EXPECT_TRUE(extended_membership(h, NcPoint::zero(2, 1), one, one, 1e-12).member);
}

TEST(Search, FoundPairsAreVerified) {
  Series h = Series::variable(2, 1, 2) - Series::scalar(2, 0.5, 2);
  std::mt19937_64 rng(35);
  SearchOptions opt;
  opt.level = 2;
  opt.starts = 4;
  auto pairs = find_singular_pairs(h, opt, rng);
  EXPECT_FALSE(pairs.empty());
  for (const auto& p : pairs) {
    EXPECT_TRUE(sing_membership(h, p.Z, p.y, 1e-8).member);
    EXPECT_LT(p.Z.rowNorm, 1.0);
  }
}

TEST(Search, UnipotentShapeFindsNothingWhenConstantIsInvertible) {
  Series h = Series::variable(2, 1, 2) - Series::scalar(2, 0.5, 2);
  std::mt19937_64 rng(36);
  SearchOptions opt;
  opt.shape = TupleShape::StrictlyUpper;
  opt.starts = 2;
  EXPECT_TRUE(find_singular_pairs(h, opt, rng).empty());
}

TEST(KernelProperty, ReproducingRescalingAdjointAndNorm) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 25; ++t) {
    const int d = 1 + t % 3;
    const int n = 1 + t % 3;
    const int deg = 3;
    const int big = d == 3 ? 8 : 12;
    NcPoint z = random_point(d, n, 0.6, rng);
    CVector y = random_vector(n, rng), v = random_vector(n, rng);
    Series f = random_series(d, 1, 1, deg, big, 1.0, rng);
    KernelVector k = szego_kernel(z, y, v, big);
    // <K, f> = y^* f(Z) v
    const Complex lhs = pairing(k.series, f);
    const Complex rhs = (y.adjoint() * eval(f, z) * v)(0, 0);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
    // rescale(K{Z}) = K{rZ}
    EXPECT_LT(max_coeff_diff(rescale(k.series, 0.5), szego_kernel(z.scaled(0.5), y, v, big).series, big), 1e-15);
    // H(L)^* K{Z,y,v} = K{Z, H(Z)^* y, v} on degrees <= N - deg H
    CVector hy = eval(f, z).adjoint() * y;
    EXPECT_LT(max_coeff_diff(adjoint_apply(f, k.series), szego_kernel(z, hy, v, big).series, big - deg), 1e-10);
    // ||K||^2 <= ||y||^2 ||v||^2 / (1 - rowNorm^2)
    const double norm2 = std::real(kernel_pairing(z, y, v, z, y, v));
    EXPECT_LE(norm2, y.squaredNorm() * v.squaredNorm() / (1 - z.rowNorm * z.rowNorm) * (1 + 1e-12));
  }
}
