#pragma once

#include <map>
#include <vector>

#include "nchardy/series.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

inline constexpr double kNearBoundaryRowNorm = 0.99;

// Largest singular value of the block row [Z_1 ... Z_d].
double row_norm(const std::vector<CMatrix>& z);

// A d-tuple of n x n matrices with its row norm.
struct NcPoint {
  int d = 1;
  int n = 1;
  std::vector<CMatrix> Z;
  double rowNorm = 0;

  NcPoint() = default;
  explicit NcPoint(std::vector<CMatrix> z);
  static NcPoint zero(int d, int n);
  bool admissible() const { return rowNorm < 1.0; }
  NcPoint scaled(double r) const;
};

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
DenseMatrix<Scalar> kron(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
  DenseMatrix<Scalar> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Z^w = Z_{w_1} ... Z_{w_k}, memoized on prefixes.
template <class Scalar>
class WordPowers {
 public:
  explicit WordPowers(const std::vector<DenseMatrix<Scalar>>& z) : z_(z) {
    n_ = z.empty() ? 0 : z.front().rows();
  }
  const DenseMatrix<Scalar>& operator()(const Word& w) {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    DenseMatrix<Scalar> m = w.empty() ? DenseMatrix<Scalar>::Identity(n_, n_)
                                      : DenseMatrix<Scalar>((*this)(w.prefix()) * z_[std::size_t(w[w.size() - 1] - 1)]);
    return memo_.emplace(w, std::move(m)).first->second;
  }

 private:
  const std::vector<DenseMatrix<Scalar>>& z_;
  Eigen::Index n_;
  std::map<Word, DenseMatrix<Scalar>, DegLex> memo_;
};

// Sum over stored words of kron(Z^w, f_w): level index major, coefficient index minor.
// No admissibility check; polynomials can be evaluated anywhere.
template <class Scalar>
DenseMatrix<Scalar> eval_tuple(const BasicSeries<Scalar>& f, const std::vector<DenseMatrix<Scalar>>& z) {
  if (static_cast<int>(z.size()) != f.alphabet())
    throw AlphabetMismatch("series in " + std::to_string(f.alphabet()) + " variables evaluated at a " +
                           std::to_string(z.size()) + "-tuple");
  const Eigen::Index n = z.empty() ? 1 : z.front().rows();
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(n * f.rows(), n * f.cols());
  WordPowers<Scalar> pw(z);
  const bool scalarCoef = f.rows() == 1 && f.cols() == 1;
  for (const auto& [w, c] : f.coeffs()) {
    if (scalarCoef)
      out += c(0, 0) * pw(w);
    else
      out += kron<Scalar>(pw(w), c);
  }
  return out;
}

// Evaluation at an admissible point; warns near the boundary, throws outside the ball.
CMatrix eval(const Series& f, const NcPoint& z);

// Bound on ||f(Z) - f_{<=N}(Z)|| for row norm <= s.
double tail_bound(const Series& f, double s, int n);
double tail_bound(double h2Norm, double s, int n);

NcPoint direct_sum(const NcPoint& z, const NcPoint& w);
// S^{-1} Z S, componentwise.
NcPoint similarity(const NcPoint& z, const CMatrix& s);

CMatrix eval_direct_sum(const Series& f, const NcPoint& z, const NcPoint& w);
CMatrix eval_similarity(const Series& f, const NcPoint& z, const CMatrix& s);

}  // namespace nchardy
