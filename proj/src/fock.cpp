#include "nchardy/fock.hpp"

#include <string>

namespace nchardy {

std::vector<Word> words_up_to(int d, int n) {
  std::vector<Word> out{Word(d)};
  std::size_t lo = 0;
  for (int k = 1; k <= n; ++k) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (int a = 1; a <= d; ++a) out.push_back(out[i].append(a));
    lo = hi;
  }
  return out;
}

FockBasis::FockBasis(int d, int maxDegree) : d_(d), n_(maxDegree) {
  if (d < 1) throw DomainError("alphabet size must be positive");
  if (maxDegree < 0) throw DomainError("truncation degree must be nonnegative");
  pow_.push_back(1);
  for (int k = 1; k <= n_ + 1; ++k) pow_.push_back(pow_.back() * d_);
  offs_.push_back(0);
  for (int k = 0; k <= n_; ++k) offs_.push_back(offs_.back() + pow_[static_cast<std::size_t>(k)]);
  words_ = words_up_to(d_, n_);
}

Index FockBasis::dimUpTo(int k) const {
  if (k < 0) return 0;
  if (k > n_) k = n_;
  return offs_[static_cast<std::size_t>(k) + 1];
}

Index FockBasis::lexRank(const Word& w) const {
  Index r = 0;
  for (int a : w.letters()) r = r * d_ + (a - 1);
  return r;
}

Index FockBasis::index(const Word& w) const {
  if (w.alphabet() != d_) throw AlphabetMismatch("word " + w.str() + " does not belong to this basis");
  if (w.size() > n_) throw DomainError("word " + w.str() + " exceeds truncation degree " + std::to_string(n_));
  return offs_[static_cast<std::size_t>(w.size())] + lexRank(w);
}

namespace {

void checkLetter(int k, const FockBasis& basis) {
  if (k < 1 || k > basis.alphabet())
    throw DomainError("shift index " + std::to_string(k) + " outside [1, " + std::to_string(basis.alphabet()) + "]");
}

}  // namespace

OperatorMatrix left_shift(int k, const FockBasis& basis) {
  checkLetter(k, basis);
  return mult_operator(Series::variable(basis.alphabet(), k, basis.maxDegree()), basis);
}

OperatorMatrix right_shift(int k, const FockBasis& basis) {
  checkLetter(k, basis);
  OperatorMatrix a;
  a.basis = basis;
  a.entries = CMatrix::Zero(basis.dim(), basis.dim());
  a.validDegree = basis.maxDegree() - 1;
  for (Index i = 0; i < basis.dim(); ++i) {
    const Word& w = basis.word(i);
    if (w.size() >= basis.maxDegree()) continue;
    a.entries(basis.index(w.append(k)), i) = 1.0;
  }
  return a;
}

CMatrix transpose_unitary(const FockBasis& basis) {
  CMatrix u = CMatrix::Zero(basis.dim(), basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) u(basis.index(word_reverse(basis.word(i))), i) = 1.0;
  return u;
}

OperatorMatrix mult_operator(const Series& f, const FockBasis& basis) {
  if (f.alphabet() != basis.alphabet())
    throw AlphabetMismatch("series over alphabet " + std::to_string(f.alphabet()) + " on a basis over alphabet " +
                           std::to_string(basis.alphabet()));
  const int n = basis.maxDegree();
  const int p = f.rows();
  const int q = f.cols();
  OperatorMatrix a;
  a.basis = basis;
  a.rowCoef = p;
  a.colCoef = q;
  a.entries = CMatrix::Zero(basis.dim() * p, basis.dim() * q);
  int deg = f.degree();
  a.validDegree = deg > n ? -1 : n - std::max(deg, 0);
  for (const auto& [alpha, m] : f.coeffs()) {
    const int la = alpha.size();
    if (la > n) break;
    const Index ra = basis.lexRank(alpha);
    for (int b = 0; la + b <= n; ++b) {
      const Index width = basis.power(b);
      const Index rowBase = basis.offset(la + b) + ra * width;
      const Index colBase = basis.offset(b);
      for (Index j = 0; j < width; ++j) a.entries.block((rowBase + j) * p, (colBase + j) * q, p, q) += m;
    }
  }
  return a;
}

int manageable_degree(int d, int n, Index maxDim) {
  int m = 0;
  Index dim = 1, pw = 1;
  while (m < n) {
    pw *= d;
    if (dim + pw > maxDim) break;
    dim += pw;
    ++m;
  }
  return m;
}

Index window_columns(const OperatorMatrix& a, int degreeLimit) {
  if (degreeLimit > a.validDegree)
    throw WindowError("degree limit " + std::to_string(degreeLimit) + " exceeds the validity window " +
                      std::to_string(a.validDegree));
  return a.basis.dimUpTo(degreeLimit) * a.colCoef;
}

double isometry_defect(const OperatorMatrix& a, int degreeLimit) {
  Index c = window_columns(a, degreeLimit);
  if (c == 0) return 0.0;
  CMatrix b = a.entries.leftCols(c);
  CMatrix g = b.adjoint() * b - CMatrix::Identity(c, c);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double smallest_singular_value(const OperatorMatrix& a, int degreeLimit) {
  Index c = window_columns(a, degreeLimit);
  if (c == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a.entries.leftCols(c));
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double operator_norm(const OperatorMatrix& a, int degreeLimit) {
  Index c = window_columns(a, degreeLimit);
  if (c == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a.entries.leftCols(c));
  return svd.singularValues()(0);
}

CVector to_vector(const Series& f, const FockBasis& basis) {
  if (f.cols() != 1) throw ShapeMismatch("only column series map to Fock vectors");
  const int p = f.rows();
  CVector v = CVector::Zero(basis.dim() * p);
  for (const auto& [w, m] : f.coeffs()) {
    if (w.size() > basis.maxDegree()) break;
    v.segment(basis.index(w) * p, p) = m.col(0);
  }
  return v;
}

Series to_series(const CVector& v, const FockBasis& basis, int coefDim) {
  if (v.size() != basis.dim() * coefDim) throw ShapeMismatch("vector length does not match the basis");
  Series f(basis.alphabet(), coefDim, 1, basis.maxDegree());
  for (Index i = 0; i < basis.dim(); ++i) {
    CMatrix c = v.segment(i * coefDim, coefDim);
    if (c.norm() != 0) f.set(basis.word(i), c);
  }
  return f;
}

}  // namespace nchardy
