#include "nchardy/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace nchardy {

// Eigen 3.4's BDCSVD returns inaccurate singular vectors on matrices with many repeated or zero
// singular values, so ranges and null spaces come from column-pivoted QR instead.
CMatrix orthonormal_range(const CMatrix& a, double relTol) {
  if (a.cols() == 0 || a.rows() == 0) return CMatrix(a.rows(), 0);
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  qr.setThreshold(relTol);
  const Eigen::Index r = qr.maxPivot() == 0 ? 0 : qr.rank();
  CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), r);
  return q;
}

CMatrix orthogonal_complement(const CMatrix& frame, Eigen::Index ambient) {
  if (frame.cols() == 0) return CMatrix::Identity(ambient, ambient);
  Eigen::HouseholderQR<CMatrix> qr(frame);
  CMatrix q = qr.householderQ() * CMatrix::Identity(ambient, ambient);
  return q.rightCols(ambient - frame.cols());
}

CMatrix null_space(const CMatrix& a, double relTol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return CMatrix::Identity(n, n);
  return orthogonal_complement(orthonormal_range(a.adjoint(), relTol), n);
}

CMatrix hermitian_sqrt(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double sigma_min(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double sigma_max(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace nchardy
