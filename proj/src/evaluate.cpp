#include "nchardy/evaluate.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace nchardy {

namespace {

WarningHandler& handler() {
  static WarningHandler h = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

void set_warning_handler(WarningHandler h) { handler() = std::move(h); }

void warn(const std::string& msg) {
  if (handler()) handler()(msg);
}

double row_norm(const std::vector<CMatrix>& z) {
  if (z.empty()) throw ShapeMismatch("empty tuple");
  const Index n = z.front().rows();
  CMatrix row(n, n * static_cast<Index>(z.size()));
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (z[k].rows() != n || z[k].cols() != n)
      throw ShapeMismatch("tuple entry " + std::to_string(k + 1) + " is " + std::to_string(z[k].rows()) + "x" +
                          std::to_string(z[k].cols()) + ", expected " + std::to_string(n) + "x" + std::to_string(n));
    row.middleCols(static_cast<Index>(k) * n, n) = z[k];
  }
  if (n == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(row);
  return svd.singularValues()(0);
}

NcPoint::NcPoint(std::vector<CMatrix> z) : Z(std::move(z)) {
  rowNorm = row_norm(Z);
  d = static_cast<int>(Z.size());
  n = static_cast<int>(Z.front().rows());
}

NcPoint NcPoint::zero(int d, int n) { return NcPoint(std::vector<CMatrix>(std::size_t(d), CMatrix::Zero(n, n))); }

NcPoint NcPoint::scaled(double r) const {
  std::vector<CMatrix> z = Z;
  for (auto& m : z) m *= r;
  return NcPoint(std::move(z));
}

CMatrix eval(const Series& f, const NcPoint& z) {
  if (!z.admissible()) {
    std::ostringstream os;
    os << "point with row norm " << z.rowNorm << " lies outside the open unit ball";
    throw InadmissiblePoint(os.str(), z.rowNorm);
  }
  if (z.rowNorm > kNearBoundaryRowNorm) {
    std::ostringstream os;
    os << "evaluating at row norm " << z.rowNorm << "; truncation tail bounds are weak this close to the boundary";
    warn(os.str());
  }
  return eval_tuple(f, z.Z);
}

double tail_bound(double h2Norm, double s, int n) {
  if (!(s >= 0 && s < 1)) throw DomainError("tail bound needs 0 <= s < 1, got " + std::to_string(s));
  if (s == 0) return 0.0;
  return h2Norm * std::pow(s, n + 1) / std::sqrt(1 - s * s);
}

double tail_bound(const Series& f, double s, int n) { return tail_bound(h2_norm(f), s, n); }

NcPoint direct_sum(const NcPoint& z, const NcPoint& w) {
  if (z.d != w.d) throw AlphabetMismatch("direct sum of tuples of different lengths");
  std::vector<CMatrix> out;
  for (int k = 0; k < z.d; ++k) {
    CMatrix m = CMatrix::Zero(z.n + w.n, z.n + w.n);
    m.topLeftCorner(z.n, z.n) = z.Z[std::size_t(k)];
    m.bottomRightCorner(w.n, w.n) = w.Z[std::size_t(k)];
    out.push_back(m);
  }
  return NcPoint(std::move(out));
}

NcPoint similarity(const NcPoint& z, const CMatrix& s) {
  if (s.rows() != z.n || s.cols() != z.n) throw ShapeMismatch("similarity has the wrong size");
  Eigen::FullPivLU<CMatrix> lu(s);
  if (!lu.isInvertible()) throw NotInvertible("similarity is singular", 0.0);
  CMatrix si = lu.inverse();
  std::vector<CMatrix> out;
  for (const auto& m : z.Z) out.push_back(si * m * s);
  return NcPoint(std::move(out));
}

CMatrix eval_direct_sum(const Series& f, const NcPoint& z, const NcPoint& w) { return eval(f, direct_sum(z, w)); }

CMatrix eval_similarity(const Series& f, const NcPoint& z, const CMatrix& s) { return eval(f, similarity(z, s)); }

}  // namespace nchardy
