#include "nchardy/transforms.hpp"

#include <cmath>

#include "nchardy/factorization.hpp"
#include "nchardy/linalg.hpp"

namespace nchardy {

namespace {

void checkDiskParameter(Complex w) {
  if (!(std::abs(w) < 1)) throw DomainError("transform parameter must satisfy |w| < 1, got |w| = " + std::to_string(std::abs(w)));
}

void requireSquare(const Series& f, const char* what) {
  if (f.rows() != f.cols()) throw ShapeMismatch(std::string(what) + " needs square coefficients");
}

bool vanishesAtZero(const Series& f) { return f.constantTerm().cwiseAbs().maxCoeff() == 0; }

// sum_{k >= 1} coef(k) Theta^k for Theta(0) = 0; the powers run out once their order passes n.
template <class Coef>
Series power_sum(const Series& theta, int n, Coef coef) {
  Series th = theta.withMaxDegree(n);
  Series acc(th.alphabet(), th.rows(), th.cols(), n);
  Series pw = th;
  for (int k = 1; !pw.isZero(); ++k) {
    const Complex c = coef(k);
    if (c != Complex(0))
      for (const auto& [w, m] : pw.coeffs()) acc.add(w, c * m);
    pw = series_mul(pw, th);
  }
  return acc.prune();
}

}  // namespace

Series frostman(const Series& theta, Complex w, int n) {
  checkDiskParameter(w);
  requireSquare(theta, "Frostman shift");
  const int d = theta.alphabet();
  const int q = theta.rows();
  Series shifted = theta.withMaxDegree(n) - Series::constant(d, w * CMatrix::Identity(q, q), n);
  if (!vanishesAtZero(theta)) {
    Series denom = Series::identity(d, q, n) - std::conj(w) * theta.withMaxDegree(n);
    return series_mul(series_invert(denom), shifted);
  }
  // -w + (1 - |w|^2) sum_{k >= 1} conj(w)^{k-1} Theta^k
  const double a = 1 - std::norm(w);
  Series tail = power_sum(theta, n, [&](int k) { return a * std::pow(std::conj(w), k - 1); });
  return (tail + Series::constant(d, -w * CMatrix::Identity(q, q), n)).prune();
}

Series crofoot(const Series& theta, Complex w, int n) {
  checkDiskParameter(w);
  requireSquare(theta, "Crofoot transform");
  const int d = theta.alphabet();
  const int q = theta.rows();
  const double a = std::sqrt(1 - std::norm(w));
  if (!vanishesAtZero(theta)) {
    Series denom = Series::identity(d, q, n) - std::conj(w) * theta.withMaxDegree(n);
    return Complex(a) * series_invert(denom);
  }
  Series tail = power_sum(theta, n, [&](int k) { return a * std::pow(std::conj(w), k); });
  return (tail + Series::constant(d, a * CMatrix::Identity(q, q), n)).prune();
}

CMatrix frostman_value(const CMatrix& thetaZ, Complex w) {
  checkDiskParameter(w);
  const CMatrix id = CMatrix::Identity(thetaZ.rows(), thetaZ.cols());
  return (id - std::conj(w) * thetaZ).partialPivLu().solve(thetaZ - w * id);
}

CMatrix crofoot_value(const CMatrix& thetaZ, Complex w) {
  checkDiskParameter(w);
  const CMatrix id = CMatrix::Identity(thetaZ.rows(), thetaZ.cols());
  return std::sqrt(1 - std::norm(w)) * (id - std::conj(w) * thetaZ).partialPivLu().inverse();
}

EigenShift eigenvector_shift(const CVector& h, const Series& v, Complex w, double r, const FockBasis& basis) {
  if (v.rows() != 1 || v.cols() != 1) throw ShapeMismatch("eigenvector shift needs a scalar V");
  const int deg = v.degree();
  if (deg < 1 || v.order() != deg) throw DomainError("eigenvector shift needs a homogeneous V of positive degree");
  if (!(r < 1 && std::pow(std::abs(w), 1.0 / deg) < r))
    throw DomainError("eigenvector shift needs |w|^{1/n} < r < 1");
  if (h.size() != basis.dim()) throw ShapeMismatch("vector length does not match the basis");
  CMatrix m = mult_operator(v, basis).entries;
  const Complex c = std::conj(w) / std::pow(r, deg);
  // V(L) raises degree, so I - c V(L) is unit lower triangular in degree-lex order.
  CMatrix a = CMatrix::Identity(m.rows(), m.cols()) - c * m;
  EigenShift out;
  out.hr = a.triangularView<Eigen::Lower>().solve(h);
  out.residualDegree = basis.maxDegree() - deg;
  const Index rows = basis.dimUpTo(out.residualDegree);
  CVector res = std::pow(r, deg) * (m.adjoint() * out.hr) - std::conj(w) * out.hr;
  out.residual = rows > 0 ? res.head(rows).norm() : 0.0;
  return out;
}

CMatrix cokernel_frame(const Series& v, const FockBasis& basis) {
  OperatorMatrix m = mult_operator(v, basis);
  const Index rows = basis.dimUpTo(basis.maxDegree() - std::max(v.degree(), 0));
  return null_space(m.entries.adjoint().topRows(rows));
}

Series cayley_herglotz(const Series& b, int n) {
  requireSquare(b, "Cayley transform");
  const int d = b.alphabet();
  const int q = b.rows();
  if (vanishesAtZero(b)) {
    Series tail = power_sum(b, n, [](int) { return Complex(2); });
    return (tail + Series::identity(d, q, n)).prune();
  }
  Series denom = Series::identity(d, q, n) - b.withMaxDegree(n);
  Series inv;
  try {
    inv = series_invert(denom);
  } catch (const NotInvertible& e) {
    throw DomainError("I - B(0) is singular: 1 is an eigenvalue of B(0)");
  }
  return series_mul(inv, Series::identity(d, q, n) + b.withMaxDegree(n));
}

double herglotz_min_eig(const Series& h, const std::vector<NcPoint>& samples) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& z : samples) {
    CMatrix hz = eval(h, z);
    CMatrix re = 0.5 * (hz + hz.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(re, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

Series semigroup_inner(const Series& b, double t, int n) {
  if (b.rows() != 1 || b.cols() != 1) throw ShapeMismatch("semigroup inners are built from scalar B");
  if (!(t >= 0)) throw DomainError("semigroup parameter t must be nonnegative");
  const int d = b.alphabet();
  if (b.at(Word(d)) == Complex(1)) throw DomainError("B(0) = 1: the Cayley transform is undefined");
  if (t == 0) return Series::scalar(d, 1.0, n);
  if (vanishesAtZero(b)) {
    // exp(-t (1 + x)/(1 - x)) = e^{-t} exp(-2t sum_k x^k) as a one-variable series, composed with B.
    const int k = n / std::max(b.order(), 1);
    Series g(1, 1, 1, k);
    for (int j = 1; j <= k; ++j) g.set(Word(1, std::vector<int>(std::size_t(j), 1)), CMatrix::Constant(1, 1, -2 * t));
    Series e = Series::scalar(1, 1.0, k);
    Series pw = Series::scalar(1, 1.0, k);
    for (int m = 1; m <= k; ++m) {
      pw = Complex(1.0 / m) * series_mul(pw, g);
      if (pw.isZero()) break;
      e = e + pw;
    }
    return power_sum(b, n, [&](int j) { return std::exp(-t) * e.at(Word(1, std::vector<int>(std::size_t(j), 1))); }) +
           Series::scalar(d, std::exp(-t), n);
  }
  // exp(-t H) = e^{-t h0} exp(-t (H - h0)); the nilpotent part makes the sum finite.
  Series h = cayley_herglotz(b, n);
  const Complex h0 = h.at(Word(d));
  Series nil = h;
  nil.erase(Word(d));
  Series acc = Series::scalar(d, 1.0, n);
  Series pw = Series::scalar(d, 1.0, n);
  for (int m = 1; m <= n; ++m) {
    pw = Complex(-t / m) * series_mul(pw, nil);
    if (pw.isZero()) break;
    acc = acc + pw;
  }
  return std::exp(-t * h0) * acc;
}

IdempotentSplit idempotent_split(const Series& e, int n, double tol) {
  requireSquare(e, "idempotent split");
  const int d = e.alphabet();
  const int q = e.rows();
  Series ee = e.withMaxDegree(n);
  IdempotentSplit out;
  out.idempotentDefect = max_coeff_diff(series_mul(ee, ee), ee, n);
  if (out.idempotentDefect > tol)
    throw DomainError("series is not idempotent (defect " + std::to_string(out.idempotentDefect) + ")");
  const CMatrix e0 = ee.constantTerm();
  const CMatrix id = CMatrix::Identity(q, q);
  // The rank rule is relative, so a block that is zero up to rounding has to be caught first.
  auto rangeOf = [&](const CMatrix& a) { return a.norm() <= tol ? CMatrix(q, 0) : orthonormal_range(a); };
  CMatrix cm = rangeOf(e0);
  CMatrix ck = rangeOf(id - e0);
  out.m = static_cast<int>(cm.cols());
  out.k = static_cast<int>(ck.cols());
  if (out.m + out.k != q)
    throw Diagnostic("ranges of E(0) and I - E(0) have dimensions " + std::to_string(out.m) + " + " +
                     std::to_string(out.k) + " != " + std::to_string(q));
  auto innerOf = [&](const Series& f, const char* which) {
    SpectralFactor sf = spectral_factor(f, n);
    if (!sf.converged) throw Diagnostic(std::string("spectral factor of ") + which + " did not converge");
    return sf.inner;
  };
  Series complement = Series::identity(d, q, n) - ee;
  if (out.m == 0)
    out.Stilde = innerOf(series_mul(complement, Series::constant(d, ck, n)), "(I - E)");
  else if (out.k == 0)
    out.Stilde = innerOf(series_mul(ee, Series::constant(d, cm, n)), "E");
  else
    out.Stilde = hcat(innerOf(series_mul(ee, Series::constant(d, cm, n)), "E"),
                      innerOf(series_mul(complement, Series::constant(d, ck, n)), "(I - E)"));
  out.S = series_invert(out.Stilde);
  out.P = CMatrix::Zero(q, q);
  out.P.topLeftCorner(out.m, out.m).setIdentity();
  out.validDegree = n;
  Series conj = series_mul(series_mul(out.S, ee), out.Stilde);
  out.residual = max_coeff_diff(conj, Series::constant(d, out.P, n), n);
  return out;
}

}  // namespace nchardy
