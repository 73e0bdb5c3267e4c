#include "nchardy/kernels.hpp"

#include "nchardy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace nchardy {

Complex pairing(const Series& f, const Series& g) {
  if (f.rows() != g.rows() || f.cols() != g.cols()) throw ShapeMismatch("pairing series of different shapes");
  Complex s = 0;
  for (const auto& [w, a] : f.coeffs()) {
    auto it = g.coeffs().find(w);
    if (it != g.coeffs().end()) s += (a.adjoint() * it->second).trace();
  }
  return s;
}

namespace {

void checkVectors(const NcPoint& z, const CVector& y, const CVector& v) {
  if (y.size() != z.n || v.size() != z.n)
    throw ShapeMismatch("kernel vectors must have length " + std::to_string(z.n));
}

}  // namespace

KernelVector szego_kernel(const NcPoint& z, const CVector& y, const CVector& v, int n) {
  checkVectors(z, y, v);
  if (!z.admissible()) throw InadmissiblePoint("kernel at a point outside the ball", z.rowNorm);
  KernelVector k{Series(z.d, 1, 1, n), z, y, v};
  // Level by level: row vectors y^* Z^w, extended on the right by one letter at a time.
  std::vector<std::pair<Word, Eigen::RowVectorXcd>> level{{Word(z.d), y.adjoint()}};
  for (int deg = 0; deg <= n; ++deg) {
    std::vector<std::pair<Word, Eigen::RowVectorXcd>> next;
    for (const auto& [w, row] : level) {
      Complex c = std::conj(Complex(row * v));
      if (c != Complex(0)) k.series.set(w, CMatrix::Constant(1, 1, c));
      if (deg < n)
        for (int a = 1; a <= z.d; ++a) {
          Eigen::RowVectorXcd r = row * z.Z[std::size_t(a - 1)];
          if (r.squaredNorm() > 0) next.emplace_back(w.append(a), std::move(r));
        }
    }
    level = std::move(next);
  }
  return k;
}

Complex kernel_pairing(const NcPoint& z, const CVector& y, const CVector& v, const NcPoint& w, const CVector& x,
                       const CVector& u, int n) {
  checkVectors(z, y, v);
  checkVectors(w, x, u);
  if (z.d != w.d) throw AlphabetMismatch("kernel pairing across different alphabets");
  CMatrix c = v * u.adjoint();
  if (n >= 0) {
    CMatrix acc = c;
    for (int j = 0; j < n; ++j) {
      CMatrix next = c;
      for (int k = 0; k < z.d; ++k) next += z.Z[std::size_t(k)] * acc * w.Z[std::size_t(k)].adjoint();
      acc = std::move(next);
    }
    return Complex(y.adjoint() * acc * x);
  }
  if (!z.admissible() || !w.admissible())
    throw InadmissiblePoint("full kernel pairing needs points inside the ball", std::max(z.rowNorm, w.rowNorm));
  const Index nz = z.n, nw = w.n;
  // vec(Z X W^*) = (conj(W) kron Z) vec(X)
  CMatrix op = CMatrix::Identity(nz * nw, nz * nw);
  for (int k = 0; k < z.d; ++k)
    op -= kron<Complex>(CMatrix(w.Z[std::size_t(k)].conjugate()), z.Z[std::size_t(k)]);
  CVector rhs = Eigen::Map<const CVector>(c.data(), c.size());
  CVector sol = op.partialPivLu().solve(rhs);
  CMatrix xm = Eigen::Map<const CMatrix>(sol.data(), nz, nw);
  return Complex(y.adjoint() * xm * x);
}

namespace {

void requireInner(const Series& theta, int n, double tol) {
  if (theta.rows() != 1 || theta.cols() != 1) throw ShapeMismatch("model kernels need a scalar inner");
  FockBasis b(theta.alphabet(), manageable_degree(theta.alphabet(), n));
  double def;
  if (theta.degree() <= b.maxDegree()) {
    OperatorMatrix m = mult_operator(theta, b);
    def = isometry_defect(m, m.validDegree);
  } else {
    // Only the vacuum column is fully known at this truncation.
    def = std::abs(h2_norm(theta) - 1.0);
  }
  if (def > tol) throw DomainError("series fails the inner test (isometry defect " + std::to_string(def) + ")");
}

}  // namespace

KernelVector model_kernel(const Series& theta, const NcPoint& z, const CVector& y, const CVector& v, int n,
                          double innerTol) {
  requireInner(theta, n, innerTol);
  KernelVector k = szego_kernel(z, y, v, n);
  CMatrix tz = eval(theta, z);
  KernelVector k2 = szego_kernel(z, tz.adjoint() * y, v, n);
  k.series = k.series - series_mul(theta.withMaxDegree(n), k2.series);
  return k;
}

Complex model_kernel_pairing(const CMatrix& thetaZ, const CMatrix& thetaW, const NcPoint& z, const CVector& y,
                             const CVector& v, const NcPoint& w, const CVector& x, const CVector& u, int n) {
  return kernel_pairing(z, y, v, w, x, u, n) -
         kernel_pairing(z, thetaZ.adjoint() * y, v, w, thetaW.adjoint() * x, u, n);
}

Membership sing_membership(const Series& h, const NcPoint& z, const CVector& y, double tol) {
  CMatrix hz = eval(h, z);
  if (y.size() != hz.rows())
    throw ShapeMismatch("vector length " + std::to_string(y.size()) + " does not match H(Z) with " +
                        std::to_string(hz.rows()) + " rows");
  Membership m;
  m.residual = (y.adjoint() * hz).norm();
  double hn = hz.size() ? Eigen::JacobiSVD<CMatrix>(hz).singularValues()(0) : 0.0;
  m.threshold = tol * y.norm() * (1.0 + hn);
  m.member = m.residual <= m.threshold;
  return m;
}

SingularityPair sing_closure_direct_sum(const SingularityPair& p1, const SingularityPair& p2, Complex c) {
  SingularityPair out;
  out.Z = direct_sum(p1.Z, p2.Z);
  out.y.resize(p1.y.size() + p2.y.size());
  out.y << p1.y, c * p2.y;
  return out;
}

SingularityPair sing_closure_similarity(const SingularityPair& p, const CMatrix& s) {
  SingularityPair out;
  out.Z = similarity(p.Z, s);
  if (!out.Z.admissible()) throw InadmissiblePoint("conjugated point leaves the ball", out.Z.rowNorm);
  out.y = s.adjoint() * p.y;
  return out;
}

std::vector<CVector> standard_probes(int n) {
  std::vector<CVector> out;
  for (int i = 0; i < n; ++i) out.push_back(CVector::Unit(n, i));
  return out;
}

CMatrix sing_space_complement(const std::vector<SingularityPair>& pairs, int d, int n,
                              const std::vector<std::vector<CVector>>& probes) {
  FockBasis basis(d, n);
  std::vector<CVector> cols;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    std::vector<CVector> vs = i < probes.size() && !probes[i].empty() ? probes[i] : standard_probes(p.Z.n);
    for (const auto& v : vs) cols.push_back(to_vector(szego_kernel(p.Z, p.y, v, n).series, basis));
  }
  CMatrix a(basis.dim(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) a.col(static_cast<Index>(j)) = cols[j];
  return orthonormal_range(a, kKernelRankTol);
}

Compression compress_to_finite(const NcPoint& z, const CVector& y, const Series& p, double tol) {
  if (y.norm() == 0) throw DomainError("compression needs a nonzero vector");
  if (p.rows() != 1 || p.cols() != 1) throw ShapeMismatch("compression is defined for scalar polynomials");
  Membership mem = sing_membership(p, z, y, tol);
  if (!mem.member)
    throw DomainError("pair is not in the singularity locus (residual " + std::to_string(mem.residual) + ")");
  const int m = std::max(p.degree(), 0);
  // Vectors (Z^w)^* y = Z_{w_k}^* ... Z_{w_1}^* y, built by prepending letters to w.
  std::vector<CVector> vecs{y};
  std::vector<CVector> level{y};
  for (int k = 1; k <= m; ++k) {
    std::vector<CVector> next;
    for (const auto& v : level)
      for (int a = 0; a < z.d; ++a) next.push_back(z.Z[std::size_t(a)].adjoint() * v);
    vecs.insert(vecs.end(), next.begin(), next.end());
    level = std::move(next);
  }
  CMatrix a(z.n, static_cast<Index>(vecs.size()));
  for (std::size_t j = 0; j < vecs.size(); ++j) a.col(static_cast<Index>(j)) = vecs[j];
  CMatrix q = orthonormal_range(a, kKernelRankTol);
  std::vector<CMatrix> x;
  for (const auto& zk : z.Z) x.push_back(q.adjoint() * zk * q);
  return Compression{NcPoint(std::move(x)), q.adjoint() * y};
}

Membership extended_membership(const Series& h, const NcPoint& z, const CVector& y, const CVector& v, double tol) {
  if (h.rows() != 1 || h.cols() != 1) throw ShapeMismatch("extended membership is defined for scalar series");
  CMatrix hz = eval(h, z);
  // Krylov space of the tuple at v.
  CMatrix basis(z.n, 0);
  std::vector<CVector> frontier{v};
  auto absorb = [&](const CVector& c) {
    CVector r = c - basis * (basis.adjoint() * c);
    r -= basis * (basis.adjoint() * r);
    if (r.norm() > kKernelRankTol * std::max(1.0, c.norm())) {
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = r / r.norm();
      return true;
    }
    return false;
  };
  std::vector<CVector> grown;
  for (const auto& c : frontier)
    if (absorb(c)) grown.push_back(c);
  while (!grown.empty() && basis.cols() < z.n) {
    std::vector<CVector> next;
    for (const auto& c : grown)
      for (const auto& zk : z.Z) {
        CVector w = zk * c;
        if (absorb(w)) next.push_back(w);
      }
    grown = std::move(next);
  }
  CVector t = hz.adjoint() * y;
  Membership m;
  m.residual = (basis.adjoint() * t).norm();
  double hn = Eigen::JacobiSVD<CMatrix>(hz).singularValues()(0);
  m.threshold = tol * y.norm() * v.norm() * (1.0 + hn);
  m.member = m.residual <= m.threshold;
  return m;
}

namespace {

using Objective = std::function<double(const Eigen::VectorXd&)>;

Eigen::VectorXd nelder_mead(const Objective& f, Eigen::VectorXd x0, double step, int iterations) {
  const Index n = x0.size();
  std::vector<Eigen::VectorXd> simplex{x0};
  for (Index i = 0; i < n; ++i) {
    Eigen::VectorXd x = x0;
    x(i) += step;
    simplex.push_back(x);
  }
  std::vector<double> val;
  for (const auto& x : simplex) val.push_back(f(x));
  std::vector<std::size_t> order(simplex.size());
  for (int it = 0; it < iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    for (auto i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(val[i]);
    }
    simplex = std::move(s2);
    val = std::move(v2);
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) centroid += simplex[std::size_t(i)];
    centroid /= double(n);
    const Eigen::VectorXd& worst = simplex.back();
    Eigen::VectorXd xr = centroid + (centroid - worst);
    double fr = f(xr);
    if (fr < val.front()) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);
      double fe = f(xe);
      if (fe < fr) {
        simplex.back() = xe;
        val.back() = fe;
      } else {
        simplex.back() = xr;
        val.back() = fr;
      }
    } else if (fr < val[val.size() - 2]) {
      simplex.back() = xr;
      val.back() = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (worst - centroid);
      double fc = f(xc);
      if (fc < val.back()) {
        simplex.back() = xc;
        val.back() = fc;
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
          val[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t best = std::size_t(std::min_element(val.begin(), val.end()) - val.begin());
  return simplex[best];
}

}  // namespace

std::vector<SingularityPair> find_singular_pairs(const Series& h, const SearchOptions& opt, std::mt19937_64& rng) {
  const int d = h.alphabet();
  const int n = opt.level;
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (opt.shape == TupleShape::General || j > i) slots.emplace_back(i, j);
  const Index nparam = Index(2 * d * slots.size());
  auto toPoint = [&](const Eigen::VectorXd& x) {
    std::vector<CMatrix> z(std::size_t(d), CMatrix::Zero(n, n));
    Index c = 0;
    for (int k = 0; k < d; ++k)
      for (auto [i, j] : slots) {
        z[std::size_t(k)](i, j) = Complex(x(c), x(c + 1));
        c += 2;
      }
    NcPoint p(std::move(z));
    if (p.rowNorm > opt.maxRowNorm) p = p.scaled(opt.maxRowNorm / p.rowNorm);
    return p;
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    NcPoint p = toPoint(x);
    CMatrix hz = eval_tuple(h, p.Z);
    Eigen::JacobiSVD<CMatrix> svd(hz);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) / (1.0 + s(0));
  };
  std::normal_distribution<double> gauss(0.0, 0.5);
  std::vector<SingularityPair> found;
  for (int s = 0; s < opt.starts; ++s) {
    Eigen::VectorXd x(nparam);
    for (Index i = 0; i < nparam; ++i) x(i) = gauss(rng);
    double step = 0.2;
    for (int round = 0; round < 6; ++round) {
      x = nelder_mead(objective, x, step, opt.iterations);
      step *= 0.1;
    }
    NcPoint p = toPoint(x);
    CMatrix hz = eval_tuple(h, p.Z);
    Eigen::JacobiSVD<CMatrix> svd(hz, Eigen::ComputeFullU);
    CVector y = svd.matrixU().col(svd.matrixU().cols() - 1);
    if (!p.admissible()) continue;
    if (sing_membership(h, p, y, opt.tol).member) found.push_back(SingularityPair{p, y});
  }
  return found;
}

}  // namespace nchardy
