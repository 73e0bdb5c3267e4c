#include "nchardy/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nchardy {

namespace {

// Largest Fock dimension used for dense subspace work.
constexpr Index kDenseDim = 1024;

void requireNonzero(const Series& h, const char* what) {
  if (h.isZero()) throw DomainError(std::string(what) + " of the zero series");
}

// (R_k tensor I_p) applied to the rows of a frame; the top degree falls off.
CMatrix shift_rows(const CMatrix& x, const FockBasis& basis, int p, int k) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  const int n = basis.maxDegree();
  for (Index i = 0; i < basis.dimUpTo(n - 1); ++i)
    out.middleRows(basis.index(basis.word(i).append(k)) * p, p) = x.middleRows(i * p, p);
  return out;
}

}  // namespace

Subspace range_closure(const Series& h, int n) {
  requireNonzero(h, "range closure");
  if (h.degree() > n)
    throw DomainError("range closure needs deg H <= N (" + std::to_string(h.degree()) + " > " + std::to_string(n) +
                      ")");
  FockBasis basis(h.alphabet(), n);
  OperatorMatrix a = mult_operator(h, basis);
  Subspace s;
  s.basis = basis;
  s.coefDim = h.rows();
  s.validDegree = a.validDegree;
  s.frame = orthonormal_range(a.entries.leftCols(window_columns(a, a.validDegree)), kSubspaceRankTol);
  s.rInvariant = true;
  return s;
}

Subspace wandering_subspace(const Subspace& m, double eigTol) {
  if (!m.rInvariant) throw DomainError("wandering subspace of a subspace not flagged R-invariant");
  const FockBasis& basis = m.basis;
  const int p = m.coefDim;
  const int n = basis.maxDegree();
  Subspace w;
  w.basis = basis;
  w.coefDim = p;
  w.validDegree = m.validDegree;
  w.frame = CMatrix(m.frame.rows(), 0);
  if (m.dim() == 0) return w;
  const Index top = basis.offset(n) * p;
  CMatrix lower = m.frame * null_space(m.frame.bottomRows(m.frame.rows() - top), kSubspaceRankTol);
  CMatrix shifted(m.frame.rows(), lower.cols() * basis.alphabet());
  for (int k = 1; k <= basis.alphabet(); ++k)
    shifted.middleCols((k - 1) * lower.cols(), lower.cols()) = shift_rows(lower, basis, p, k);
  CMatrix c = m.frame.adjoint() * orthonormal_range(shifted, kSubspaceRankTol);
  CMatrix proj = CMatrix::Identity(m.dim(), m.dim()) - c * c.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(proj);
  std::vector<Index> keep;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - 1.0) <= eigTol) keep.push_back(i);
  w.frame.resize(m.frame.rows(), static_cast<Index>(keep.size()));
  // Eigenvalues come sorted ascending; list the wandering vectors from the top down.
  for (std::size_t j = 0; j < keep.size(); ++j)
    w.frame.col(static_cast<Index>(j)) = m.frame * es.eigenvectors().col(keep[keep.size() - 1 - j]);
  return w;
}

Series frame_to_row(const Subspace& w) {
  if (w.dim() == 0) throw Diagnostic("empty wandering frame");
  Series row = to_series(w.frame.col(0), w.basis, w.coefDim);
  for (Index j = 1; j < w.dim(); ++j) row = hcat(row, to_series(w.frame.col(j), w.basis, w.coefDim));
  return row;
}

Series adjoint_apply(const Series& omega, const Series& h) {
  if (omega.alphabet() != h.alphabet()) throw AlphabetMismatch("adjoint action across alphabets");
  if (omega.rows() != h.rows()) throw ShapeMismatch("adjoint action needs matching row counts");
  const int d = h.alphabet();
  Series out(d, omega.cols(), h.cols(), std::min(omega.maxDegree(), h.maxDegree()));
  // (Omega(L)^* H)_beta = sum_alpha Omega_alpha^* H_{alpha beta}
  for (const auto& [g, hg] : h.coeffs()) {
    for (int i = 0; i <= g.size(); ++i) {
      Word a(d, std::vector<int>(g.letters().begin(), g.letters().begin() + i));
      auto it = omega.coeffs().find(a);
      if (it == omega.coeffs().end()) continue;
      Word b(d, std::vector<int>(g.letters().begin() + i, g.letters().end()));
      out.add(b, it->second.adjoint() * hg);
    }
  }
  return out.prune();
}

double series_isometry_defect(const Series& f, int window) {
  const int d = f.alphabet();
  const int q = f.cols();
  FockBasis basis(d, std::max(window, 0));
  // Autocorrelations u_sigma = sum_gamma f_gamma^* f_{gamma sigma} for |sigma| <= window.
  std::vector<CMatrix> u(static_cast<std::size_t>(basis.dim()), CMatrix::Zero(q, q));
  for (const auto& [g, fg] : f.coeffs()) {
    for (Index s = 0; s < basis.dim(); ++s) {
      auto it = f.coeffs().find(g * basis.word(s));
      if (it != f.coeffs().end()) u[std::size_t(s)] += fg.adjoint() * it->second;
    }
  }
  const Index dim = basis.dim() * q;
  CMatrix gram = CMatrix::Zero(dim, dim);
  for (Index a = 0; a < basis.dim(); ++a)
    for (Index b = 0; b < basis.dim(); ++b) {
      const Word& wa = basis.word(a);
      const Word& wb = basis.word(b);
      if (wa.size() >= wb.size()) {
        // a = sigma b
        const int ls = wa.size() - wb.size();
        if (!std::equal(wb.letters().begin(), wb.letters().end(), wa.letters().begin() + ls)) continue;
        Word sigma(d, std::vector<int>(wa.letters().begin(), wa.letters().begin() + ls));
        gram.block(a * q, b * q, q, q) = u[std::size_t(basis.index(sigma))].adjoint();
      } else {
        const int ls = wb.size() - wa.size();
        if (!std::equal(wa.letters().begin(), wa.letters().end(), wb.letters().begin() + ls)) continue;
        Word sigma(d, std::vector<int>(wb.letters().begin(), wb.letters().begin() + ls));
        gram.block(a * q, b * q, q, q) = u[std::size_t(basis.index(sigma))];
      }
    }
  gram -= CMatrix::Identity(dim, dim);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::map<Word, CMatrix, DegLex> autocorrelation(const Series& f) {
  std::map<Word, CMatrix, DegLex> u;
  const int d = f.alphabet();
  for (const auto& [g, fg] : f.coeffs())
    for (const auto& [gs, fgs] : f.coeffs()) {
      if (gs.size() < g.size() || !std::equal(g.letters().begin(), g.letters().end(), gs.letters().begin())) continue;
      Word sigma(d, std::vector<int>(gs.letters().begin() + g.size(), gs.letters().end()));
      CMatrix c = fg.adjoint() * fgs;
      auto [pos, fresh] = u.emplace(sigma, c);
      if (!fresh) pos->second += c;
    }
  return u;
}

double symbol_defect(const Series& g, const Series& f) {
  if (g.alphabet() != f.alphabet()) throw AlphabetMismatch("symbol defect across alphabets");
  if (g.cols() != f.cols()) throw ShapeMismatch("symbol defect needs matching column counts");
  auto ug = autocorrelation(g);
  for (auto& [w, m] : autocorrelation(f)) {
    auto [pos, fresh] = ug.emplace(w, -m);
    if (!fresh) pos->second -= m;
  }
  double worst = 0;
  for (const auto& [w, m] : ug) worst = std::max(worst, m.cwiseAbs().maxCoeff());
  return worst;
}

SpectralFactor spectral_factor(const Series& h, int n, int maxIterations) {
  requireNonzero(h, "spectral factor");
  const int d = h.alphabet();
  const int q = h.cols();
  Series hh = h.withMaxDegree(n);
  const int m = std::max(hh.degree(), 0);

  // Symbol of H(L)^* H(L): u_beta = sum_alpha H_alpha^* H_{alpha beta}.
  std::map<Word, CMatrix, DegLex> u;
  for (const auto& [g, hg] : hh.coeffs())
    for (int i = 0; i <= g.size(); ++i) {
      Word a(d, std::vector<int>(g.letters().begin(), g.letters().begin() + i));
      auto it = hh.coeffs().find(a);
      if (it == hh.coeffs().end()) continue;
      Word b(d, std::vector<int>(g.letters().begin() + i, g.letters().end()));
      CMatrix c = it->second.adjoint() * hg;
      auto [pos, fresh] = u.emplace(b, c);
      if (!fresh) pos->second += c;
    }
  auto symbol = [&](const Word& w) {
    auto it = u.find(w);
    return it == u.end() ? CMatrix(CMatrix::Zero(q, q)) : it->second;
  };
  CMatrix t0 = symbol(Word(d));

  SpectralFactor out;
  CMatrix s = t0;
  CMatrix y, bvec;
  std::vector<CMatrix> c, shift;
  FockBasis wb(d, std::max(m - 1, 0));
  const Index dimY = m == 0 ? 0 : wb.dim() * q;
  if (m == 0) {
    out.converged = true;
  } else {
    const Index n0 = wb.dim();
    for (int k = 1; k <= d; ++k) {
      CMatrix ck(dimY, q);
      for (Index i = 0; i < n0; ++i) ck.middleRows(i * q, q) = symbol(wb.word(i).append(k));
      c.push_back(ck);
      CMatrix rk = CMatrix::Zero(dimY, dimY);
      for (Index i = 0; i < wb.dimUpTo(m - 2); ++i)
        rk.block(wb.index(wb.word(i).append(k)) * q, i * q, q, q).setIdentity();
      shift.push_back(rk);
    }
    CMatrix e0 = CMatrix::Zero(dimY, q);
    e0.topRows(q).setIdentity();
    y = CMatrix::Zero(dimY, dimY);
    auto schur = [&](const CMatrix& yy) {
      CMatrix ss = t0;
      for (int k = 0; k < d; ++k) ss -= c[std::size_t(k)].adjoint() * yy * c[std::size_t(k)];
      return CMatrix(0.5 * (ss + ss.adjoint()));
    };
    auto border = [&](const CMatrix& yy) {
      CMatrix bb = e0;
      for (int k = 0; k < d; ++k) bb -= shift[std::size_t(k)] * (yy * c[std::size_t(k)]);
      return bb;
    };
    for (int it = 1; it <= maxIterations; ++it) {
      s = schur(y);
      Eigen::LLT<CMatrix> llt(s);
      if (llt.info() != Eigen::Success) break;
      bvec = border(y);
      CMatrix next = bvec * llt.solve(bvec.adjoint());
      for (int k = 0; k < d; ++k) next += shift[std::size_t(k)] * y * shift[std::size_t(k)].adjoint();
      next = 0.5 * (next + next.adjoint());
      double diff = (next - y).cwiseAbs().maxCoeff();
      double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
      y = std::move(next);
      out.iterations = it;
      out.fixedPointResidual = diff / scale;
      if (!std::isfinite(diff) || scale > 1e14) break;
      if (diff <= 1e-14 * scale) {
        out.converged = true;
        break;
      }
    }
    s = schur(y);
    bvec = border(y);
  }
  out.minSchur = sigma_min(s);
  if (!out.converged || !(out.minSchur > 0)) {
    out.converged = false;
    return out;
  }

  Eigen::LLT<CMatrix> llt(s);
  if (llt.info() != Eigen::Success) {
    out.converged = false;
    return out;
  }
  CMatrix sinv = llt.solve(CMatrix::Identity(q, q));
  CMatrix root = hermitian_sqrt(s);
  // Columns of the inverse Toeplitz operator at the vacuum give F^{-1} F(0)^{-*}.
  Series finv(d, q, q, n);
  if (m == 0) {
    finv.set(Word(d), sinv * root);
  } else {
    CMatrix bs = sinv * bvec.adjoint();
    std::vector<std::pair<Word, CMatrix>> level{{Word(d), y.topRows(q)}};
    for (int deg = 0; deg <= n && !level.empty(); ++deg) {
      std::vector<std::pair<Word, CMatrix>> next;
      for (const auto& [w, g] : level) {
        finv.set(w, g.leftCols(q) * root);
        if (deg == n) continue;
        for (int k = 1; k <= d; ++k) {
          CMatrix gk = g * shift[std::size_t(k - 1)].adjoint() - (g * c[std::size_t(k - 1)]) * bs;
          if (gk.cwiseAbs().maxCoeff() > 0) next.emplace_back(w.append(k), std::move(gk));
        }
      }
      level = std::move(next);
    }
    finv.prune();
  }
  out.inner = series_mul(hh, finv);
  out.outer = series_invert(finv);
  return out;
}

void normalize_phase(Series& inner, Series& outer) {
  const int m = inner.cols();
  std::vector<Complex> phase(static_cast<std::size_t>(m), Complex(1));
  double scale = 0;
  for (const auto& [w, c] : inner.coeffs()) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  const double cut = 1e-12 * scale;
  for (int j = 0; j < m; ++j) {
    bool found = false;
    for (const auto& [w, c] : inner.coeffs()) {
      for (Index i = 0; i < c.rows() && !found; ++i)
        if (std::abs(c(i, j)) > cut) {
          phase[std::size_t(j)] = c(i, j) / std::abs(c(i, j));
          found = true;
        }
      if (found) break;
    }
  }
  Series a(inner.alphabet(), inner.rows(), inner.cols(), inner.maxDegree());
  for (const auto& [w, c] : inner.coeffs()) {
    CMatrix x = c;
    for (int j = 0; j < m; ++j) x.col(j) *= std::conj(phase[std::size_t(j)]);
    a.set(w, x);
  }
  Series b(outer.alphabet(), outer.rows(), outer.cols(), outer.maxDegree());
  for (const auto& [w, c] : outer.coeffs()) {
    CMatrix x = c;
    for (int j = 0; j < m; ++j) x.row(j) *= phase[std::size_t(j)];
    b.set(w, x);
  }
  inner = std::move(a);
  outer = std::move(b);
}

FactorizationResult inner_outer(const Series& h, int n) {
  requireNonzero(h, "inner-outer factorization");
  const int d = h.alphabet();
  Series hh = h.withMaxDegree(n);
  const int deg = std::max(hh.degree(), 0);
  const int nw = manageable_degree(d, n, kDenseDim / std::max(h.rows(), 1));

  FactorizationResult res;
  bool haveFrame = deg <= nw;
  Subspace wand;
  if (haveFrame) {
    wand = wandering_subspace(range_closure(hh, nw));
    res.wanderingDim = static_cast<int>(wand.dim());
    if (res.wanderingDim == 0) throw Diagnostic("rank collapse: no wandering vectors above threshold");
  }

  SpectralFactor sf = spectral_factor(hh, n);
  if (sf.converged) {
    res.inner = sf.inner;
    res.outer = sf.outer;
    res.validDegree = n;
    res.method = "spectral";
    if (!haveFrame) res.wanderingDim = h.cols();
  } else if (haveFrame) {
    res.inner = frame_to_row(wand);
    res.outer = adjoint_apply(res.inner, hh.withMaxDegree(nw));
    res.validDegree = nw - deg;
    res.method = "truncated";
  } else {
    throw Diagnostic("spectral iteration did not converge and the truncation is too large for a dense frame");
  }
  normalize_phase(res.inner, res.outer);
  res.defects.reconstructionError = max_coeff_diff(series_mul(res.inner, res.outer), hh, res.validDegree);
  int innerDeg = std::max(res.inner.degree(), 0);
  res.defects.truncatedInnerDefect =
      series_isometry_defect(res.inner, std::min(2, std::max(0, res.inner.maxDegree() - innerDeg)));
  // With H = Theta F exact through degree N, Theta is inner iff H^* H and F^* F have the same symbol.
  res.defects.innerDefect =
      res.method == "spectral" ? symbol_defect(hh, res.outer) : res.defects.truncatedInnerDefect;
  res.defects.outerDefect = outer_defect(res.outer, n);
  return res;
}

double outer_defect(const Series& h, int n) {
  requireNonzero(h, "outer defect");
  const int d = h.alphabet();
  const int nb = manageable_degree(d, n, kDenseDim / std::max(h.rows(), 1));
  Series hh = h.withMaxDegree(nb);
  FockBasis basis(d, nb);
  OperatorMatrix a = mult_operator(hh, basis);
  CMatrix q = orthonormal_range(a.entries.leftCols(window_columns(a, std::max(a.validDegree, 0))), kSubspaceRankTol);
  double worst = 0;
  for (int i = 0; i < h.rows(); ++i) {
    CVector e = CVector::Unit(a.entries.rows(), i);
    worst = std::max(worst, (e - q * (q.adjoint() * e)).norm());
  }
  return worst;
}

VacuumSolve solve_vacuum_report(const Series& f, double r, int n) {
  if (!(r >= 0 && r < 1)) throw DomainError("solve_vacuum needs 0 <= r < 1");
  FockBasis basis(f.alphabet(), n);
  OperatorMatrix a = mult_operator(rescale(f, r).withMaxDegree(n), basis);
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a.entries);
  cod.setThreshold(1e-14);
  VacuumSolve out;
  for (int i = 0; i < f.rows(); ++i) {
    CVector e = CVector::Unit(a.entries.rows(), i);
    CVector x = cod.solve(e);
    out.residual = std::max(out.residual, (a.entries * x - e).norm());
    out.solutionNorm = std::max(out.solutionNorm, x.norm());
  }
  return out;
}

double solve_vacuum(const Series& f, double r, int n) { return solve_vacuum_report(f, r, n).residual; }

double blaschke_defect(const Series& theta, const std::vector<SingularityPair>& pairs, int n) {
  requireNonzero(theta, "Blaschke defect");
  if (theta.rows() != 1 || theta.cols() != 1) throw ShapeMismatch("Blaschke defect needs a scalar inner");
  const int d = theta.alphabet();
  const int nb = manageable_degree(d, n, kDenseDim);
  Series th = theta.withMaxDegree(nb);
  Subspace ran = range_closure(th, nb);
  const Index dim = ran.basis.dim();
  CMatrix pperp = CMatrix::Identity(dim, dim) - ran.frame * ran.frame.adjoint();
  const Index c = ran.basis.dimUpTo(ran.validDegree);
  if (pairs.empty()) return ran.dim() < dim ? 1.0 : 0.0;
  CMatrix k = sing_space_complement(pairs, d, nb);
  CMatrix diff = pperp - k * k.adjoint();
  return sigma_max(diff.topLeftCorner(c, c));
}

std::vector<NcPoint> random_points(int d, int count, int maxLevel, double maxRowNorm, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> level(1, std::max(1, maxLevel));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::vector<NcPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    int n = level(rng);
    std::vector<CMatrix> z;
    for (int k = 0; k < d; ++k) {
      CMatrix m(n, n);
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) m(a, b) = Complex(gauss(rng), gauss(rng));
      z.push_back(m);
    }
    NcPoint p(std::move(z));
    double target = maxRowNorm * radius(rng);
    out.push_back(p.rowNorm > 0 ? p.scaled(target / p.rowNorm) : p);
  }
  return out;
}

SingularReport singular_test(const Series& s, const std::vector<NcPoint>& samples, double tol) {
  requireNonzero(s, "singular test");
  SingularReport rep;
  rep.constantSigma = sigma_min(s.constantTerm());
  rep.samples = static_cast<int>(samples.size());
  rep.minSampleSigma = rep.constantSigma;
  double maxRow = 0;
  for (const auto& z : samples) {
    if (!z.admissible()) throw InadmissiblePoint("singular test sample outside the ball", z.rowNorm);
    rep.minSampleSigma = std::min(rep.minSampleSigma, sigma_min(eval_tuple(s, z.Z)));
    maxRow = std::max(maxRow, z.rowNorm);
  }
  // An inner function has H^2 norm at most 1, which bounds the unseen tail.
  rep.sampleTailBound = tail_bound(1.0, maxRow, s.maxDegree());
  const int nb = manageable_degree(s.alphabet(), s.maxDegree(), kDenseDim / 2);
  FockBasis basis(s.alphabet(), nb);
  for (double r : {0.5, 0.9}) {
    OperatorMatrix a = mult_operator(rescale(s, r).withMaxDegree(nb), basis);
    rep.radiusSigma.emplace_back(r, sigma_min(a.entries));
  }
  rep.singular = rep.constantSigma > tol && rep.minSampleSigma > tol;
  for (const auto& [r, sig] : rep.radiusSigma) rep.singular = rep.singular && sig > tol;
  return rep;
}

SplitResult blaschke_singular_split(const Series& theta, const std::vector<SingularityPair>& pairs, int n,
                                    const std::vector<NcPoint>& samples, double singularTol) {
  requireNonzero(theta, "Blaschke-singular split");
  if (theta.rows() != 1 || theta.cols() != 1) throw ShapeMismatch("Blaschke-singular split needs a scalar inner");
  const int d = theta.alphabet();
  SplitResult res;
  Series th = theta.withMaxDegree(n);
  auto trivial = [&](const std::string& method) {
    res.B = Series::identity(d, 1, n);
    res.S = th;
    res.validDegree = n;
    res.method = method;
  };
  if (pairs.empty()) {
    trivial("no-pairs");
  } else {
    const int nb = manageable_degree(d, n, kDenseDim);
    FockBasis basis(d, nb);
    CMatrix k = sing_space_complement(pairs, d, nb);
    Subspace m;
    m.basis = basis;
    m.frame = orthogonal_complement(k, basis.dim());
    m.validDegree = nb;
    m.rInvariant = true;
    Subspace w = wandering_subspace(m);
    res.wanderingDim = static_cast<int>(w.dim());
    if (res.wanderingDim != 1) {
      res.samplingInsufficient = true;
      trivial("sampling-insufficient");
    } else {
      SpectralFactor sf = spectral_factor(frame_to_row(w), n);
      if (!sf.converged) throw Diagnostic("spectral factor of the Blaschke generator did not converge");
      Series b = sf.inner;
      // S = B(L)^* Theta. Solving B S = Theta on the truncated space instead amplifies rounding
      // by |w|^{-N} for zeros w of B near 0.
      Series s = adjoint_apply(b, th);
      normalize_phase(b, s);
      res.B = b;
      res.S = s;
      res.validDegree = n - std::max(b.order(), 0);
      res.method = "kernel-complement";
    }
  }
  res.reconstructionError = max_coeff_diff(series_mul(res.B, res.S), th, res.validDegree);
  res.sInnerDefect = series_isometry_defect(res.S, std::min(2, std::max(0, n - std::max(res.S.degree(), 0))));
  res.blaschkeDefect = blaschke_defect(res.B, pairs, n);
  res.thetaBlaschkeDefect = blaschke_defect(th, pairs, n);
  res.singular = singular_test(res.S, samples, singularTol);
  return res;
}

BsoResult bso_factor(const Series& h, int n, const std::vector<SingularityPair>& pairs,
                     const std::vector<NcPoint>& samples, double singularTol) {
  BsoResult res;
  res.innerOuter = inner_outer(h, n);
  res.F = res.innerOuter.outer;
  int valid = res.innerOuter.validDegree;
  if (res.innerOuter.inner.rows() == 1 && res.innerOuter.inner.cols() == 1) {
    res.split = blaschke_singular_split(res.innerOuter.inner, pairs, n);
    if (res.split.method == "kernel-complement") {
      // S = B(L)^* H F^{-1}: the adjoint acts on the polynomial H, so no truncated tail enters.
      Series g = adjoint_apply(res.split.B, h.withMaxDegree(n));
      res.split.S = series_mul(g, series_invert(res.F));
      if (res.innerOuter.method == "spectral") res.split.sInnerDefect = symbol_defect(g, res.F);
    } else if (res.innerOuter.method == "spectral") {
      res.split.sInnerDefect = res.innerOuter.defects.innerDefect;
    }
    res.split.singular = singular_test(res.split.S, samples, singularTol);
    res.B = res.split.B;
    res.S = res.split.S;
    valid = std::min(valid, res.split.validDegree);
  } else {
    res.B = res.innerOuter.inner;
    res.S = Series::identity(h.alphabet(), res.innerOuter.inner.cols(), n);
    res.split.B = res.B;
    res.split.S = res.S;
    res.split.validDegree = valid;
    res.split.method = "matrix-valued";
  }
  res.reconstructionError = max_coeff_diff(series_mul(series_mul(res.B, res.S), res.F), h.withMaxDegree(n), valid);
  return res;
}

int wandering_dimension(const Series& h, double r, int n) {
  return static_cast<int>(wandering_subspace(range_closure(rescale(h, r), n)).dim());
}

}  // namespace nchardy
