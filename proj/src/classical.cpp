#include "nchardy/classical.hpp"

#include <algorithm>
#include <cmath>

#include "nchardy/transforms.hpp"

namespace nchardy {

namespace {

Word power_word(int k) { return Word(1, std::vector<int>(static_cast<std::size_t>(k), 1)); }

// Quotient of sum_j c[j] z^j by (z - w), remainder dropped.
std::vector<Complex> deflate(const std::vector<Complex>& c, Complex w) {
  const std::size_t m = c.size() - 1;
  std::vector<Complex> q(m);
  q[m - 1] = c[m];
  for (std::size_t j = m - 1; j >= 1; --j) q[j - 1] = c[j] + w * q[j];
  return q;
}

}  // namespace

Series poly_series(const std::vector<Complex>& coeffs, int n) {
  Series p(1, 1, 1, n);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != Complex(0)) p.set(power_word(static_cast<int>(k)), CMatrix::Constant(1, 1, coeffs[k]));
  return p;
}

Series blaschke_product(const std::vector<Complex>& zeros, int n) {
  Series b = Series::scalar(1, 1.0, n);
  const Series z = Series::variable(1, 1, n);
  for (Complex w : zeros) {
    if (!(std::abs(w) < 1)) throw DomainError("Blaschke zero on or outside the unit circle");
    if (w == Complex(0)) {
      b = series_mul(b, z);
      continue;
    }
    Series num = Series::scalar(1, w, n) - z;
    Series den = Series::scalar(1, 1.0, n) - std::conj(w) * z;
    b = series_mul(b, (std::abs(w) / w) * series_mul(num, series_invert(den)));
  }
  return b;
}

std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
  std::size_t top = coeffs.size();
  while (top > 0 && coeffs[top - 1] == Complex(0)) --top;
  if (top == 0) throw DomainError("the zero polynomial has no factorization");
  std::size_t low = 0;
  while (coeffs[low] == Complex(0)) ++low;
  std::vector<Complex> roots(low, Complex(0));
  const Index m = static_cast<Index>(top - 1 - low);
  if (m > 0) {
    // Companion matrix of the monic polynomial z^m + sum_j (c_j / c_m) z^j.
    CMatrix comp = CMatrix::Zero(m, m);
    const Complex lead = coeffs[top - 1];
    for (Index j = 0; j < m; ++j) comp(j, m - 1) = -coeffs[low + std::size_t(j)] / lead;
    for (Index j = 1; j < m; ++j) comp(j, j - 1) = 1;
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    for (Index j = 0; j < m; ++j) roots.push_back(es.eigenvalues()(j));
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return roots;
}

DiskFactorization poly_factor_classical(const std::vector<Complex>& coeffs, int n) {
  std::vector<Complex> roots = poly_roots(coeffs);
  DiskFactorization out;
  for (Complex r : roots) {
    if (std::abs(std::abs(r) - 1) <= kBoundaryMargin)
      throw Diagnostic("root on the unit circle (|r| = " + std::to_string(std::abs(r)) + ")");
    if (std::abs(r) < 1 - kBoundaryMargin) out.zeros.push_back(r);
  }
  Series p = poly_series(coeffs, n);
  Series raw = blaschke_product(out.zeros, n);
  const int k0 = std::max(raw.order(), 0);
  const Complex c0 = raw.at(power_word(k0));
  out.phase = c0 / std::abs(c0);
  out.blaschke = std::conj(out.phase) * raw;
  out.singular = Series::scalar(1, 1.0, n);
  // p / blaschke: deflate each zero, then (z - w) / phi_w(z) = -(w/|w|)(1 - conj(w) z).
  std::vector<Complex> q(coeffs);
  while (q.size() > 1 && q.back() == Complex(0)) q.pop_back();
  Series outer = Series::scalar(1, out.phase, n);
  for (Complex w : out.zeros) {
    q = deflate(q, w);
    if (w == Complex(0)) continue;
    Series lin = Series::scalar(1, 1.0, n) - std::conj(w) * Series::variable(1, 1, n);
    outer = series_mul(outer, (-w / std::abs(w)) * lin);
  }
  out.outer = series_mul(outer, poly_series(q, n));
  out.reconstructionError = max_coeff_diff(series_mul(series_mul(out.blaschke, out.singular), out.outer), p, n);
  return out;
}

Series atomic_singular(double t, int n) {
  if (!(t >= 0)) throw DomainError("atomic singular inner needs t >= 0");
  return semigroup_inner(Series::variable(1, 1, n), t, n);
}

std::vector<JordanBlock> jordan_blocks(const std::vector<Complex>& zeros, double clusterTol) {
  std::vector<JordanBlock> blocks;
  std::vector<std::vector<Complex>> members;
  for (Complex w : zeros) {
    bool merged = false;
    for (std::size_t i = 0; i < blocks.size() && !merged; ++i)
      if (std::abs(blocks[i].w - w) <= clusterTol) {
        members[i].push_back(w);
        Complex s = 0;
        for (Complex x : members[i]) s += x;
        blocks[i].w = s / double(members[i].size());
        ++blocks[i].multiplicity;
        merged = true;
      }
    if (!merged) {
      blocks.push_back(JordanBlock{w, 1, 0, "", NcPoint()});
      members.push_back({w});
    }
  }
  for (auto& b : blocks) {
    const double a = std::abs(b.w);
    b.epsilon = (1 - a) / 2;
    b.binding = "contractivity";
    if (a > 0 && b.epsilon >= a) {
      b.epsilon = a / 2;
      b.binding = "epsilon<|w|";
    }
    const int k = b.multiplicity;
    CMatrix j = b.w * CMatrix::Identity(k, k);
    for (int i = 0; i + 1 < k; ++i) j(i, i + 1) = b.epsilon;
    b.point = NcPoint({j});
  }
  return blocks;
}

std::vector<SingularityPair> jordan_pairs(const std::vector<JordanBlock>& blocks) {
  std::vector<SingularityPair> pairs;
  for (const auto& b : blocks)
    for (const auto& y : standard_probes(b.multiplicity)) pairs.push_back(SingularityPair{b.point, y});
  return pairs;
}

ClassicalComparison compare_with_nc(const std::vector<Complex>& coeffs, int n) {
  ClassicalComparison out;
  out.classical = poly_factor_classical(coeffs, n);
  out.blocks = jordan_blocks(out.classical.zeros);
  out.nc = bso_factor(poly_series(coeffs, n), n, jordan_pairs(out.blocks));
  out.validDegree = std::min(n, out.nc.split.validDegree);
  out.blaschkeDiff = max_coeff_diff(out.nc.B, out.classical.blaschke, out.validDegree);
  out.singularDiff = max_coeff_diff(out.nc.S, out.classical.singular, out.validDegree);
  out.outerDiff = max_coeff_diff(out.nc.F, out.classical.outer, out.validDegree);
  return out;
}

}  // namespace nchardy
