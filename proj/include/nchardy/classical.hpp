#pragma once

#include <string>
#include <vector>

#include "nchardy/factorization.hpp"
#include "nchardy/kernels.hpp"
#include "nchardy/series.hpp"

namespace nchardy {

inline constexpr double kBoundaryMargin = 1e-10;

// Product of (|w|/w)(w - z)/(1 - conj(w) z), with z for w = 0, as a one-variable series.
Series blaschke_product(const std::vector<Complex>& zeros, int n);

// Roots of sum_k coeffs[k] z^k from the companion matrix, zero roots listed exactly.
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs);

struct DiskFactorization {
  std::vector<Complex> zeros;
  Series blaschke;
  Series singular;
  Series outer;
  Complex phase{1.0, 0.0};
  double reconstructionError = 0;
};

// Classical factorization of a polynomial (coefficients in ascending powers). The Blaschke
// factor is phase-normalized like the NC inner factors; outer absorbs the phase.
DiskFactorization poly_factor_classical(const std::vector<Complex>& coeffs, int n);

// exp(-t (1 + z)/(1 - z)).
Series atomic_singular(double t, int n);

struct JordanBlock {
  Complex w;
  int multiplicity = 1;
  double epsilon = 0;
  // "contractivity" when (1 - |w|)/2 is used, "epsilon<|w|" when the cap |w|/2 binds.
  std::string binding;
  NcPoint point;
};

// Roots closer than clusterTol are merged into one block of the combined multiplicity.
std::vector<JordanBlock> jordan_blocks(const std::vector<Complex>& zeros, double clusterTol = 1e-6);

// Pairs (J, e_i) for every block and every standard basis vector.
std::vector<SingularityPair> jordan_pairs(const std::vector<JordanBlock>& blocks);

struct ClassicalComparison {
  DiskFactorization classical;
  BsoResult nc;
  std::vector<JordanBlock> blocks;
  double blaschkeDiff = 0;
  double singularDiff = 0;
  double outerDiff = 0;
  int validDegree = 0;
};

ClassicalComparison compare_with_nc(const std::vector<Complex>& coeffs, int n);

Series poly_series(const std::vector<Complex>& coeffs, int n);

}  // namespace nchardy
