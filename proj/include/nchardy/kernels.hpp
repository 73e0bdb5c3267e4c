#pragma once

#include <random>
#include <vector>

#include "nchardy/evaluate.hpp"
#include "nchardy/fock.hpp"
#include "nchardy/series.hpp"

namespace nchardy {

inline constexpr double kKernelRankTol = 1e-10;

// A point Z with a vector y such that y^* H(Z) = 0.
struct SingularityPair {
  NcPoint Z;
  CVector y;
};

// K{Z,y,v}: coefficient at w is conj(y^* Z^w v), so that <K{Z,y,v}, f> = y^* f(Z) v.
struct KernelVector {
  Series series;
  NcPoint Z;
  CVector y;
  CVector v;
};

struct Membership {
  bool member = false;
  double residual = 0;
  double threshold = 0;
};

// Coefficient pairing sum_w tr(f_w^* g_w), conjugate-linear in f.
Complex pairing(const Series& f, const Series& g);

KernelVector szego_kernel(const NcPoint& z, const CVector& y, const CVector& v, int n);

// <K{Z,y,v}, K{W,x,u}> summed over words of length <= n; n < 0 sums the whole series
// by solving X = v u^* + sum_k Z_k X W_k^*.
Complex kernel_pairing(const NcPoint& z, const CVector& y, const CVector& v, const NcPoint& w, const CVector& x,
                       const CVector& u, int n = -1);

// K{Z,y,v} - Theta(L) K{Z, Theta(Z)^* y, v}, truncated at n. Theta must pass the inner test.
KernelVector model_kernel(const Series& theta, const NcPoint& z, const CVector& y, const CVector& v, int n,
                          double innerTol = 1e-8);

// <K^Theta{Z,y,v}, K^Theta{W,x,u}> from the values Theta(Z), Theta(W).
Complex model_kernel_pairing(const CMatrix& thetaZ, const CMatrix& thetaW, const NcPoint& z, const CVector& y,
                             const CVector& v, const NcPoint& w, const CVector& x, const CVector& u, int n = -1);

// ||y^* H(Z)|| <= tol ||y|| (1 + ||H(Z)||). For p x q valued H, y has length n*p.
Membership sing_membership(const Series& h, const NcPoint& z, const CVector& y, double tol);

SingularityPair sing_closure_direct_sum(const SingularityPair& p1, const SingularityPair& p2, Complex c);
// (S^{-1} Z S, S^* y).
SingularityPair sing_closure_similarity(const SingularityPair& p, const CMatrix& s);

// Probe vectors default to the standard basis of each pair's level.
std::vector<CVector> standard_probes(int n);

// Orthonormal frame (rows indexed by FockBasis(d, n)) of the span of the truncated kernels.
CMatrix sing_space_complement(const std::vector<SingularityPair>& pairs, int d, int n,
                              const std::vector<std::vector<CVector>>& probes = {});

struct Compression {
  NcPoint X;
  CVector x;
};

// Compression of Z to span{(Z^w)^* y : |w| <= deg p}.
Compression compress_to_finite(const NcPoint& z, const CVector& y, const Series& p, double tol = 1e-8);

// H(Z)^* y orthogonal to span{q(Z) v : q polynomial}.
Membership extended_membership(const Series& h, const NcPoint& z, const CVector& y, const CVector& v, double tol);

enum class TupleShape { General, StrictlyUpper };

struct SearchOptions {
  int level = 2;
  int starts = 8;
  int iterations = 400;
  double maxRowNorm = 0.95;
  double tol = 1e-10;
  TupleShape shape = TupleShape::General;
};

// Multi-start descent on sigma_min(H(Z)); every returned pair passes sing_membership.
std::vector<SingularityPair> find_singular_pairs(const Series& h, const SearchOptions& opt, std::mt19937_64& rng);

}  // namespace nchardy
