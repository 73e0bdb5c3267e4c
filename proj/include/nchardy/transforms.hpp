#pragma once

#include <vector>

#include "nchardy/evaluate.hpp"
#include "nchardy/fock.hpp"
#include "nchardy/series.hpp"

namespace nchardy {

// mu_w(Theta) = (I - conj(w) Theta)^{-1} (Theta - w I), truncated at n.
Series frostman(const Series& theta, Complex w, int n);

// sqrt(1 - |w|^2) (I - conj(w) Theta)^{-1}, truncated at n.
Series crofoot(const Series& theta, Complex w, int n);

// The same maps applied to values Theta(Z) through the functional calculus.
CMatrix frostman_value(const CMatrix& thetaZ, Complex w);
CMatrix crofoot_value(const CMatrix& thetaZ, Complex w);

struct EigenShift {
  CVector hr;
  double residual = 0;
  int residualDegree = 0;
};

// h^{(r)} = (I - conj(w)/r^n V(L))^{-1} h for V homogeneous of degree n, with the residual of
// V(rL)^* h^{(r)} = conj(w) h^{(r)} on rows of degree <= N - n.
EigenShift eigenvector_shift(const CVector& h, const Series& v, Complex w, double r, const FockBasis& basis);

// Vectors of the truncated space annihilated by V(L)^* on rows of degree <= N - deg V.
CMatrix cokernel_frame(const Series& v, const FockBasis& basis);

// H_B = (I - B)^{-1} (I + B).
Series cayley_herglotz(const Series& b, int n);

// Smallest eigenvalue of Re H(Z) over the samples.
double herglotz_min_eig(const Series& h, const std::vector<NcPoint>& samples);

// B_t = exp(-t H_B) for scalar B with B(0) != 1.
Series semigroup_inner(const Series& b, double t, int n);

struct IdempotentSplit {
  Series S;
  Series Stilde;
  CMatrix P;
  int m = 0;
  int k = 0;
  double residual = 0;
  double idempotentDefect = 0;
  int validDegree = 0;
};

inline constexpr double kIdempotentTol = 1e-9;

// S with S E S^{-1} = diag(I_m, 0_k); S^{-1} = [V_M V_K] from inner factors of E and I - E.
IdempotentSplit idempotent_split(const Series& e, int n, double tol = kIdempotentTol);

}  // namespace nchardy
