#pragma once

#include "nchardy/types.hpp"

namespace nchardy {

// Orthonormal basis of the column space; QR pivots below relTol * (largest pivot) count as zero.
CMatrix orthonormal_range(const CMatrix& a, double relTol = 1e-10);

// Orthonormal basis of the orthogonal complement of the span of an orthonormal frame.
CMatrix orthogonal_complement(const CMatrix& frame, Eigen::Index ambient);

// Orthonormal basis of the null space, with the same rank rule applied to a^*.
CMatrix null_space(const CMatrix& a, double relTol = 1e-10);

// Positive square root of a Hermitian positive semidefinite matrix.
CMatrix hermitian_sqrt(const CMatrix& a);

double sigma_min(const CMatrix& a);
double sigma_max(const CMatrix& a);

}  // namespace nchardy
